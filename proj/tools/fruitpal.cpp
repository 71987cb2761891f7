// fruitpal command-line entry point: sim, eval, dataset and hub subcommands.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fruitpal/core/calendar.hpp"
#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/random.hpp"
#include "fruitpal/dataset/augment.hpp"
#include "fruitpal/dataset/health.hpp"
#include "fruitpal/dataset/image.hpp"
#include "fruitpal/dataset/manifest.hpp"
#include "fruitpal/dataset/split.hpp"
#include "fruitpal/eval/report.hpp"
#include "fruitpal/hub/http_server.hpp"
#include "fruitpal/sim/simulator.hpp"

namespace fs = std::filesystem;
using namespace fruitpal;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;

fs::path default_out(const std::string& fallback) {
    if (const char* env = std::getenv("FRUITPAL_LOG_DIR"); env && *env) return env;
    return fallback;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

struct SimArgs {
    std::string dir;
    std::string out;
};

int cmd_sim_run(const SimArgs& a) {
    const auto summary =
        sim::run_scenario(a.dir, a.out.empty() ? std::nullopt : std::optional<fs::path>(a.out));
    if (summary.exit_code == kInputError) {
        std::cerr << "error: " << summary.message << "\n";
        return summary.exit_code;
    }
    std::cout << "scenario " << a.dir << ": " << summary.message << "; records=" << summary.records
              << " alerts=" << summary.alerts_raised << " open=" << summary.open_alerts
              << " digests=" << summary.digests << "; log in " << summary.out_dir.string() << "\n";
    return summary.exit_code;
}

struct EvalArgs {
    std::string preds;
    std::string truths;
    double iou = 0.5;
    double conf = 0.25;
    std::string out;
};

int cmd_eval(const EvalArgs& a) {
    eval::EvalReport report;
    try {
        const auto preds = eval::load_predictions(a.preds);
        std::vector<std::pair<std::string, std::vector<GroundTruth>>> truths;
        for (auto& img : dataset::load_manifest(a.truths)) truths.emplace_back(img.image_id, std::move(img.truths));
        const auto samples = eval::pair_samples(preds, truths);
        report = eval::evaluate(samples, {a.conf, a.iou});
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    const fs::path out = a.out.empty() ? default_out(".") : fs::path(a.out);
    write_file(out / "report.json", eval::report_json(report).dump(2) + "\n");
    write_file(out / "confusion.csv", eval::confusion_csv(report.confusion));
    std::cout << eval::summary_line(report) << "\n";
    return kOk;
}

struct DatasetArgs {
    std::string manifest;
    std::string out;
    bool json = false;
    std::vector<double> ratios{0.7, 0.2, 0.1};
    std::uint64_t seed = 42;
    std::string recipe = "set1";
    unsigned copies = 1;
    std::string images;
    bool write_images = true;
};

int cmd_health(const DatasetArgs& a) {
    const auto report = dataset::health_check(dataset::load_manifest(a.manifest));
    std::cout << (a.json ? dataset::health_json(report).dump(2) + "\n" : dataset::health_table(report));
    return kOk;
}

int cmd_split(const DatasetArgs& a) {
    if (a.ratios.size() != 3) throw ConfigError("--ratios takes three values");
    const auto out = dataset::split_dataset(dataset::load_manifest(a.manifest),
                                            {a.ratios[0], a.ratios[1], a.ratios[2]}, a.seed);
    std::array<std::size_t, 3> n{};
    for (const auto& img : out) ++n[static_cast<std::size_t>(img.split)];
    const fs::path path = a.out.empty() ? default_out(".") / fs::path("split.jsonl") : fs::path(a.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    dataset::save_manifest(path, out);
    std::cout << "train=" << n[0] << " val=" << n[1] << " test=" << n[2] << " -> " << path.string() << "\n";
    return kOk;
}

int cmd_augment(const DatasetArgs& a) {
    const auto recipe = dataset::parse_recipe(a.recipe);
    if (!recipe) throw ConfigError("unknown recipe '" + a.recipe + "'");
    if (a.copies == 0) throw ConfigError("--copies must be positive");
    const auto images = dataset::load_manifest(a.manifest);
    const fs::path image_dir = a.images.empty() ? fs::path(a.manifest).parent_path() / "images" : fs::path(a.images);
    auto load_pixels = [&](const dataset::AnnotatedImage& img) {
        const fs::path p = image_dir / (img.image_id + ".ppm");
        if (fs::exists(p)) return dataset::read_ppm(p);
        return dataset::placeholder_image(img.width, img.height, derive_seed(a.seed, img.image_id, 1));
    };
    const auto records = dataset::augment_dataset(images, load_pixels, {*recipe, a.seed, a.copies});

    const fs::path out = a.out.empty() ? default_out("augmented") : fs::path(a.out);
    fs::create_directories(out / "images");
    std::vector<dataset::AnnotatedImage> manifest;
    std::string params;
    for (const auto& r : records) {
        manifest.push_back(r.annotation);
        Json line{{"image_id", r.annotation.image_id}, {"source", r.source}};
        line["draw"] = r.draw ? dataset::draw_to_json(*r.draw) : Json(nullptr);
        params += line.dump() + "\n";
        if (a.write_images) dataset::write_ppm(out / "images" / (r.annotation.image_id + ".ppm"), r.image);
    }
    dataset::save_manifest(out / "manifest.jsonl", manifest);
    write_file(out / "params.jsonl", params);
    std::cout << "recipe=" << dataset::to_string(*recipe) << " seed=" << a.seed << " images=" << records.size()
              << " -> " << out.string() << "\n";
    return kOk;
}

int cmd_convert(const DatasetArgs& a) {
    std::ifstream in(a.manifest);
    if (!in) throw Error("cannot open " + a.manifest);
    const auto images = dataset::convert_center_pixel(in);
    if (a.out.empty()) {
        dataset::write_manifest(std::cout, images);
    } else {
        dataset::save_manifest(a.out, images);
    }
    return kOk;
}

struct HubArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string log;
    std::string token;
    std::string start_date;
};

int cmd_hub_serve(const HubArgs& a) {
    const fs::path log = a.log.empty() ? default_out(".") / fs::path("hub.jsonl") : fs::path(a.log);
    const auto start = a.start_date.empty()
                           ? std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())
                           : parse_date(a.start_date);
    hub::Hub hub(std::make_unique<hub::FileLogStore>(log), start);

    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    hub::HubServer server(hub, {a.token});
    const int port = server.bind(a.host, a.port);
    server.start();
    std::cout << "hub listening on " << a.host << ":" << port << " log=" << log.string() << std::endl;
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
    hub.shutdown();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fruitpal: fruit detection evaluation, dataset tooling, simulator and alert hub"};
    app.require_subcommand(1);
    int rc = kOk;
    std::function<int()> action;

    auto* sim = app.add_subcommand("sim", "Run scenarios on the virtual clock");
    sim->require_subcommand(1);
    SimArgs sim_args;
    auto* sim_run = sim->add_subcommand("run", "Run one scenario directory");
    sim_run->add_option("dir", sim_args.dir, "Scenario directory")->required();
    sim_run->add_option("--out", sim_args.out, "Output directory (default $FRUITPAL_LOG_DIR, else <dir>/out)");
    sim_run->callback([&] { action = [&] { return cmd_sim_run(sim_args); }; });

    EvalArgs eval_args;
    auto* ev = app.add_subcommand("eval", "Score predictions against a manifest");
    ev->add_option("--preds", eval_args.preds, "Predictions JSONL")->required();
    ev->add_option("--truths", eval_args.truths, "Ground-truth manifest JSONL")->required();
    ev->add_option("--iou", eval_args.iou, "IoU threshold for precision/recall")->check(CLI::Range(0.0, 1.0));
    ev->add_option("--conf", eval_args.conf, "Confidence threshold")->check(CLI::Range(0.0, 1.0));
    ev->add_option("--out", eval_args.out, "Report directory (default $FRUITPAL_LOG_DIR, else .)");
    ev->callback([&] { action = [&] { return cmd_eval(eval_args); }; });

    DatasetArgs ds;
    auto* dataset = app.add_subcommand("dataset", "Manifest tooling");
    dataset->require_subcommand(1);
    auto* health = dataset->add_subcommand("health", "Per-class image and box counts");
    health->add_option("manifest", ds.manifest)->required();
    health->add_flag("--json", ds.json, "Print JSON instead of a table");
    health->callback([&] { action = [&] { return cmd_health(ds); }; });
    auto* split = dataset->add_subcommand("split", "Seeded train/val/test assignment");
    split->add_option("manifest", ds.manifest)->required();
    split->add_option("--ratios", ds.ratios, "train val test")->expected(3);
    split->add_option("--seed", ds.seed);
    split->add_option("--out", ds.out, "Output manifest (default split.jsonl)");
    split->callback([&] { action = [&] { return cmd_split(ds); }; });
    auto* augment = dataset->add_subcommand("augment", "Apply an augmentation recipe");
    augment->add_option("manifest", ds.manifest)->required();
    augment->add_option("--recipe", ds.recipe, "none, set1, set2 or set3");
    augment->add_option("--seed", ds.seed);
    augment->add_option("--copies", ds.copies, "Variants per source image");
    augment->add_option("--images", ds.images, "Directory of <image_id>.ppm sources (default <manifest dir>/images)");
    augment->add_option("--out", ds.out, "Output directory (default augmented)");
    augment->add_flag("!--no-images", ds.write_images, "Write only the manifest and parameter log");
    augment->callback([&] { action = [&] { return cmd_augment(ds); }; });
    auto* convert = dataset->add_subcommand("convert", "Center-form pixel annotations to a manifest");
    convert->add_option("input", ds.manifest)->required();
    convert->add_option("--out", ds.out, "Output manifest (default stdout)");
    convert->callback([&] { action = [&] { return cmd_convert(ds); }; });

    HubArgs hub_args;
    auto* hub = app.add_subcommand("hub", "Alert and digest hub");
    hub->require_subcommand(1);
    auto* serve = hub->add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--host", hub_args.host);
    serve->add_option("--port", hub_args.port, "0 picks a free port")->check(CLI::Range(0, 65535));
    serve->add_option("--log", hub_args.log, "Append-only log (default $FRUITPAL_LOG_DIR/hub.jsonl, else ./hub.jsonl)");
    serve->add_option("--token", hub_args.token, "Require this bearer token");
    serve->add_option("--start-date", hub_args.start_date, "Date of tick 0 (YYYY-MM-DD, default today)");
    serve->callback([&] { action = [&] { return cmd_hub_serve(hub_args); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }
    try {
        rc = action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kInputError;
    }
    return rc;
}
