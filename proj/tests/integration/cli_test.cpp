#include <gtest/gtest.h>

#include <httplib.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fruitpal/core/json.hpp"
#include "fruitpal/dataset/manifest.hpp"
#include "support/metric_oracle.hpp"
#include "support/scenario_writer.hpp"
#include "support/table_fixtures.hpp"

namespace fs = std::filesystem;
using namespace fruitpal;
using namespace fruitpal::testing;

namespace {

const std::string kCli = FRUITPAL_CLI;
const fs::path kScenarios = fs::path(FRUITPAL_SOURCE_DIR) / "scenarios";
constexpr double kTol = 1e-9;

struct CliResult {
    int code = -1;
    std::string out;
};

/// Runs the CLI with stdout captured; stderr goes to the test log.
CliResult cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = (env.empty() ? "" : env + " ") + kCli + " " + args;
    CliResult r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

void write_corpus(const std::vector<std::vector<eval::ImageSample>>& instances, const fs::path& preds,
                  const fs::path& truths) {
    std::ofstream pf(preds), tf(truths);
    std::size_t k = 0;
    for (const auto& inst : instances) {
        for (const auto& s : inst) {
            const std::string id = "i" + std::to_string(k++);
            Json pr = Json::array(), tr = Json::array();
            for (const auto& d : s.preds) pr.push_back(detection_row(d));
            for (const auto& t : s.truths) tr.push_back(box_row(t.fruit, t.box));
            pf << Json{{"image_id", id}, {"rows", pr}}.dump() << "\n";
            tf << Json{{"image_id", id}, {"width", 100}, {"height", 100}, {"boxes", tr}}.dump() << "\n";
        }
    }
}

}  // namespace

TEST(CliEval, MatchesOracleOnGeneratedCorpus) {
    const auto dir = scratch_dir("cli-eval");
    Rng rng(77);
    std::vector<std::vector<eval::ImageSample>> instances;
    std::vector<eval::ImageSample> pooled;
    for (int i = 0; i < 40; ++i) {
        instances.push_back(oracle::random_instance(rng));
        for (auto s : instances.back()) pooled.push_back(std::move(s));
    }
    write_corpus(instances, dir / "preds.jsonl", dir / "truths.jsonl");

    const auto r = cli("eval --preds " + q(dir / "preds.jsonl") + " --truths " + q(dir / "truths.jsonl") +
                       " --out " + q(dir / "report"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("mAP50="), std::string::npos);
    const Json report = Json::parse(read_text(dir / "report" / "report.json"));
    const auto m50 = oracle::map_at(pooled, 0.5);
    EXPECT_NEAR(report["map50"].get<double>(), m50.mean, kTol);
    EXPECT_NEAR(report["map50_95"].get<double>(), oracle::map_50_95(pooled), kTol);
    for (const auto& [fruit, ap] : m50.per_class) {
        EXPECT_NEAR(report["per_class_ap50"][std::string(to_string(fruit))].get<double>(), ap, kTol);
    }
    EXPECT_TRUE(fs::exists(dir / "report" / "confusion.csv"));
}

TEST(CliEval, PerfectPredictionsPrintOne) {
    const auto dir = scratch_dir("cli-eval-perfect");
    std::ofstream(dir / "truths.jsonl")
        << R"({"image_id": "a", "width": 10, "height": 10, "boxes": [["Apple", 0.1, 0.1, 0.4, 0.4]]})" "\n";
    std::ofstream(dir / "preds.jsonl") << R"({"image_id": "a", "rows": [["Apple", 0.1, 0.1, 0.4, 0.4, 0.9]]})" "\n";
    const auto r = cli("eval --preds " + q(dir / "preds.jsonl") + " --truths " + q(dir / "truths.jsonl") +
                       " --out " + q(dir));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("mAP50=1.0000"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("mAP50-95=1.0000"), std::string::npos) << r.out;
}

TEST(CliEval, InputErrorsExitTwo) {
    const auto dir = scratch_dir("cli-eval-bad");
    std::ofstream(dir / "truths.jsonl") << R"({"image_id": "a", "width": 10, "height": 10, "boxes": []})" "\n";
    std::ofstream(dir / "bad.jsonl") << "{broken\n";
    std::ofstream(dir / "stranger.jsonl") << R"({"image_id": "zzz", "rows": []})" "\n";
    EXPECT_EQ(cli("eval --preds " + q(dir / "missing.jsonl") + " --truths " + q(dir / "truths.jsonl")).code, 2);
    EXPECT_EQ(cli("eval --preds " + q(dir / "bad.jsonl") + " --truths " + q(dir / "truths.jsonl")).code, 2);
    EXPECT_EQ(cli("eval --preds " + q(dir / "stranger.jsonl") + " --truths " + q(dir / "truths.jsonl")).code, 2);
    EXPECT_EQ(cli("eval --truths " + q(dir / "truths.jsonl")).code, 2);
    EXPECT_EQ(cli("bogus").code, 2);
}

TEST(CliDataset, HealthOnAnnotationFixture) {
    const auto dir = scratch_dir("cli-health");
    dataset::save_manifest(dir / "m.jsonl", fixtures::annotation_table_manifest());
    const auto r = cli("dataset health --json " + q(dir / "m.jsonl"));
    ASSERT_EQ(r.code, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["total_annotations"], 16762);
    const auto table = cli("dataset health " + q(dir / "m.jsonl"));
    EXPECT_NE(table.out.find("16762"), std::string::npos) << table.out;
    EXPECT_EQ(cli("dataset health " + q(dir / "none.jsonl")).code, 2);
}

TEST(CliDataset, SplitIsDeterministic) {
    const auto dir = scratch_dir("cli-split");
    std::vector<dataset::AnnotatedImage> imgs;
    for (int i = 0; i < 50; ++i) imgs.push_back({"img" + std::to_string(i), 64, 64, {}, dataset::Split::Unassigned});
    dataset::save_manifest(dir / "m.jsonl", imgs);
    const std::string base = "dataset split " + q(dir / "m.jsonl") + " --ratios 0.7 0.2 0.1 --seed 42 --out ";
    const auto a = cli(base + q(dir / "a.jsonl"));
    const auto b = cli(base + q(dir / "b.jsonl"));
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(read_text(dir / "a.jsonl"), read_text(dir / "b.jsonl"));
    EXPECT_NE(a.out.find("train=35 val=10 test=5"), std::string::npos) << a.out;
    EXPECT_EQ(cli("dataset split " + q(dir / "m.jsonl") + " --ratios 0.5 0.5 0.5").code, 2);
}

TEST(CliDataset, AugmentParameterLogWithinBounds) {
    const auto dir = scratch_dir("cli-augment");
    std::vector<dataset::AnnotatedImage> imgs;
    for (int i = 0; i < 12; ++i) {
        imgs.push_back({"img" + std::to_string(i), 24, 16, {{FruitClass::Pear, BoundingBox(0.1, 0.1, 0.5, 0.6)}},
                        dataset::Split::Unassigned});
    }
    dataset::save_manifest(dir / "m.jsonl", imgs);
    const auto r = cli("dataset augment " + q(dir / "m.jsonl") + " --recipe set1 --seed 7 --copies 5 --out " +
                       q(dir / "out"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto params = read_jsonl(dir / "out" / "params.jsonl");
    std::size_t drawn = 0;
    const double exposure_low = 1.0 / 1.1 - 1.0;
    for (const auto& p : params) {
        if (p["draw"].is_null()) continue;  // mosaic composites
        ++drawn;
        const auto& d = p["draw"];
        EXPECT_LE(std::abs(d["saturation"].get<double>()), 0.05);
        EXPECT_LE(std::abs(d["brightness"].get<double>()), 0.10);
        EXPECT_GE(d["exposure"].get<double>(), exposure_low - 1e-12);
        EXPECT_LE(d["exposure"].get<double>(), 0.10 + 1e-12);
        EXPECT_GE(d["blur_sigma"].get<double>(), 0.0);
        EXPECT_LE(d["blur_sigma"].get<double>(), 0.5);
        EXPECT_GE(d["noise_fraction"].get<double>(), 0.0);
        EXPECT_LE(d["noise_fraction"].get<double>(), 0.01);
        EXPECT_FALSE(d["flip_horizontal"].get<bool>());
        EXPECT_FALSE(d["flip_vertical"].get<bool>());
    }
    EXPECT_EQ(drawn, 60u);
    EXPECT_EQ(params.size(), 60u + 15u);  // one mosaic per four variants
    EXPECT_EQ(dataset::load_manifest(dir / "out" / "manifest.jsonl").size(), params.size());
    EXPECT_TRUE(fs::exists(dir / "out" / "images" / "img0_aug0.ppm"));

    const auto again = cli("dataset augment " + q(dir / "m.jsonl") + " --recipe set1 --seed 7 --copies 5 --out " +
                           q(dir / "again") + " --no-images");
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(read_text(dir / "out" / "params.jsonl"), read_text(dir / "again" / "params.jsonl"));
    EXPECT_FALSE(fs::exists(dir / "again" / "images" / "img0_aug0.ppm"));
    EXPECT_EQ(cli("dataset augment " + q(dir / "m.jsonl") + " --recipe set9").code, 2);
}

TEST(CliDataset, ConvertCenterPixel) {
    const auto dir = scratch_dir("cli-convert");
    std::ofstream(dir / "c.jsonl")
        << R"({"image_id": "x", "width": 200, "height": 100, "boxes": [["Lemon", 100, 50, 40, 20]]})" "\n";
    const auto r = cli("dataset convert " + q(dir / "c.jsonl") + " --out " + q(dir / "m.jsonl"));
    ASSERT_EQ(r.code, 0);
    const auto m = dataset::load_manifest(dir / "m.jsonl");
    ASSERT_EQ(m.size(), 1u);
    EXPECT_NEAR(m[0].truths[0].box.x_min(), 0.4, 1e-12);
    EXPECT_NEAR(m[0].truths[0].box.y_max(), 0.6, 1e-12);
}

TEST(CliSim, RunAndExitCodes) {
    const auto out = scratch_dir("cli-sim");
    auto r = cli("sim run " + q(kScenarios / "allergen_ack") + " --out " + q(out));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(out / "events.jsonl"));

    const auto env_out = scratch_dir("cli-sim-env");
    r = cli("sim run " + q(kScenarios / "nutrition_day"), "FRUITPAL_LOG_DIR=" + q(env_out));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(env_out / "events.jsonl"));

    const auto bad = scratch_dir("cli-sim-bad");
    ScenarioFiles f;
    f.manifest = {{"devices", {allergen_device("k", {"Mango"})}}};
    f.timeline = {R"({"at": 5, "type": "Motion"})", R"({"at": 4, "type": "Motion"})"};
    f.write(bad);
    EXPECT_EQ(cli("sim run " + q(bad) + " --out " + q(bad / "out")).code, 2);
}

TEST(CliHub, ServeAnswersHealthAndStopsOnSigterm) {
    const auto dir = scratch_dir("cli-hub");
    int fds[2];
    ASSERT_EQ(::pipe(fds), 0);
    const pid_t pid = ::fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
        ::dup2(fds[1], STDOUT_FILENO);
        ::close(fds[0]);
        const std::string log = (dir / "hub.jsonl").string();
        ::execl(kCli.c_str(), kCli.c_str(), "hub", "serve", "--port", "0", "--log", log.c_str(), "--token", "s3",
                static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(fds[1]);
    std::string line;
    char c;
    while (::read(fds[0], &c, 1) == 1 && c != '\n') line += c;
    ::close(fds[0]);
    const auto colon = line.rfind(':', line.find(" log="));
    ASSERT_NE(colon, std::string::npos) << line;
    const int port = std::stoi(line.substr(colon + 1));

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/healthz");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(client.Get("/messages")->status, 401);
    client.set_bearer_token_auth("s3");
    const Json msg{{"msg_id", "m1"},
                   {"kind", "DeviceStatus"},
                   {"device_id", "kitchen"},
                   {"payload", {{"status", "online"}, {"detail", ""}}}};
    auto posted = client.Post("/messages", msg.dump(), "application/json");
    ASSERT_TRUE(posted);
    EXPECT_EQ(posted->status, 200) << posted->body;

    ::kill(pid, SIGTERM);
    int status = 0;
    ::waitpid(pid, &status, 0);
    EXPECT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
    EXPECT_EQ(read_jsonl(dir / "hub.jsonl").size(), 1u);
}
