#include "fruitpal/eval/report.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "fruitpal/core/errors.hpp"

namespace fruitpal::eval {

PredictionSet parse_predictions(std::istream& in) {
    PredictionSet out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        try {
            const Json rec = Json::parse(line);
            std::string id = rec.at("image_id").get<std::string>();
            if (!seen.insert(id).second) {
                throw ParseError("duplicate image_id " + id);
            }
            std::vector<Detection> dets;
            for (const Json& row : rec.value("rows", Json::array())) {
                dets.push_back(detection_from_row(row));
            }
            out.emplace_back(std::move(id), std::move(dets));
        } catch (const Json::exception& e) {
            throw ParseError("predictions line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw ParseError("predictions line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open predictions " + path.string());
    }
    return parse_predictions(in);
}

std::vector<ImageSample> pair_samples(
    const PredictionSet& preds,
    const std::vector<std::pair<std::string, std::vector<GroundTruth>>>& truths) {
    std::map<std::string, const std::vector<Detection>*> by_id;
    for (const auto& [id, dets] : preds) {
        by_id.emplace(id, &dets);
    }
    std::vector<ImageSample> out;
    out.reserve(truths.size());
    for (const auto& [id, gts] : truths) {
        ImageSample s{id, {}, gts};
        if (auto it = by_id.find(id); it != by_id.end()) {
            s.preds = *it->second;
            by_id.erase(it);
        }
        out.push_back(std::move(s));
    }
    if (!by_id.empty()) {
        throw InvalidValue("predictions reference unknown image id " + by_id.begin()->first);
    }
    return out;
}

namespace {

std::string column_label(std::size_t i) {
    return i == kBackground ? std::string("background") : std::string(to_string(kAllFruitClasses[i]));
}

}  // namespace

std::string summary_line(const EvalReport& r) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << "precision=" << r.precision << " recall=" << r.recall
       << " mAP50=" << r.map50 << " mAP50-95=" << r.map50_95;
    return os.str();
}

std::string report_text(const EvalReport& r) {
    std::ostringstream os;
    os << "images: " << r.images << "\n"
       << "operating point: conf >= " << r.options.conf_threshold << ", IoU >= "
       << r.options.iou_threshold << "\n";
    os << std::fixed << std::setprecision(4);
    os << "precision  " << r.precision << "\n"
       << "recall     " << r.recall << "\n"
       << "mAP50      " << r.map50 << "\n"
       << "mAP50-95   " << r.map50_95 << "\n\n"
       << "AP50 per class\n";
    for (const auto& [fruit, ap] : r.per_class_ap) {
        os << "  " << std::left << std::setw(12) << to_string(fruit) << ap << "\n";
    }
    return os.str();
}

Json report_json(const EvalReport& r) {
    Json per_class = Json::object();
    for (const auto& [fruit, ap] : r.per_class_ap) {
        per_class[std::string(to_string(fruit))] = ap;
    }
    Json confusion = Json::array();
    for (const auto& row : r.confusion) {
        confusion.push_back(Json(row));
    }
    return Json{{"images", r.images},
                {"conf_threshold", r.options.conf_threshold},
                {"iou_threshold", r.options.iou_threshold},
                {"precision", r.precision},
                {"recall", r.recall},
                {"map50", r.map50},
                {"map50_95", r.map50_95},
                {"per_class_ap50", per_class},
                {"confusion", confusion}};
}

std::string confusion_csv(const ConfusionMatrix& m) {
    std::ostringstream os;
    os << "true\\predicted";
    for (std::size_t c = 0; c <= kBackground; ++c) {
        os << ',' << column_label(c);
    }
    os << '\n';
    for (std::size_t r = 0; r <= kBackground; ++r) {
        os << column_label(r);
        for (std::size_t c = 0; c <= kBackground; ++c) {
            os << ',' << m[r][c];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace fruitpal::eval
