#include "fruitpal/detection/detector.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/json.hpp"
#include "fruitpal/eval/iou.hpp"

namespace fruitpal::detection {

ScriptedDetector::ScriptedDetector(std::map<std::string, std::vector<Detection>> frames)
    : frames_(std::move(frames)) {}

ScriptedDetector ScriptedDetector::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open detection fixtures " + path.string());
    }
    return parse(in);
}

ScriptedDetector ScriptedDetector::parse(std::istream& in) {
    ScriptedDetector out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        try {
            const Json rec = Json::parse(line);
            std::string id = rec.at("frame_id").get<std::string>();
            if (out.has_frame(id)) {
                throw ParseError("duplicate frame_id " + id);
            }
            std::vector<Detection> dets;
            for (const Json& row : rec.value("rows", Json::array())) {
                dets.push_back(detection_from_row(row));
            }
            out.add_frame(std::move(id), std::move(dets));
        } catch (const Json::exception& e) {
            throw ParseError("fixtures line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw ParseError("fixtures line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void ScriptedDetector::add_frame(std::string frame_id, std::vector<Detection> detections) {
    frames_.insert_or_assign(std::move(frame_id), std::move(detections));
}

std::vector<Detection> ScriptedDetector::raw_detections(const FrameRef& frame) const {
    auto it = frames_.find(frame.frame_id);
    if (it == frames_.end()) {
        throw FrameNotFound(frame.frame_id);
    }
    return it->second;
}

namespace {

void sort_by_confidence(std::vector<Detection>& dets) {
    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        return a.confidence > b.confidence;
    });
}

}  // namespace

std::vector<Detection> detect(const DetectorBackend& backend, const FrameRef& frame,
                              double conf_threshold) {
    if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0)) {
        throw InvalidValue("confidence threshold outside [0,1]");
    }
    std::vector<Detection> dets = backend.raw_detections(frame);
    std::erase_if(dets, [&](const Detection& d) { return d.confidence < conf_threshold; });
    sort_by_confidence(dets);
    return dets;
}

std::vector<Detection> non_max_suppression(const std::vector<Detection>& detections,
                                           double iou_threshold) {
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
        throw InvalidValue("IoU threshold outside [0,1]");
    }
    std::vector<Detection> ordered = detections;
    sort_by_confidence(ordered);

    std::vector<Detection> kept;
    for (const Detection& d : ordered) {
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return k.fruit == d.fruit && eval::iou(k.box, d.box) > iou_threshold;
        });
        if (!suppressed) {
            kept.push_back(d);
        }
    }
    return kept;
}

FruitInventory to_inventory(const std::vector<Detection>& detections) {
    FruitInventory inv;
    for (const Detection& d : detections) {
        inv.add(d.fruit);
    }
    return inv;
}

}  // namespace fruitpal::detection
