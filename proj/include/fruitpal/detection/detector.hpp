#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "fruitpal/core/inventory.hpp"
#include "fruitpal/core/types.hpp"

namespace fruitpal::detection {

struct FrameRef {
    std::string frame_id;
    Tick timestamp = 0;
};

/// The seam where a trained model would plug in.
class DetectorBackend {
public:
    virtual ~DetectorBackend() = default;

    /// Raw detections for a frame, before any threshold or suppression.
    /// Throws FrameNotFound for an unknown frame id.
    virtual std::vector<Detection> raw_detections(const FrameRef& frame) const = 0;
};

/// Replays per-frame detection fixtures. Read-only after construction, so
/// concurrent calls are safe.
///
/// Fixture file: one JSON object per line,
///   {"frame_id": "f1", "rows": [["Mango", 0.1, 0.1, 0.4, 0.5, 0.95], ...]}
/// Blank lines and lines starting with '#' are skipped.
class ScriptedDetector final : public DetectorBackend {
public:
    ScriptedDetector() = default;
    explicit ScriptedDetector(std::map<std::string, std::vector<Detection>> frames);

    static ScriptedDetector load(const std::filesystem::path& path);
    static ScriptedDetector parse(std::istream& in);

    void add_frame(std::string frame_id, std::vector<Detection> detections);
    bool has_frame(const std::string& frame_id) const { return frames_.count(frame_id) != 0; }
    std::size_t frame_count() const noexcept { return frames_.size(); }

    std::vector<Detection> raw_detections(const FrameRef& frame) const override;

private:
    std::map<std::string, std::vector<Detection>> frames_;
};

/// Detections with confidence >= conf_threshold, in descending confidence;
/// equal confidences keep backend order.
std::vector<Detection> detect(const DetectorBackend& backend, const FrameRef& frame,
                              double conf_threshold);

/// Greedy per-class suppression in descending confidence (ties: earlier
/// input wins). A box is dropped when its IoU with an already kept box of the
/// same class exceeds iou_threshold. Survivors are returned in that order.
std::vector<Detection> non_max_suppression(const std::vector<Detection>& detections,
                                           double iou_threshold);

FruitInventory to_inventory(const std::vector<Detection>& detections);

}  // namespace fruitpal::detection
