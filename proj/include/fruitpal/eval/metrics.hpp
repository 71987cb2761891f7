#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fruitpal/core/types.hpp"
#include "fruitpal/eval/iou.hpp"

namespace fruitpal::eval {

/// Predictions and annotations for one image.
struct ImageSample {
    std::string image_id;
    std::vector<Detection> preds;
    std::vector<GroundTruth> truths;
};

struct MatchPair {
    std::size_t detection;
    std::size_t truth;
    double iou;
};

/// Indices refer to the input lists. Pairs are in matching order (descending
/// confidence); unmatched lists are ascending.
struct MatchResult {
    std::vector<MatchPair> pairs;
    std::vector<std::size_t> unmatched_detections;
    std::vector<std::size_t> unmatched_truths;
};

enum class ClassGate { SameClass, AnyClass };

/// Greedy assignment. Predictions are visited in descending confidence (ties:
/// input order); each takes the unmatched truth with the highest IoU that is
/// >= iou_threshold (ties: lowest truth index).
MatchResult match_detections(std::span<const Detection> preds, std::span<const GroundTruth> truths,
                             double iou_threshold, ClassGate gate = ClassGate::SameClass);

struct PRPoint {
    double recall;
    double precision;
    friend bool operator==(const PRPoint&, const PRPoint&) = default;
};

/// One point per prediction of the class, pooled over all images and swept
/// in descending confidence.
struct PRCurve {
    std::vector<PRPoint> points;
    std::size_t num_truths = 0;
};

PRCurve pr_curve(std::span<const ImageSample> samples, FruitClass fruit, double iou_threshold);

/// 101-point interpolated AP: mean over r in {0, 0.01, ..., 1} of the best
/// precision reached at recall >= r (0 when none).
double average_precision(const PRCurve& curve);

struct ClassAp {
    /// Only classes with at least one ground truth appear.
    std::map<FruitClass, double> per_class;
    /// Unweighted mean over `per_class`; 0 when it is empty.
    double mean = 0.0;
};

ClassAp map_at(std::span<const ImageSample> samples, double iou_threshold);

/// The ten IoU thresholds 0.50, 0.55, ..., 0.95.
std::array<double, 10> coco_iou_thresholds();

double map_50_95(std::span<const ImageSample> samples);

/// Row = true class, column = predicted class. Index 15 is background.
inline constexpr std::size_t kBackground = kFruitClassCount;
using ConfusionMatrix = std::array<std::array<std::uint64_t, kFruitClassCount + 1>, kFruitClassCount + 1>;

/// Predictions below conf_threshold are discarded; the rest are matched
/// ignoring class so that cross-class confusions land off the diagonal.
ConfusionMatrix confusion_matrix(std::span<const ImageSample> samples, double conf_threshold,
                                 double iou_threshold);

struct OperatingPoint {
    double precision = 0.0;
    double recall = 0.0;
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
};

/// Dataset-level precision/recall with class-gated matching.
OperatingPoint operating_point(std::span<const ImageSample> samples, double conf_threshold,
                               double iou_threshold);

struct EvalOptions {
    double conf_threshold = 0.25;
    double iou_threshold = 0.5;
};

struct EvalReport {
    std::map<FruitClass, double> per_class_ap;  // at IoU 0.5
    double map50 = 0.0;
    double map50_95 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    EvalOptions options;
    std::size_t images = 0;
    ConfusionMatrix confusion{};
};

EvalReport evaluate(std::span<const ImageSample> samples, const EvalOptions& options = {});

}  // namespace fruitpal::eval
