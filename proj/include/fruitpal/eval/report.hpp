#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "fruitpal/core/json.hpp"
#include "fruitpal/eval/metrics.hpp"

namespace fruitpal::eval {

/// Predictions file: one JSON object per line,
///   {"image_id": "img-001", "rows": [["Apple", x_min, y_min, x_max, y_max, conf], ...]}
using PredictionSet = std::vector<std::pair<std::string, std::vector<Detection>>>;

PredictionSet parse_predictions(std::istream& in);
PredictionSet load_predictions(const std::filesystem::path& path);

/// Pairs predictions with annotated images by id, in annotation order.
/// Images without predictions get an empty prediction list; predictions for
/// an id absent from the annotations raise InvalidValue.
std::vector<ImageSample> pair_samples(
    const PredictionSet& preds,
    const std::vector<std::pair<std::string, std::vector<GroundTruth>>>& truths);

std::string report_text(const EvalReport& report);
Json report_json(const EvalReport& report);
std::string confusion_csv(const ConfusionMatrix& m);

/// One line: precision, recall, mAP50, mAP50-95.
std::string summary_line(const EvalReport& report);

}  // namespace fruitpal::eval
