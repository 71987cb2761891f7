#pragma once

#include "fruitpal/core/types.hpp"

namespace fruitpal::eval {

/// Intersection over union; 0 for disjoint or edge-touching boxes.
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

}  // namespace fruitpal::eval
