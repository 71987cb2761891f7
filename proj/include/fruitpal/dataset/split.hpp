#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fruitpal/dataset/manifest.hpp"

namespace fruitpal::dataset {

struct SplitRatios {
    double train = 0.7;
    double val = 0.2;
    double test = 0.1;
};

/// Largest-remainder apportionment of n images. Throws ConfigError unless all
/// ratios are positive and sum to 1 within 1e-9. Remainder ties go to the
/// earlier split.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

/// Assigns every image to exactly one split. A seeded shuffle decides which
/// images land where; boxes follow their image.
std::vector<AnnotatedImage> split_dataset(std::vector<AnnotatedImage> images, const SplitRatios& ratios,
                                          std::uint64_t seed);

}  // namespace fruitpal::dataset
