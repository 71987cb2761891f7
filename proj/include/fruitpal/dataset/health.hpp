#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fruitpal/dataset/manifest.hpp"

namespace fruitpal::dataset {

struct ClassStats {
    std::uint64_t image_count = 0;       // images holding at least one box of the class
    std::uint64_t annotation_count = 0;  // boxes of the class
    friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

struct SplitBoxes {
    std::uint64_t train = 0;
    std::uint64_t val = 0;
    std::uint64_t test = 0;
    friend bool operator==(const SplitBoxes&, const SplitBoxes&) = default;
};

struct HealthReport {
    std::array<ClassStats, kFruitClassCount> per_class{};
    std::uint64_t total_images = 0;  // including null images
    std::uint64_t null_images = 0;
    std::uint64_t total_annotations = 0;
    /// total_annotations divided by the number of images with at least one box.
    double avg_objects_per_image = 0.0;
    /// Boxes per class in each split; unassigned images are not counted.
    std::array<SplitBoxes, kFruitClassCount> per_split_boxes{};

    std::uint64_t non_null_images() const noexcept { return total_images - null_images; }
    const ClassStats& stats(FruitClass c) const noexcept { return per_class[index_of(c)]; }
    const SplitBoxes& split_boxes(FruitClass c) const noexcept { return per_split_boxes[index_of(c)]; }
};

HealthReport health_check(const std::vector<AnnotatedImage>& images);

/// Plain-text table: class, image count, annotations; then Null and Total rows,
/// followed by the per-split box table.
std::string health_table(const HealthReport& report);

Json health_json(const HealthReport& report);

}  // namespace fruitpal::dataset
