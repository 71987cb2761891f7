#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fruitpal/core/json.hpp"
#include "fruitpal/core/types.hpp"

namespace fruitpal::dataset {

enum class Split { Training, Validation, Testing, Unassigned };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view s) noexcept;

struct AnnotatedImage {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::vector<GroundTruth> truths;  // empty for null images
    Split split = Split::Unassigned;

    friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

/// Manifest: one JSON object per line,
///   {"image_id": "img-0001", "width": 640, "height": 480, "split": "Training",
///    "boxes": [["Strawberry", x_min, y_min, x_max, y_max], ...]}
/// Coordinates are normalized corner form. "split" may be omitted. Blank lines
/// and lines starting with '#' are skipped. Any bad record raises ManifestError
/// carrying its line number.
std::vector<AnnotatedImage> parse_manifest(std::istream& in);
std::vector<AnnotatedImage> load_manifest(const std::filesystem::path& path);

Json image_to_json(const AnnotatedImage& image);
void write_manifest(std::ostream& out, const std::vector<AnnotatedImage>& images);
void save_manifest(const std::filesystem::path& path, const std::vector<AnnotatedImage>& images);

/// Converts center-form pixel annotations into a manifest. Input records look
/// like manifest records but box rows are [class, center_x, center_y, width,
/// height] in pixels. Boxes are clipped to the image before validation.
std::vector<AnnotatedImage> convert_center_pixel(std::istream& in);

}  // namespace fruitpal::dataset
