#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fruitpal/core/json.hpp"
#include "fruitpal/core/random.hpp"
#include "fruitpal/dataset/image.hpp"
#include "fruitpal/dataset/manifest.hpp"

namespace fruitpal::dataset {

/// Set3 of the original experiments repeats Set1, so it parses to Set1.
enum class Recipe { None, Set1, Set2 };

std::string_view to_string(Recipe r) noexcept;
std::optional<Recipe> parse_recipe(std::string_view s) noexcept;

/// Parameter ranges of one recipe. Symmetric ranges are stored as their bound.
struct RecipeParams {
    double grayscale_probability = 0.0;
    double saturation = 0.0;      // +/- fraction
    double brightness = 0.0;      // +/- fraction
    double exposure = 0.0;        // +/- fraction
    double blur_sigma_max = 0.0;  // pixels
    double noise_max_fraction = 0.0;
    bool flips = false;
    bool mosaic = false;
};

RecipeParams recipe_params(Recipe r) noexcept;

struct AugmentationPlan {
    Recipe recipe = Recipe::None;
    std::uint64_t seed = 0;
    unsigned copies = 1;  // augmented variants per source image
};

/// One sampled set of photometric/geometric parameters.
struct AugmentationDraw {
    bool grayscale = false;
    double saturation = 0.0;
    double brightness = 0.0;
    double exposure = 0.0;  // effective scale - 1
    double blur_sigma = 0.0;
    double noise_fraction = 0.0;
    bool flip_horizontal = false;
    bool flip_vertical = false;
};

AugmentationDraw draw_parameters(const RecipeParams& params, Rng& rng);

Json draw_to_json(const AugmentationDraw& d);

// Individual pixel operations. Each clamps to [0, 255].
void apply_grayscale(Image& img);            // floor(0.299 R + 0.587 G + 0.114 B)
void apply_saturation(Image& img, double s); // blend toward luma by (1 + s)
void apply_brightness(Image& img, double b); // channel * (1 + b)
void apply_exposure(Image& img, double e);   // scale * (1 + e) in linear light (gamma 2.2)
void apply_blur(Image& img, double sigma);   // separable Gaussian, edge clamp
/// Salt-and-pepper on floor(fraction * pixel_count) distinct pixels.
/// Returns the number of pixels selected.
std::size_t apply_noise(Image& img, double fraction, Rng& rng);
void flip_image(Image& img, bool horizontal, bool vertical);

BoundingBox flip_box(const BoundingBox& b, bool horizontal, bool vertical);

struct AnnotatedRaster {
    Image image;
    std::vector<GroundTruth> truths;
};

struct AugmentedRaster {
    Image image;
    std::vector<GroundTruth> truths;
    AugmentationDraw draw;
};

/// `plan.copies` variants of one image, each with its own stream derived from
/// (seed, copy index). Recipe::None returns unmodified copies.
std::vector<AugmentedRaster> augment_image(const AnnotatedRaster& input, const AugmentationPlan& plan,
                                           std::uint64_t seed);

/// Boxes smaller than this normalized area after mosaic placement are dropped.
inline constexpr double kMosaicMinArea = 1e-4;

/// 2x2 equal-grid composite: inputs go top-left, top-right, bottom-left,
/// bottom-right. Each quadrant is the largest input width by the largest input
/// height; inputs are resampled (nearest neighbour) to fill their quadrant.
AnnotatedRaster mosaic(std::span<const AnnotatedRaster, 4> four);

struct AugmentedRecord {
    AnnotatedImage annotation;
    Image image;
    std::string source;  // source image id(s)
    std::optional<AugmentationDraw> draw;
};

/// Augments a whole manifest. Per-image seeds are derived from the image id,
/// so the output does not depend on processing order. When the recipe enables
/// mosaic, one composite is added per group of four augmented variants after
/// a seeded shuffle.
std::vector<AugmentedRecord> augment_dataset(
    const std::vector<AnnotatedImage>& images,
    const std::function<Image(const AnnotatedImage&)>& load_pixels, const AugmentationPlan& plan);

}  // namespace fruitpal::dataset
