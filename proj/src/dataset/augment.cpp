#include "fruitpal/dataset/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace fruitpal::dataset {

namespace {

constexpr double kGamma = 2.2;

std::uint8_t clamp_channel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

double luma(const std::uint8_t* p) { return 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]; }

}  // namespace

std::string_view to_string(Recipe r) noexcept {
    switch (r) {
        case Recipe::Set1: return "set1";
        case Recipe::Set2: return "set2";
        case Recipe::None: break;
    }
    return "none";
}

std::optional<Recipe> parse_recipe(std::string_view s) noexcept {
    if (s == "none") return Recipe::None;
    if (s == "set1" || s == "set3") return Recipe::Set1;
    if (s == "set2") return Recipe::Set2;
    return std::nullopt;
}

RecipeParams recipe_params(Recipe r) noexcept {
    RecipeParams p;
    switch (r) {
        case Recipe::Set1:
            p.grayscale_probability = 0.03;
            p.saturation = 0.05;
            p.brightness = 0.10;
            p.exposure = 0.10;
            p.blur_sigma_max = 0.5;
            p.noise_max_fraction = 0.01;
            p.mosaic = true;
            break;
        case Recipe::Set2:
            p.flips = true;
            p.saturation = 0.25;
            p.noise_max_fraction = 0.05;
            break;
        case Recipe::None:
            break;
    }
    return p;
}

AugmentationDraw draw_parameters(const RecipeParams& p, Rng& rng) {
    AugmentationDraw d;
    if (p.flips) {
        d.flip_horizontal = rng.bernoulli(0.5);
        d.flip_vertical = rng.bernoulli(0.5);
    }
    if (p.grayscale_probability > 0.0) {
        d.grayscale = rng.bernoulli(p.grayscale_probability);
    }
    if (p.saturation > 0.0) {
        d.saturation = rng.uniform(-p.saturation, p.saturation);
    }
    if (p.brightness > 0.0) {
        d.brightness = rng.uniform(-p.brightness, p.brightness);
    }
    if (p.exposure > 0.0) {
        // Stop-like: scale = (1 + bound)^f with f in [-1, 1].
        const double f = rng.uniform(-1.0, 1.0);
        d.exposure = std::pow(1.0 + p.exposure, f) - 1.0;
    }
    if (p.blur_sigma_max > 0.0) {
        d.blur_sigma = rng.uniform(0.0, p.blur_sigma_max);
    }
    if (p.noise_max_fraction > 0.0) {
        d.noise_fraction = rng.uniform(0.0, p.noise_max_fraction);
    }
    return d;
}

Json draw_to_json(const AugmentationDraw& d) {
    return Json{{"grayscale", d.grayscale},     {"saturation", d.saturation},
                {"brightness", d.brightness},   {"exposure", d.exposure},
                {"blur_sigma", d.blur_sigma},   {"noise_fraction", d.noise_fraction},
                {"flip_horizontal", d.flip_horizontal}, {"flip_vertical", d.flip_vertical}};
}

void apply_grayscale(Image& img) {
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        // Integer weights give an exact floor of the weighted sum.
        const unsigned y = (299u * img.rgb[i] + 587u * img.rgb[i + 1] + 114u * img.rgb[i + 2]) / 1000u;
        img.rgb[i] = img.rgb[i + 1] = img.rgb[i + 2] = static_cast<std::uint8_t>(y);
    }
}

void apply_saturation(Image& img, double s) {
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        const double l = luma(&img.rgb[i]);
        for (std::size_t c = 0; c < 3; ++c) {
            img.rgb[i + c] = clamp_channel(l + (img.rgb[i + c] - l) * (1.0 + s));
        }
    }
}

void apply_brightness(Image& img, double b) {
    for (auto& v : img.rgb) {
        v = clamp_channel(v * (1.0 + b));
    }
}

void apply_exposure(Image& img, double e) {
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v) {
        const double linear = std::pow(v / 255.0, kGamma) * (1.0 + e);
        lut[v] = clamp_channel(255.0 * std::pow(std::min(linear, 1.0), 1.0 / kGamma));
    }
    for (auto& v : img.rgb) {
        v = lut[v];
    }
}

void apply_blur(Image& img, double sigma) {
    if (sigma < 1e-3 || img.rgb.empty()) {
        return;
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    }
    const double norm = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    for (double& w : kernel) w /= norm;

    auto pass = [&](const Image& src, Image& dst, int dx, int dy) {
        for (int y = 0; y < src.height; ++y) {
            for (int x = 0; x < src.width; ++x) {
                double acc[3] = {0, 0, 0};
                for (int k = -radius; k <= radius; ++k) {
                    const int sx = std::clamp(x + k * dx, 0, src.width - 1);
                    const int sy = std::clamp(y + k * dy, 0, src.height - 1);
                    const std::uint8_t* p = src.pixel(sx, sy);
                    for (int c = 0; c < 3; ++c) acc[c] += kernel[k + radius] * p[c];
                }
                std::uint8_t* q = dst.pixel(x, y);
                for (int c = 0; c < 3; ++c) q[c] = clamp_channel(acc[c]);
            }
        }
    };
    Image tmp = img;
    pass(img, tmp, 1, 0);
    pass(tmp, img, 0, 1);
}

std::size_t apply_noise(Image& img, double fraction, Rng& rng) {
    const std::size_t n = img.pixel_count();
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (k == 0) {
        return 0;
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(idx[i], idx[i + rng.below(n - i)]);
        const std::uint8_t v = rng.bernoulli(0.5) ? 255 : 0;
        std::fill_n(img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * idx[i]), 3, v);
    }
    return k;
}

void flip_image(Image& img, bool horizontal, bool vertical) {
    if (!horizontal && !vertical) {
        return;
    }
    Image out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int sx = horizontal ? img.width - 1 - x : x;
            const int sy = vertical ? img.height - 1 - y : y;
            std::copy_n(img.pixel(sx, sy), 3, out.pixel(x, y));
        }
    }
    img = std::move(out);
}

BoundingBox flip_box(const BoundingBox& b, bool horizontal, bool vertical) {
    double x0 = b.x_min(), x1 = b.x_max(), y0 = b.y_min(), y1 = b.y_max();
    if (horizontal) {
        x0 = 1.0 - b.x_max();
        x1 = 1.0 - b.x_min();
    }
    if (vertical) {
        y0 = 1.0 - b.y_max();
        y1 = 1.0 - b.y_min();
    }
    return BoundingBox(x0, y0, x1, y1);
}

std::vector<AugmentedRaster> augment_image(const AnnotatedRaster& input, const AugmentationPlan& plan,
                                           std::uint64_t seed) {
    const RecipeParams params = recipe_params(plan.recipe);
    std::vector<AugmentedRaster> out;
    out.reserve(plan.copies);
    for (unsigned copy = 0; copy < plan.copies; ++copy) {
        Rng rng(splitmix64(seed + copy));
        AugmentedRaster r{input.image, input.truths, draw_parameters(params, rng)};
        const AugmentationDraw& d = r.draw;
        if (d.flip_horizontal || d.flip_vertical) {
            flip_image(r.image, d.flip_horizontal, d.flip_vertical);
            for (GroundTruth& t : r.truths) {
                t.box = flip_box(t.box, d.flip_horizontal, d.flip_vertical);
            }
        }
        if (d.grayscale) apply_grayscale(r.image);
        if (d.saturation != 0.0) apply_saturation(r.image, d.saturation);
        if (d.brightness != 0.0) apply_brightness(r.image, d.brightness);
        if (d.exposure != 0.0) apply_exposure(r.image, d.exposure);
        apply_blur(r.image, d.blur_sigma);
        apply_noise(r.image, d.noise_fraction, rng);
        out.push_back(std::move(r));
    }
    return out;
}

AnnotatedRaster mosaic(std::span<const AnnotatedRaster, 4> four) {
    int qw = 1, qh = 1;
    for (const AnnotatedRaster& a : four) {
        qw = std::max(qw, a.image.width);
        qh = std::max(qh, a.image.height);
    }
    AnnotatedRaster out{Image(2 * qw, 2 * qh), {}};
    for (int q = 0; q < 4; ++q) {
        const AnnotatedRaster& src = four[q];
        const int col = q % 2, row = q / 2;
        if (src.image.width > 0 && src.image.height > 0) {
            for (int y = 0; y < qh; ++y) {
                const int sy = static_cast<int>(static_cast<long long>(y) * src.image.height / qh);
                for (int x = 0; x < qw; ++x) {
                    const int sx = static_cast<int>(static_cast<long long>(x) * src.image.width / qw);
                    std::copy_n(src.image.pixel(sx, sy), 3, out.image.pixel(col * qw + x, row * qh + y));
                }
            }
        }
        for (const GroundTruth& t : src.truths) {
            const double x0 = (t.box.x_min() + col) / 2.0, x1 = (t.box.x_max() + col) / 2.0;
            const double y0 = (t.box.y_min() + row) / 2.0, y1 = (t.box.y_max() + row) / 2.0;
            if ((x1 - x0) * (y1 - y0) < kMosaicMinArea || !BoundingBox::is_valid(x0, y0, x1, y1)) {
                continue;
            }
            out.truths.push_back({t.fruit, BoundingBox(x0, y0, x1, y1)});
        }
    }
    return out;
}

std::vector<AugmentedRecord> augment_dataset(
    const std::vector<AnnotatedImage>& images,
    const std::function<Image(const AnnotatedImage&)>& load_pixels, const AugmentationPlan& plan) {
    std::vector<AugmentedRecord> out;
    for (const AnnotatedImage& img : images) {
        const AnnotatedRaster src{load_pixels(img), img.truths};
        const auto variants = augment_image(src, plan, derive_seed(plan.seed, img.image_id));
        for (std::size_t k = 0; k < variants.size(); ++k) {
            AugmentedRecord rec;
            rec.annotation = img;
            rec.annotation.image_id = img.image_id + "_aug" + std::to_string(k);
            rec.annotation.width = variants[k].image.width;
            rec.annotation.height = variants[k].image.height;
            rec.annotation.truths = variants[k].truths;
            rec.image = variants[k].image;
            rec.source = img.image_id;
            rec.draw = variants[k].draw;
            out.push_back(std::move(rec));
        }
    }

    if (!recipe_params(plan.recipe).mosaic || out.size() < 4) {
        return out;
    }
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(plan.seed, "mosaic"));
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    const std::size_t groups = order.size() / 4;
    for (std::size_t g = 0; g < groups; ++g) {
        std::array<AnnotatedRaster, 4> four;
        std::string source;
        for (std::size_t k = 0; k < 4; ++k) {
            const AugmentedRecord& r = out[order[4 * g + k]];
            four[k] = {r.image, r.annotation.truths};
            source += (k ? "+" : "") + r.annotation.image_id;
        }
        AnnotatedRaster m = mosaic(four);
        AugmentedRecord rec;
        rec.annotation.image_id = "mosaic_" + std::to_string(g);
        rec.annotation.width = m.image.width;
        rec.annotation.height = m.image.height;
        rec.annotation.truths = std::move(m.truths);
        rec.image = std::move(m.image);
        rec.source = source;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace fruitpal::dataset
