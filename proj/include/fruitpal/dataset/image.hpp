#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace fruitpal::dataset {

/// 8-bit interleaved RGB raster.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0);

    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width) * height; }
    std::uint8_t* pixel(int x, int y) noexcept { return &rgb[3 * (static_cast<std::size_t>(y) * width + x)]; }
    const std::uint8_t* pixel(int x, int y) const noexcept {
        return &rgb[3 * (static_cast<std::size_t>(y) * width + x)];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Binary PPM (P6, maxval 255). Throws ParseError on anything else.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& image);

/// Deterministic stand-in raster for manifests whose pixels are not on disk.
Image placeholder_image(int width, int height, std::uint64_t seed);

}  // namespace fruitpal::dataset
