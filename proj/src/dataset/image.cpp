#include "fruitpal/dataset/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/random.hpp"

namespace fruitpal::dataset {

Image::Image(int w, int h, std::uint8_t fill)
    : width(w), height(h), rgb(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string ppm_token(std::istream& in) {
    std::string tok;
    char ch;
    while (in.get(ch)) {
        if (ch == '#') {
            std::string ignored;
            std::getline(in, ignored);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(ch);
    }
    return tok;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open image " + path.string());
    }
    if (ppm_token(in) != "P6") {
        throw ParseError(path.string() + ": not a binary PPM");
    }
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ppm_token(in));
        h = std::stoi(ppm_token(in));
        maxval = std::stoi(ppm_token(in));
    } catch (const std::exception&) {
        throw ParseError(path.string() + ": bad PPM header");
    }
    if (w <= 0 || h <= 0 || maxval != 255) {
        throw ParseError(path.string() + ": unsupported PPM dimensions or depth");
    }
    Image img(w, h);
    in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.rgb.size())) {
        throw ParseError(path.string() + ": truncated pixel data");
    }
    return img;
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write image " + path.string());
    }
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

Image placeholder_image(int width, int height, std::uint64_t seed) {
    Image img(width, height);
    Rng rng(seed);
    const int r0 = static_cast<int>(rng.below(128)), g0 = static_cast<int>(rng.below(128));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            p[0] = static_cast<std::uint8_t>(r0 + 127 * x / std::max(1, width - 1));
            p[1] = static_cast<std::uint8_t>(g0 + 127 * y / std::max(1, height - 1));
            p[2] = static_cast<std::uint8_t>((x + y) % 256);
        }
    }
    return img;
}

}  // namespace fruitpal::dataset
