#include "fruitpal/dataset/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/random.hpp"

namespace fruitpal::dataset {

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
    const std::array<double, 3> r{ratios.train, ratios.val, ratios.test};
    for (double v : r) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("split ratios must be positive");
        }
    }
    if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
        throw ConfigError("split ratios must sum to 1");
    }

    std::array<std::size_t, 3> sizes{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double quota = static_cast<double>(n) * r[i];
        sizes[i] = static_cast<std::size_t>(std::floor(quota));
        remainder[i] = quota - std::floor(quota);
        assigned += sizes[i];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
        ++sizes[order[k % 3]];
    }
    return sizes;
}

std::vector<AnnotatedImage> split_dataset(std::vector<AnnotatedImage> images, const SplitRatios& ratios,
                                          std::uint64_t seed) {
    const auto sizes = split_sizes(images.size(), ratios);

    std::vector<std::size_t> order(images.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }

    std::size_t k = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t j = 0; j < sizes[s]; ++j, ++k) {
            images[order[k]].split = static_cast<Split>(s);
        }
    }
    return images;
}

}  // namespace fruitpal::dataset
