#include "fruitpal/core/random.hpp"

namespace fruitpal {

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection sampling over the largest multiple of n.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view key, std::uint64_t salt) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : key) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(base) ^ h ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

}  // namespace fruitpal
