#include "fruitpal/core/inventory.hpp"

#include <algorithm>

namespace fruitpal {

FruitInventory::FruitInventory(std::initializer_list<std::pair<FruitClass, Count>> entries) {
    for (const auto& [fruit, n] : entries) {
        add(fruit, n);
    }
}

std::uint64_t FruitInventory::total() const noexcept {
    std::uint64_t sum = 0;
    for (Count n : counts_) {
        sum += n;
    }
    return sum;
}

std::vector<std::pair<FruitClass, FruitInventory::Count>> FruitInventory::entries() const {
    std::vector<std::pair<FruitClass, Count>> out;
    for (FruitClass c : kAllFruitClasses) {
        if (count(c) != 0) {
            out.emplace_back(c, count(c));
        }
    }
    return out;
}

FruitInventory median_inventory(const FruitInventory& a, const FruitInventory& b,
                                const FruitInventory& c) {
    FruitInventory out;
    for (FruitClass f : kAllFruitClasses) {
        std::array<FruitInventory::Count, 3> v{a.count(f), b.count(f), c.count(f)};
        std::sort(v.begin(), v.end());
        out.set(f, v[1]);
    }
    return out;
}

}  // namespace fruitpal
