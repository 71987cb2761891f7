#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "fruitpal/core/fruit.hpp"

namespace fruitpal {

/// Per-class fruit counts. A class that was never set reads as zero, so two
/// inventories compare equal whenever their non-zero entries agree.
class FruitInventory {
public:
    using Count = std::uint32_t;

    FruitInventory() = default;
    FruitInventory(std::initializer_list<std::pair<FruitClass, Count>> entries);

    Count count(FruitClass c) const noexcept { return counts_[index_of(c)]; }
    void set(FruitClass c, Count n) noexcept { counts_[index_of(c)] = n; }
    void add(FruitClass c, Count n = 1) noexcept { counts_[index_of(c)] += n; }

    std::uint64_t total() const noexcept;
    bool empty() const noexcept { return total() == 0; }

    /// Non-zero entries in class order.
    std::vector<std::pair<FruitClass, Count>> entries() const;

    friend bool operator==(const FruitInventory&, const FruitInventory&) = default;

private:
    std::array<Count, kFruitClassCount> counts_{};
};

/// Per-class median of three captures; used to damp detector flicker.
FruitInventory median_inventory(const FruitInventory& a, const FruitInventory& b,
                                const FruitInventory& c);

}  // namespace fruitpal
