#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fruitpal/core/fruit.hpp"
#include "fruitpal/core/inventory.hpp"

namespace fruitpal {

enum class NutrientGroupId { Citrus, Tropical, Pome, Stone, Melons, Berries };

inline constexpr std::size_t kNutrientGroupCount = 6;

/// One row of the fruit nutrition table. Strings are reproduced verbatim,
/// including the table's inconsistent capitalization.
struct NutrientGroup {
    NutrientGroupId id;
    std::string_view name;
    std::vector<std::string_view> nutrients;
    std::vector<FruitClass> members;
};

/// All six groups in table order.
std::span<const NutrientGroup> nutrient_groups();

/// The group that contains `fruit`. Total over the enum.
const NutrientGroup& nutrient_lookup(FruitClass fruit);

/// Union of nutrient strings over classes with a non-zero count, in
/// first-occurrence order over the class enumeration, without duplicates.
std::vector<std::string> nutrients_for(const FruitInventory& eaten);

}  // namespace fruitpal
