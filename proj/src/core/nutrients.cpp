#include "fruitpal/core/nutrients.hpp"

#include <algorithm>

namespace fruitpal {

namespace {

using F = FruitClass;

const std::array<NutrientGroup, kNutrientGroupCount>& table() {
    // Pear sits with the stone fruits because the source table puts it there.
    static const std::array<NutrientGroup, kNutrientGroupCount> groups = {{
        {NutrientGroupId::Citrus, "Citrus", {"Vitamin C and Potassium"},
         {F::Grapefruit, F::Lemon, F::Orange}},
        {NutrientGroupId::Tropical, "Tropical", {"Vitamin B6 and C"},
         {F::Banana, F::Mango, F::Pineapple}},
        {NutrientGroupId::Pome, "Pome", {"vitamin C and Manganese"},
         {F::Apple, F::CommonFig, F::Pomegranate}},
        {NutrientGroupId::Stone, "Stone", {"vitamins A, C, and E"}, {F::Peach, F::Pear}},
        {NutrientGroupId::Melons, "Melons", {"Vitamins A and C"},
         {F::Cantaloupe, F::Watermelon}},
        {NutrientGroupId::Berries, "Berries", {"Vitamin K and Folate"},
         {F::Grape, F::Strawberry}},
    }};
    return groups;
}

}  // namespace

std::span<const NutrientGroup> nutrient_groups() { return table(); }

const NutrientGroup& nutrient_lookup(FruitClass fruit) {
    for (const auto& g : table()) {
        if (std::find(g.members.begin(), g.members.end(), fruit) != g.members.end()) {
            return g;
        }
    }
    // Unreachable: the table partitions the enumeration.
    return table().front();
}

std::vector<std::string> nutrients_for(const FruitInventory& eaten) {
    std::vector<std::string> out;
    for (const auto& [fruit, n] : eaten.entries()) {
        for (std::string_view nutrient : nutrient_lookup(fruit).nutrients) {
            if (std::find(out.begin(), out.end(), nutrient) == out.end()) {
                out.emplace_back(nutrient);
            }
        }
    }
    return out;
}

}  // namespace fruitpal
