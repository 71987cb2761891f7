#include "fruitpal/core/fruit.hpp"

#include <string>

#include "fruitpal/core/errors.hpp"

namespace fruitpal {

namespace {

constexpr std::array<std::string_view, kFruitClassCount> kExternalNames = {
    "Apple", "Banana", "Cantaloupe", "Common fig", "Grape",
    "Grapefruit", "Lemon", "Mango", "Orange", "Peach",
    "Pear", "Pineapple", "Pomegranate", "Strawberry", "Watermelon",
};

constexpr std::array<std::string_view, kFruitClassCount> kIdentifiers = {
    "Apple", "Banana", "Cantaloupe", "CommonFig", "Grape",
    "Grapefruit", "Lemon", "Mango", "Orange", "Peach",
    "Pear", "Pineapple", "Pomegranate", "Strawberry", "Watermelon",
};

}  // namespace

std::string_view to_string(FruitClass c) noexcept { return kExternalNames[index_of(c)]; }

std::string_view identifier(FruitClass c) noexcept { return kIdentifiers[index_of(c)]; }

std::optional<FruitClass> try_parse_fruit_class(std::string_view label) noexcept {
    for (FruitClass c : kAllFruitClasses) {
        if (label == kExternalNames[index_of(c)] || label == kIdentifiers[index_of(c)]) {
            return c;
        }
    }
    return std::nullopt;
}

FruitClass parse_fruit_class(std::string_view label) {
    if (auto c = try_parse_fruit_class(label)) {
        return *c;
    }
    throw ParseError("unknown fruit class \"" + std::string(label) + "\"");
}

}  // namespace fruitpal
