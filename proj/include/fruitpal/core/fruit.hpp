#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace fruitpal {

/// The closed 15-label detection vocabulary.
enum class FruitClass : std::uint8_t {
    Apple,
    Banana,
    Cantaloupe,
    CommonFig,
    Grape,
    Grapefruit,
    Lemon,
    Mango,
    Orange,
    Peach,
    Pear,
    Pineapple,
    Pomegranate,
    Strawberry,
    Watermelon,
};

inline constexpr std::size_t kFruitClassCount = 15;

inline constexpr std::array<FruitClass, kFruitClassCount> kAllFruitClasses = {
    FruitClass::Apple,      FruitClass::Banana,    FruitClass::Cantaloupe,
    FruitClass::CommonFig,  FruitClass::Grape,     FruitClass::Grapefruit,
    FruitClass::Lemon,      FruitClass::Mango,     FruitClass::Orange,
    FruitClass::Peach,      FruitClass::Pear,      FruitClass::Pineapple,
    FruitClass::Pomegranate, FruitClass::Strawberry, FruitClass::Watermelon,
};

constexpr std::size_t index_of(FruitClass c) noexcept { return static_cast<std::size_t>(c); }

/// External spelling ("Common fig" carries a space).
std::string_view to_string(FruitClass c) noexcept;

/// Internal identifier spelling ("CommonFig").
std::string_view identifier(FruitClass c) noexcept;

/// Accepts the external spelling or the identifier; nothing else.
std::optional<FruitClass> try_parse_fruit_class(std::string_view label) noexcept;

/// Throws ParseError on an unknown label.
FruitClass parse_fruit_class(std::string_view label);

}  // namespace fruitpal
