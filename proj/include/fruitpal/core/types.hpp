#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "fruitpal/core/fruit.hpp"

namespace fruitpal {

/// Simulated clock unit. One tick is one second of simulated time.
using Tick = std::int64_t;

inline constexpr Tick kTicksPerHour = 3600;
inline constexpr Tick kTicksPerDay = 24 * kTicksPerHour;

/// Corner-form box in normalized image coordinates with strictly positive area.
class BoundingBox {
public:
    /// Throws InvalidValue unless 0 <= x_min < x_max <= 1 and 0 <= y_min < y_max <= 1.
    BoundingBox(double x_min, double y_min, double x_max, double y_max);

    static bool is_valid(double x_min, double y_min, double x_max, double y_max) noexcept;

    double x_min() const noexcept { return x_min_; }
    double y_min() const noexcept { return y_min_; }
    double x_max() const noexcept { return x_max_; }
    double y_max() const noexcept { return y_max_; }

    double width() const noexcept { return x_max_ - x_min_; }
    double height() const noexcept { return y_max_ - y_min_; }
    double area() const noexcept { return width() * height(); }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

private:
    double x_min_;
    double y_min_;
    double x_max_;
    double y_max_;
};

struct Detection {
    FruitClass fruit;
    BoundingBox box;
    double confidence;

    /// Throws InvalidValue when confidence is outside [0, 1].
    Detection(FruitClass fruit, BoundingBox box, double confidence);

    friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruth {
    FruitClass fruit;
    BoundingBox box;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct AllergyProfile {
    std::string person_id;
    std::set<FruitClass> allergens;
    double confidence_threshold = 0.5;

    /// Throws InvalidValue on an empty allergen set or a threshold outside [0, 1].
    void validate() const;

    bool is_allergen(FruitClass c) const { return allergens.count(c) != 0; }
};

}  // namespace fruitpal
