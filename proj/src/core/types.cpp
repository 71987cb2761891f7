#include "fruitpal/core/types.hpp"

#include <cmath>
#include <sstream>

#include "fruitpal/core/errors.hpp"

namespace fruitpal {

namespace {

bool in_unit(double v) noexcept { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

bool BoundingBox::is_valid(double x_min, double y_min, double x_max, double y_max) noexcept {
    return in_unit(x_min) && in_unit(y_min) && in_unit(x_max) && in_unit(y_max) &&
           x_min < x_max && y_min < y_max;
}

BoundingBox::BoundingBox(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
    if (!is_valid(x_min, y_min, x_max, y_max)) {
        std::ostringstream os;
        os << "invalid box (" << x_min << ", " << y_min << ", " << x_max << ", " << y_max << ")";
        throw InvalidValue(os.str());
    }
}

Detection::Detection(FruitClass fruit_, BoundingBox box_, double confidence_)
    : fruit(fruit_), box(box_), confidence(confidence_) {
    if (!in_unit(confidence)) {
        throw InvalidValue("confidence outside [0,1]: " + std::to_string(confidence));
    }
}

void AllergyProfile::validate() const {
    if (allergens.empty()) {
        throw InvalidValue("allergy profile for '" + person_id + "' has no allergens");
    }
    if (!in_unit(confidence_threshold)) {
        throw InvalidValue("allergy profile confidence threshold outside [0,1]");
    }
}

}  // namespace fruitpal
