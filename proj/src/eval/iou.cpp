#include "fruitpal/eval/iou.hpp"

#include <algorithm>

namespace fruitpal::eval {

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double iw = std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
    const double ih = std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace fruitpal::eval
