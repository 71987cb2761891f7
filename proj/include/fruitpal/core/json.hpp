#pragma once

#include <json.hpp>

#include "fruitpal/core/inventory.hpp"
#include "fruitpal/core/types.hpp"

// Wire representations shared by manifests, fixtures, logs and the hub.
//
//   box row        ["Common fig", x_min, y_min, x_max, y_max]
//   detection row  ["Apple", x_min, y_min, x_max, y_max, confidence]
//   inventory      {"Apple": 2, "Strawberry": 3}   (zero counts omitted)

namespace fruitpal {

using Json = nlohmann::json;

Json fruit_to_json(FruitClass c);
FruitClass fruit_from_json(const Json& j);

Json box_row(FruitClass fruit, const BoundingBox& box);
GroundTruth truth_from_row(const Json& row);

Json detection_row(const Detection& d);
Detection detection_from_row(const Json& row);

Json inventory_to_json(const FruitInventory& inv);
FruitInventory inventory_from_json(const Json& j);

Json profile_to_json(const AllergyProfile& p);
AllergyProfile profile_from_json(const Json& j);

}  // namespace fruitpal
