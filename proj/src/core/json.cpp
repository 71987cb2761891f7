#include "fruitpal/core/json.hpp"

#include <string>

#include "fruitpal/core/errors.hpp"

namespace fruitpal {

namespace {

double number_at(const Json& row, std::size_t i) {
    const Json& v = row.at(i);
    if (!v.is_number()) {
        throw ParseError("expected number at column " + std::to_string(i));
    }
    return v.get<double>();
}

void expect_row(const Json& row, std::size_t width) {
    if (!row.is_array() || row.size() != width) {
        throw ParseError("expected a row of " + std::to_string(width) + " values, got " +
                         row.dump());
    }
}

}  // namespace

Json fruit_to_json(FruitClass c) { return std::string(to_string(c)); }

FruitClass fruit_from_json(const Json& j) {
    if (!j.is_string()) {
        throw ParseError("fruit class must be a string");
    }
    return parse_fruit_class(j.get<std::string>());
}

Json box_row(FruitClass fruit, const BoundingBox& b) {
    return Json::array({fruit_to_json(fruit), b.x_min(), b.y_min(), b.x_max(), b.y_max()});
}

GroundTruth truth_from_row(const Json& row) {
    expect_row(row, 5);
    return GroundTruth{fruit_from_json(row[0]),
                       BoundingBox(number_at(row, 1), number_at(row, 2), number_at(row, 3),
                                   number_at(row, 4))};
}

Json detection_row(const Detection& d) {
    Json row = box_row(d.fruit, d.box);
    row.push_back(d.confidence);
    return row;
}

Detection detection_from_row(const Json& row) {
    expect_row(row, 6);
    return Detection(fruit_from_json(row[0]),
                     BoundingBox(number_at(row, 1), number_at(row, 2), number_at(row, 3),
                                 number_at(row, 4)),
                     number_at(row, 5));
}

Json inventory_to_json(const FruitInventory& inv) {
    Json j = Json::object();
    for (const auto& [fruit, n] : inv.entries()) {
        j[std::string(to_string(fruit))] = n;
    }
    return j;
}

FruitInventory inventory_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ParseError("inventory must be an object");
    }
    FruitInventory inv;
    for (const auto& [label, n] : j.items()) {
        if (!n.is_number_unsigned()) {
            throw ParseError("inventory count for " + label + " must be a non-negative integer");
        }
        inv.add(parse_fruit_class(label), n.get<FruitInventory::Count>());
    }
    return inv;
}

Json profile_to_json(const AllergyProfile& p) {
    Json allergens = Json::array();
    for (FruitClass c : p.allergens) {
        allergens.push_back(fruit_to_json(c));
    }
    return Json{{"person_id", p.person_id},
                {"allergens", allergens},
                {"confidence_threshold", p.confidence_threshold}};
}

AllergyProfile profile_from_json(const Json& j) {
    AllergyProfile p;
    p.person_id = j.at("person_id").get<std::string>();
    for (const Json& a : j.at("allergens")) {
        p.allergens.insert(fruit_from_json(a));
    }
    p.confidence_threshold = j.value("confidence_threshold", 0.5);
    p.validate();
    return p;
}

}  // namespace fruitpal
