#include "fruitpal/nutrition/tracker.hpp"

#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/nutrients.hpp"

namespace fruitpal::nutrition {

TrackerState start_day(const FruitInventory& inventory, Tick now) {
    return TrackerState{inventory, {}, 0, now};
}

TickResult hourly_tick(const TrackerState& state, const FruitInventory& observed) {
    if (state.hours_elapsed >= kHoursPerDay) {
        throw DayComplete();
    }
    TickResult r{state, {}};
    for (FruitClass c : kAllFruitClasses) {
        const auto before = state.baseline.count(c);
        const auto now = observed.count(c);
        if (now < before) {
            r.delta.set(c, before - now);
            r.state.eaten.add(c, before - now);
        }
        r.state.baseline.set(c, now);
    }
    ++r.state.hours_elapsed;
    return r;
}

TickResult hourly_tick_smoothed(const TrackerState& state, const FruitInventory& a, const FruitInventory& b,
                                const FruitInventory& c) {
    return hourly_tick(state, median_inventory(a, b, c));
}

TrackerState daily_reset(const TrackerState&, const FruitInventory& observed, Tick now) {
    return start_day(observed, now);
}

DigestMessage compose_digest(const TrackerState& state, const std::string& date) {
    DigestMessage d{date, state.eaten, nutrients_for(state.eaten), {}};
    if (state.eaten.empty()) {
        d.text = "Daily fruit summary for " + date + ": no fruit consumed.";
        return d;
    }
    std::string text = "Daily fruit summary for " + date + ": ";
    bool first = true;
    for (const auto& [fruit, n] : state.eaten.entries()) {
        if (!first) text += "; ";
        first = false;
        text += std::to_string(n) + " x " + std::string(to_string(fruit)) + " (";
        const auto& group = nutrient_lookup(fruit);
        for (std::size_t i = 0; i < group.nutrients.size(); ++i) {
            if (i) text += ", ";
            text += group.nutrients[i];
        }
        text += ")";
    }
    text += ". Nutrients: ";
    for (std::size_t i = 0; i < d.nutrients.size(); ++i) {
        if (i) text += "; ";
        text += d.nutrients[i];
    }
    text += ".";
    d.text = std::move(text);
    return d;
}

Json digest_to_json(const DigestMessage& d) {
    return Json{{"date", d.date}, {"eaten", inventory_to_json(d.eaten)}, {"nutrients", d.nutrients}, {"text", d.text}};
}

DigestMessage digest_from_json(const Json& j) {
    try {
        return DigestMessage{j.at("date").get<std::string>(), inventory_from_json(j.at("eaten")),
                             j.at("nutrients").get<std::vector<std::string>>(), j.at("text").get<std::string>()};
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad digest: ") + e.what());
    }
}

Json tracker_to_json(const TrackerState& s) {
    return Json{{"baseline", inventory_to_json(s.baseline)},
                {"eaten", inventory_to_json(s.eaten)},
                {"hours_elapsed", s.hours_elapsed},
                {"day_start", s.day_start}};
}

}  // namespace fruitpal::nutrition
