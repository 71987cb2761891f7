#pragma once

#include <string>
#include <vector>

#include "fruitpal/core/inventory.hpp"
#include "fruitpal/core/json.hpp"
#include "fruitpal/core/types.hpp"

namespace fruitpal::nutrition {

inline constexpr int kHoursPerDay = 24;

struct TrackerState {
    FruitInventory baseline;
    FruitInventory eaten;
    int hours_elapsed = 0;  // 0..24
    Tick day_start = 0;

    friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

struct TickResult {
    TrackerState state;
    FruitInventory delta;  // fruit counted as eaten this hour
};

TrackerState start_day(const FruitInventory& inventory, Tick now);

/// Diffs an hourly observation against the baseline. For each class the
/// drop max(0, baseline - observed) is added to the ledger, and the baseline
/// follows the observation whenever it changed (up or down).
/// Throws DayComplete once 24 ticks have been taken.
TickResult hourly_tick(const TrackerState& state, const FruitInventory& observed);

/// Same as hourly_tick on the per-class median of three captures.
TickResult hourly_tick_smoothed(const TrackerState& state, const FruitInventory& a, const FruitInventory& b,
                                const FruitInventory& c);

/// Morning restart: a fresh day seeded from what is on the plate now.
TrackerState daily_reset(const TrackerState& state, const FruitInventory& observed, Tick now);

struct DigestMessage {
    std::string date;  // YYYY-MM-DD
    FruitInventory eaten;
    std::vector<std::string> nutrients;
    std::string text;

    friend bool operator==(const DigestMessage&, const DigestMessage&) = default;
};

/// Text for an empty ledger contains "no fruit consumed".
DigestMessage compose_digest(const TrackerState& state, const std::string& date);

Json digest_to_json(const DigestMessage& d);
DigestMessage digest_from_json(const Json& j);

Json tracker_to_json(const TrackerState& s);

}  // namespace fruitpal::nutrition
