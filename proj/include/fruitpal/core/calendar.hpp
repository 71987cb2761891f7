#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "fruitpal/core/types.hpp"

// Simulated wall clock: tick 0 is local midnight of a scenario's start date.

namespace fruitpal {

/// "YYYY-MM-DD". Throws ConfigError on anything else.
std::chrono::sys_days parse_date(std::string_view s);
std::string format_date(std::chrono::sys_days d);

/// Calendar date of a tick.
std::string date_of_tick(std::chrono::sys_days start, Tick t);

/// "HH:MM" to an offset in ticks from midnight. Throws ConfigError.
Tick parse_time_of_day(std::string_view s);
std::string format_time_of_day(Tick offset);

/// Smallest t >= now with t mod 24h == offset.
Tick next_occurrence(Tick now, Tick offset);

}  // namespace fruitpal
