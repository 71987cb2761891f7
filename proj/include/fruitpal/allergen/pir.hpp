#pragma once

#include "fruitpal/core/json.hpp"
#include "fruitpal/core/types.hpp"

namespace fruitpal::allergen {

/// PIR sensor tuning plus the departure criterion used by the end platform.
struct PirConfig {
    double r9_ohms = 1e6;
    double c7_farads = 1e-8;
    Tick no_motion_timeout = 120;

    /// Throws ConfigError unless all three are positive.
    void validate() const;
};

/// Ti = 24 * R9 * C7, SI units in, seconds out. Throws ConfigError on a
/// non-positive argument.
double pir_time_constant(double r9_ohms, double c7_farads);

// {"r9_ohms": ..., "c7_farads": ..., "no_motion_timeout_ticks": ...}
Json pir_to_json(const PirConfig& c);
PirConfig pir_from_json(const Json& j);

}  // namespace fruitpal::allergen
