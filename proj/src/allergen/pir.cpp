#include "fruitpal/allergen/pir.hpp"

#include "fruitpal/core/errors.hpp"

namespace fruitpal::allergen {

void PirConfig::validate() const {
    if (!(r9_ohms > 0.0) || !(c7_farads > 0.0)) {
        throw ConfigError("PIR resistance and capacitance must be positive");
    }
    if (no_motion_timeout <= 0) {
        throw ConfigError("no_motion_timeout must be positive");
    }
}

double pir_time_constant(double r9_ohms, double c7_farads) {
    if (!(r9_ohms > 0.0) || !(c7_farads > 0.0)) {
        throw ConfigError("PIR resistance and capacitance must be positive");
    }
    // R*C first: 24 * 1e6 * 1e-8 evaluated left to right is 0.24000000000000002.
    return 24.0 * (r9_ohms * c7_farads);
}

Json pir_to_json(const PirConfig& c) {
    return Json{{"r9_ohms", c.r9_ohms}, {"c7_farads", c.c7_farads}, {"no_motion_timeout_ticks", c.no_motion_timeout}};
}

PirConfig pir_from_json(const Json& j) {
    PirConfig c;
    try {
        c.r9_ohms = j.value("r9_ohms", c.r9_ohms);
        c.c7_farads = j.value("c7_farads", c.c7_farads);
        c.no_motion_timeout = j.value("no_motion_timeout_ticks", c.no_motion_timeout);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad PIR config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace fruitpal::allergen
