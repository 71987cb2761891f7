#include "fruitpal/core/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "fruitpal/core/errors.hpp"

namespace fruitpal {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return std::from_chars(s.data(), s.data() + s.size(), out).ec == std::errc{};
}

Tick floor_div(Tick a, Tick b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0); }

}  // namespace

std::chrono::sys_days parse_date(std::string_view s) {
    using namespace std::chrono;
    int y = 0, m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) ||
        !parse_int(s.substr(8, 2), d)) {
        throw ConfigError("expected a date as YYYY-MM-DD, got '" + std::string(s) + "'");
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ConfigError("no such date: " + std::string(s));
    return sys_days{ymd};
}

std::string format_date(std::chrono::sys_days d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string date_of_tick(std::chrono::sys_days start, Tick t) {
    return format_date(start + std::chrono::days{floor_div(t, kTicksPerDay)});
}

Tick parse_time_of_day(std::string_view s) {
    int h = 0, m = 0;
    if (s.size() != 5 || s[2] != ':' || !parse_int(s.substr(0, 2), h) || !parse_int(s.substr(3, 2), m) || h > 23 ||
        m > 59) {
        throw ConfigError("expected a time of day as HH:MM, got '" + std::string(s) + "'");
    }
    return h * kTicksPerHour + m * 60;
}

std::string format_time_of_day(Tick offset) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(offset / kTicksPerHour),
                  static_cast<int>(offset % kTicksPerHour / 60));
    return buf;
}

Tick next_occurrence(Tick now, Tick offset) {
    const Tick day = floor_div(now, kTicksPerDay) * kTicksPerDay;
    const Tick t = day + offset;
    return t >= now ? t : t + kTicksPerDay;
}

}  // namespace fruitpal
