#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fruitpal/allergen/end_platform.hpp"
#include "fruitpal/core/json.hpp"
#include "fruitpal/hub/hub.hpp"
#include "fruitpal/nutrition/tracker.hpp"
#include "fruitpal/sim/scenario.hpp"

namespace fruitpal::sim {

class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Append-only run record. Each entry is a JSON object with at least
/// "seq", "tick" and "type"; keys serialize in sorted order, so the same
/// run always produces the same bytes.
class EventLog {
public:
    void add(Tick tick, std::string_view type, const std::string& device, Json fields = Json::object());

    const std::vector<Json>& records() const noexcept { return records_; }
    std::size_t count(std::string_view type) const;
    /// One record per line.
    std::string dump() const;

private:
    std::vector<Json> records_;
};

/// Deterministic discrete-event run of one scenario on a virtual clock.
///
/// Per timeline event at tick t, first every internal event due at or
/// before t runs in time order (at equal ticks: departure timeouts, then
/// morning resets, then digests), then the event itself, then hub deliveries
/// to devices. AdvanceHours moves the clock the same way without an event.
class Simulator {
public:
    Simulator(const Scenario& scenario, std::unique_ptr<hub::LogStore> hub_log);

    /// Throws InvariantViolation when a module invariant fails; the log keeps
    /// everything up to and including the violation record.
    void run();

    const EventLog& log() const noexcept { return log_; }
    hub::Hub& hub() noexcept { return *hub_; }
    Tick clock() const noexcept { return clock_; }

    std::size_t alerts_raised() const noexcept { return alerts_raised_; }
    std::size_t open_alerts() const;
    std::size_t digests() const noexcept { return digests_; }

private:
    struct AllergenDevice {
        const DeviceSpec* spec;
        allergen::EndPlatformConfig config;
        allergen::EndPlatformState state;
        std::set<std::string> seen_msgs;  // device-side dedup
    };
    struct NutritionDevice {
        const DeviceSpec* spec;
        std::optional<nutrition::TrackerState> tracker;
        Tick reset_offset = 0;
        Tick next_reset = 0;
    };

    void handle(const TimelineEvent& e);
    void advance_internal(Tick limit);
    void step_allergen(AllergenDevice& d, const allergen::EndEvent& e);
    void handle_nutrition_frame(NutritionDevice& d, const TimelineEvent& e);
    void morning_reset(NutritionDevice& d, Tick at);
    std::optional<hub::TextMessagePayload> compose(const std::string& device_id, const std::string& date, Tick at);
    hub::Receipt publish(hub::HubMessage m);
    void log_hub_message(const hub::HubMessage& m, std::size_t delivered_to);
    void deliver_to_devices();
    [[noreturn]] void violation(const std::string& device, const std::string& what);

    const Scenario& scenario_;
    std::unique_ptr<hub::Hub> hub_;
    EventLog log_;
    Tick clock_ = 0;
    std::map<std::string, AllergenDevice> allergen_;
    std::map<std::string, NutritionDevice> nutrition_;
    std::size_t alerts_raised_ = 0;
    std::size_t digests_ = 0;
};

struct RunSummary {
    int exit_code = 0;  // 0 ok, 1 invariant failure, 2 input error
    std::string message;
    std::filesystem::path out_dir;
    std::size_t records = 0;
    std::size_t alerts_raised = 0;
    std::size_t open_alerts = 0;
    std::size_t digests = 0;

    Json to_json() const;
};

/// Loads, runs and writes events.jsonl, hub.jsonl and summary.json. The
/// output directory is `out_dir` if given, else $FRUITPAL_LOG_DIR, else
/// <dir>/out. Never throws for bad input; the exit code says what happened.
RunSummary run_scenario(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& out_dir = {});

}  // namespace fruitpal::sim
