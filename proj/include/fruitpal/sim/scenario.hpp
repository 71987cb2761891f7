#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fruitpal/allergen/pir.hpp"
#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/types.hpp"
#include "fruitpal/detection/detector.hpp"

namespace fruitpal::sim {

/// Input validation failure, with the offending file and 1-based line
/// (0 when the problem is not tied to a line).
class ScenarioError : public Error {
public:
    ScenarioError(std::string file, std::size_t line, const std::string& what);
    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

enum class DeviceRole { Allergen, Nutrition };

struct DeviceSpec {
    std::string device_id;
    DeviceRole role = DeviceRole::Allergen;
    std::string person_id;

    // Allergen devices.
    AllergyProfile profile;
    allergen::PirConfig pir;

    // Nutrition devices.
    std::string digest_time = "20:00";
    std::string morning_reset = "06:00";
    double inventory_conf = 0.25;
    bool smoothing = false;  // Frame events then carry three frame ids
};

enum class EventType { Motion, Frame, CaregiverAck, AdvanceHours, Restart };

struct TimelineEvent {
    Tick at = 0;
    EventType type = EventType::Motion;
    std::string device_id;               // empty for AdvanceHours
    std::vector<std::string> frame_ids;  // Frame: one id, or three when smoothing
    std::string alert_id;                // CaregiverAck
    std::string caregiver_id;            // CaregiverAck
    int hours = 0;                       // AdvanceHours
    std::size_t line = 0;
};

/// A scenario directory:
///
///   scenario.json   {"name", "seed", "start_date": "YYYY-MM-DD",
///                    "fixtures": "frames.jsonl", "timeline": "timeline.jsonl",
///                    "devices": [...]}
///   frames.jsonl    detector fixtures (see ScriptedDetector)
///   timeline.jsonl  one event per line, strictly increasing "at":
///     {"at": 10, "device": "kitchen", "type": "Motion"}
///     {"at": 12, "device": "kitchen", "type": "Frame", "frame_id": "f1"}
///     {"at": 13, "device": "kitchen", "type": "Frame", "frame_ids": ["a", "b", "c"]}
///     {"at": 40, "type": "CaregiverAck", "alert_id": "kitchen-A1", "caregiver_id": "nurse"}
///     {"at": 50, "type": "AdvanceHours", "hours": 3}
///     {"at": 99, "device": "plate", "type": "Restart"}
///
/// Device entries:
///   {"device_id": "kitchen", "role": "allergen", "person_id": "p1",
///    "profile": {"allergens": ["Mango"], "confidence_threshold": 0.5},
///    "pir": {"r9_ohms": 1e6, "c7_farads": 1e-8, "no_motion_timeout_ticks": 120}}
///   {"device_id": "plate", "role": "nutrition", "person_id": "p1",
///    "digest_time": "20:00", "morning_reset": "06:00", "inventory_conf": 0.25,
///    "smoothing": false}
struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    std::chrono::sys_days start_date{};
    std::vector<DeviceSpec> devices;
    detection::ScriptedDetector fixtures;
    std::vector<TimelineEvent> timeline;

    const DeviceSpec* device(const std::string& id) const;
};

/// Loads and validates a scenario directory. Throws ScenarioError.
Scenario load_scenario(const std::filesystem::path& dir);

/// Parses timeline JSONL against known devices and fixtures. Throws
/// ScenarioError naming `file_label`.
std::vector<TimelineEvent> parse_timeline(std::istream& in, const std::vector<DeviceSpec>& devices,
                                          const detection::ScriptedDetector& fixtures,
                                          const std::string& file_label);

std::string_view to_string(EventType t) noexcept;

}  // namespace fruitpal::sim
