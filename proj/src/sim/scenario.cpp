#include "fruitpal/sim/scenario.hpp"

#include <fstream>
#include <set>

#include "fruitpal/core/calendar.hpp"
#include "fruitpal/core/json.hpp"

namespace fruitpal::sim {

ScenarioError::ScenarioError(std::string file, std::size_t line, const std::string& what)
    : Error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      file_(std::move(file)),
      line_(line) {}

std::string_view to_string(EventType t) noexcept {
    switch (t) {
        case EventType::Motion: return "Motion";
        case EventType::Frame: return "Frame";
        case EventType::CaregiverAck: return "CaregiverAck";
        case EventType::AdvanceHours: return "AdvanceHours";
        case EventType::Restart: return "Restart";
    }
    return "?";
}

const DeviceSpec* Scenario::device(const std::string& id) const {
    for (const auto& d : devices)
        if (d.device_id == id) return &d;
    return nullptr;
}

namespace {

std::optional<EventType> parse_event_type(const std::string& s) {
    for (EventType t : {EventType::Motion, EventType::Frame, EventType::CaregiverAck, EventType::AdvanceHours,
                        EventType::Restart}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

DeviceSpec parse_device(const Json& j) {
    DeviceSpec d;
    d.device_id = j.at("device_id").get<std::string>();
    if (d.device_id.empty()) throw ConfigError("device_id must not be empty");
    d.person_id = j.value("person_id", d.device_id);
    const std::string role = j.value("role", std::string("allergen"));
    if (role == "allergen") {
        d.role = DeviceRole::Allergen;
        Json p = j.at("profile");
        if (!p.contains("person_id")) p["person_id"] = d.person_id;
        d.profile = profile_from_json(p);
        d.pir = allergen::pir_from_json(j.value("pir", Json::object()));
    } else if (role == "nutrition") {
        d.role = DeviceRole::Nutrition;
        d.digest_time = j.value("digest_time", d.digest_time);
        d.morning_reset = j.value("morning_reset", d.morning_reset);
        parse_time_of_day(d.digest_time);
        parse_time_of_day(d.morning_reset);
        d.inventory_conf = j.value("inventory_conf", d.inventory_conf);
        if (!(d.inventory_conf >= 0.0 && d.inventory_conf <= 1.0)) throw ConfigError("inventory_conf must be in [0, 1]");
        d.smoothing = j.value("smoothing", false);
    } else {
        throw ConfigError("unknown device role '" + role + "'");
    }
    return d;
}

const DeviceSpec* find(const std::vector<DeviceSpec>& devices, const std::string& id) {
    for (const auto& d : devices)
        if (d.device_id == id) return &d;
    return nullptr;
}

}  // namespace

std::vector<TimelineEvent> parse_timeline(std::istream& in, const std::vector<DeviceSpec>& devices,
                                          const detection::ScriptedDetector& fixtures, const std::string& file_label) {
    std::vector<TimelineEvent> out;
    std::string line;
    std::size_t line_no = 0;
    Tick clock_floor = 0;  // earliest tick the next event may use
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        auto fail = [&](const std::string& what) { throw ScenarioError(file_label, line_no, what); };
        TimelineEvent e;
        e.line = line_no;
        try {
            const Json j = Json::parse(line);
            e.at = j.at("at").get<Tick>();
            const auto type_text = j.at("type").get<std::string>();
            const auto type = parse_event_type(type_text);
            if (!type) fail("unknown event type '" + type_text + "'");
            e.type = *type;
            e.device_id = j.value("device", std::string());
            if (e.device_id.empty() && devices.size() == 1 && e.type != EventType::AdvanceHours &&
                e.type != EventType::CaregiverAck) {
                e.device_id = devices.front().device_id;
            }
            const DeviceSpec* dev = e.device_id.empty() ? nullptr : find(devices, e.device_id);
            if (!e.device_id.empty() && !dev) fail("unknown device '" + e.device_id + "'");

            switch (e.type) {
                case EventType::Motion:
                    if (!dev || dev->role != DeviceRole::Allergen) fail("Motion needs an allergen device");
                    break;
                case EventType::Frame: {
                    if (!dev) fail("Frame needs a device");
                    if (j.contains("frame_ids")) {
                        e.frame_ids = j["frame_ids"].get<std::vector<std::string>>();
                    } else {
                        e.frame_ids.push_back(j.at("frame_id").get<std::string>());
                    }
                    const std::size_t want = dev->role == DeviceRole::Nutrition && dev->smoothing ? 3 : 1;
                    if (e.frame_ids.size() != want) {
                        fail("Frame for device '" + dev->device_id + "' needs " + std::to_string(want) + " frame id(s)");
                    }
                    for (const auto& id : e.frame_ids)
                        if (!fixtures.has_frame(id)) fail("frame_id '" + id + "' is not in the fixtures");
                    break;
                }
                case EventType::CaregiverAck:
                    e.alert_id = j.at("alert_id").get<std::string>();
                    e.caregiver_id = j.value("caregiver_id", std::string("caregiver"));
                    if (e.alert_id.empty()) fail("alert_id must not be empty");
                    break;
                case EventType::AdvanceHours:
                    e.hours = j.at("hours").get<int>();
                    if (e.hours <= 0) fail("hours must be positive");
                    break;
                case EventType::Restart:
                    if (!dev || dev->role != DeviceRole::Nutrition) fail("Restart applies to nutrition devices only");
                    break;
            }
        } catch (const Json::exception& ex) {
            fail(ex.what());
        } catch (const ScenarioError&) {
            throw;
        } catch (const Error& ex) {
            fail(ex.what());
        }
        if (e.at < clock_floor || (!out.empty() && e.at <= out.back().at)) {
            fail("event ticks must be strictly increasing and not inside a previous AdvanceHours span (tick " +
                 std::to_string(e.at) + ")");
        }
        clock_floor = e.at + (e.type == EventType::AdvanceHours ? e.hours * kTicksPerHour : 0);
        out.push_back(std::move(e));
    }
    return out;
}

Scenario load_scenario(const std::filesystem::path& dir) {
    const auto manifest = dir / "scenario.json";
    std::ifstream in(manifest);
    if (!in) throw ScenarioError(manifest.string(), 0, "cannot open");
    Scenario s;
    std::string fixtures_name, timeline_name;
    try {
        const Json j = Json::parse(in);
        s.name = j.value("name", dir.filename().string());
        s.seed = j.value("seed", std::uint64_t{0});
        s.start_date = parse_date(j.value("start_date", std::string("2024-01-01")));
        fixtures_name = j.value("fixtures", std::string("frames.jsonl"));
        timeline_name = j.value("timeline", std::string("timeline.jsonl"));
        std::set<std::string> seen;
        for (const Json& d : j.value("devices", Json::array())) {
            s.devices.push_back(parse_device(d));
            if (!seen.insert(s.devices.back().device_id).second) {
                throw ConfigError("duplicate device_id '" + s.devices.back().device_id + "'");
            }
        }
    } catch (const Json::exception& e) {
        throw ScenarioError(manifest.string(), 0, e.what());
    } catch (const Error& e) {
        throw ScenarioError(manifest.string(), 0, e.what());
    }

    const auto fixtures_path = dir / fixtures_name;
    if (std::filesystem::exists(fixtures_path)) {
        try {
            s.fixtures = detection::ScriptedDetector::load(fixtures_path);
        } catch (const Error& e) {
            throw ScenarioError(fixtures_path.string(), 0, e.what());
        }
    }
    const auto timeline_path = dir / timeline_name;
    std::ifstream tl(timeline_path);
    if (!tl) throw ScenarioError(timeline_path.string(), 0, "cannot open");
    s.timeline = parse_timeline(tl, s.devices, s.fixtures, timeline_path.string());
    return s;
}

}  // namespace fruitpal::sim
