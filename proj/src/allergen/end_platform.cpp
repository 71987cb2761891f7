#include "fruitpal/allergen/end_platform.hpp"

#include "fruitpal/core/errors.hpp"

namespace fruitpal::allergen {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

AlertState parse_alert_state(const std::string& s) {
    for (AlertState a : {AlertState::Active, AlertState::Acknowledged, AlertState::ClearedByDeparture}) {
        if (to_string(a) == s) return a;
    }
    throw ParseError("unknown alert state: " + s);
}

void resolve(EndPlatformState& st, AlertState how, Tick at, std::vector<Command>& out) {
    Alert& a = *st.active_alert;
    a.state = how;
    a.resolved_at = at;
    out.push_back(StopAlarm{a.alert_id, how, at});
    st.active_alert.reset();
    st.mode = Mode::Idle;
}

}  // namespace

std::string_view to_string(AlertState s) noexcept {
    switch (s) {
        case AlertState::Active: return "Active";
        case AlertState::Acknowledged: return "Acknowledged";
        case AlertState::ClearedByDeparture: return "ClearedByDeparture";
    }
    return "?";
}

std::string_view to_string(Mode m) noexcept {
    switch (m) {
        case Mode::Idle: return "Idle";
        case Mode::MotionDetected: return "MotionDetected";
        case Mode::Detecting: return "Detecting";
        case Mode::AlertActive: return "AlertActive";
    }
    return "?";
}

void EndPlatformConfig::validate() const {
    if (device_id.empty()) throw ConfigError("device_id must not be empty");
    pir.validate();
    try {
        profile.validate();
    } catch (const InvalidValue& e) {
        throw ConfigError(e.what());
    }
}

Tick event_time(const EndEvent& e) noexcept {
    return std::visit(overloaded{[](const MotionEvent& m) { return m.at; },
                                 [](const FrameEvent& f) { return f.frame.timestamp; },
                                 [](const AckEvent& a) { return a.at; },
                                 [](const ClockEvent& c) { return c.at; }},
                      e);
}

std::optional<AllergenHit> evaluate_frame(const std::vector<Detection>& detections, const AllergyProfile& profile,
                                          const detection::FrameRef& frame) {
    const Detection* best = nullptr;
    for (const Detection& d : detections) {
        if (!profile.is_allergen(d.fruit) || d.confidence < profile.confidence_threshold) continue;
        if (best == nullptr || d.confidence > best->confidence) best = &d;
    }
    if (best == nullptr) return std::nullopt;
    return AllergenHit{best->fruit, best->confidence, frame};
}

StepResult step(const EndPlatformState& state, const EndEvent& event, const EndPlatformConfig& config,
                const detection::DetectorBackend& backend) {
    const Tick now = event_time(event);
    if (now < state.now) {
        throw InvalidValue("event at tick " + std::to_string(now) + " is older than device clock " +
                           std::to_string(state.now));
    }

    StepResult r{state, {}, std::nullopt};
    EndPlatformState& st = r.state;
    st.now = now;

    // Departure timeout, evaluated at the event's tick.
    if (st.mode != Mode::Idle && st.last_motion_at && now - *st.last_motion_at >= config.pir.no_motion_timeout) {
        if (st.mode == Mode::AlertActive) {
            resolve(st, AlertState::ClearedByDeparture, now, r.commands);
        } else {
            st.mode = Mode::Idle;
        }
    }

    std::visit(overloaded{
                   [&](const MotionEvent& m) {
                       st.last_motion_at = m.at;
                       if (st.mode == Mode::Idle) st.mode = Mode::MotionDetected;
                       r.commands.push_back(CaptureFrame{m.at});
                   },
                   [&](const FrameEvent& f) {
                       if (st.mode != Mode::MotionDetected && st.mode != Mode::Detecting) return;
                       const auto dets = detection::detect(backend, f.frame, config.profile.confidence_threshold);
                       const auto hit = evaluate_frame(dets, config.profile, f.frame);
                       if (!hit) {
                           st.mode = Mode::Detecting;
                           return;
                       }
                       Alert a{config.device_id + "-A" + std::to_string(st.next_alert_seq++),
                               config.profile.person_id,
                               *hit,
                               AlertState::Active,
                               f.frame.timestamp,
                               std::nullopt};
                       st.mode = Mode::AlertActive;
                       st.active_alert = a;
                       r.commands.push_back(PublishAlert{std::move(a), std::string(kAlertMessage)});
                   },
                   [&](const AckEvent& a) {
                       if (st.mode == Mode::AlertActive && st.active_alert->alert_id == a.alert_id) {
                           resolve(st, AlertState::Acknowledged, a.at, r.commands);
                           return;
                       }
                       r.error = StepError{StepErrorKind::StaleAck, "no active alert " + a.alert_id};
                   },
                   [&](const ClockEvent&) {},
               },
               event);
    return r;
}

void check_invariants(const EndPlatformState& st) {
    const bool active = st.active_alert.has_value();
    if ((st.mode == Mode::AlertActive) != active) {
        throw InvalidValue("mode AlertActive must coincide with an active alert");
    }
    if (active) {
        const Alert& a = *st.active_alert;
        if (a.state != AlertState::Active || a.resolved_at) throw InvalidValue("held alert is not Active");
        if (a.raised_at > st.now) throw InvalidValue("alert raised in the future");
    }
    if (st.mode != Mode::Idle && !st.last_motion_at) {
        throw InvalidValue("device engaged without any motion");
    }
}

Json alert_to_json(const Alert& a) {
    Json j{{"alert_id", a.alert_id},
           {"person_id", a.person_id},
           {"fruit", fruit_to_json(a.hit.fruit)},
           {"confidence", a.hit.confidence},
           {"frame_id", a.hit.frame.frame_id},
           {"frame_at", a.hit.frame.timestamp},
           {"state", to_string(a.state)},
           {"raised_at", a.raised_at},
           {"resolved_at", nullptr}};
    if (a.resolved_at) j["resolved_at"] = *a.resolved_at;
    return j;
}

Alert alert_from_json(const Json& j) {
    try {
        Alert a{j.at("alert_id").get<std::string>(),
                j.at("person_id").get<std::string>(),
                AllergenHit{fruit_from_json(j.at("fruit")), j.at("confidence").get<double>(),
                            {j.at("frame_id").get<std::string>(), j.value("frame_at", Tick{0})}},
                parse_alert_state(j.at("state").get<std::string>()),
                j.at("raised_at").get<Tick>(),
                std::nullopt};
        if (j.contains("resolved_at") && !j["resolved_at"].is_null()) a.resolved_at = j["resolved_at"].get<Tick>();
        return a;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad alert: ") + e.what());
    }
}

std::string_view command_name(const Command& c) noexcept {
    return std::visit(overloaded{[](const CaptureFrame&) { return std::string_view("CaptureFrame"); },
                                 [](const PublishAlert&) { return std::string_view("PublishAlert"); },
                                 [](const StopAlarm&) { return std::string_view("StopAlarm"); }},
                      c);
}

Json command_to_json(const Command& c) {
    Json j = std::visit(
        overloaded{[](const CaptureFrame& cf) { return Json{{"at", cf.at}}; },
                   [](const PublishAlert& p) { return Json{{"alert", alert_to_json(p.alert)}, {"message", p.message}}; },
                   [](const StopAlarm& s) {
                       return Json{{"alert_id", s.alert_id}, {"resolution", to_string(s.resolution)}, {"at", s.at}};
                   }},
        c);
    j["command"] = command_name(c);
    return j;
}

}  // namespace fruitpal::allergen
