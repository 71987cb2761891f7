#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fruitpal/allergen/pir.hpp"
#include "fruitpal/core/json.hpp"
#include "fruitpal/core/types.hpp"
#include "fruitpal/detection/detector.hpp"

namespace fruitpal::allergen {

/// Voice-message text carried by every alert. The dash is U+2013.
inline constexpr std::string_view kAlertMessage = "Allergen detected – danger present";

struct AllergenHit {
    FruitClass fruit;
    double confidence;
    detection::FrameRef frame;

    friend bool operator==(const AllergenHit& a, const AllergenHit& b) {
        return a.fruit == b.fruit && a.confidence == b.confidence && a.frame.frame_id == b.frame.frame_id &&
               a.frame.timestamp == b.frame.timestamp;
    }
};

enum class AlertState { Active, Acknowledged, ClearedByDeparture };
std::string_view to_string(AlertState s) noexcept;

struct Alert {
    std::string alert_id;
    std::string person_id;
    AllergenHit hit;
    AlertState state = AlertState::Active;
    Tick raised_at = 0;
    std::optional<Tick> resolved_at;

    friend bool operator==(const Alert&, const Alert&) = default;
};

enum class Mode { Idle, MotionDetected, Detecting, AlertActive };
std::string_view to_string(Mode m) noexcept;

struct EndPlatformState {
    Mode mode = Mode::Idle;
    std::optional<Alert> active_alert;
    std::optional<Tick> last_motion_at;
    Tick now = 0;
    unsigned next_alert_seq = 1;

    friend bool operator==(const EndPlatformState&, const EndPlatformState&) = default;
};

/// Static configuration of one end device.
struct EndPlatformConfig {
    std::string device_id;
    AllergyProfile profile;
    PirConfig pir;

    /// Throws ConfigError on an empty device id or invalid PIR/profile.
    void validate() const;
};

// Inputs to the state machine.
struct MotionEvent {
    Tick at;
};
struct FrameEvent {
    detection::FrameRef frame;
};
struct AckEvent {
    Tick at;
    std::string alert_id;
};
/// Clock advance with no sensor input; lets departure timeouts fire.
struct ClockEvent {
    Tick at;
};
using EndEvent = std::variant<MotionEvent, FrameEvent, AckEvent, ClockEvent>;

Tick event_time(const EndEvent& e) noexcept;

// Outputs.
struct CaptureFrame {
    Tick at;
};
struct PublishAlert {
    Alert alert;
    std::string message;  // always kAlertMessage
};
struct StopAlarm {
    std::string alert_id;
    AlertState resolution;  // Acknowledged or ClearedByDeparture
    Tick at;
};
using Command = std::variant<CaptureFrame, PublishAlert, StopAlarm>;

enum class StepErrorKind { StaleAck };

struct StepError {
    StepErrorKind kind;
    std::string detail;
};

struct StepResult {
    EndPlatformState state;
    std::vector<Command> commands;
    std::optional<StepError> error;  // set when the event was rejected; it had no effect beyond the clock
};

/// Highest-confidence detection of an allergen at or above the profile
/// threshold. Ties keep the earlier detection.
std::optional<AllergenHit> evaluate_frame(const std::vector<Detection>& detections, const AllergyProfile& profile,
                                          const detection::FrameRef& frame);

/// One transition of the end platform.
///
///   any mode    + Motion  -> refresh last_motion_at, CaptureFrame
///                            (Idle moves to MotionDetected)
///   Idle        + Frame   -> ignored (camera is off)
///   MotionDetected/Detecting + Frame
///                         -> allergen hit: AlertActive, PublishAlert
///                            otherwise: Detecting
///   AlertActive + Frame   -> no new alert; the episode continues
///   AlertActive + Ack(id of the active alert)
///                         -> Idle, alert Acknowledged, StopAlarm
///   any mode    + Ack(other id) -> StaleAck error, ack ignored
///   any non-Idle mode, once now - last_motion_at >= pir.no_motion_timeout
///                         -> Idle; an active alert becomes ClearedByDeparture
///                            with a StopAlarm
///
/// The timeout check runs before the event itself is applied, at the event's
/// tick. Throws InvalidValue when the event is older than state.now.
StepResult step(const EndPlatformState& state, const EndEvent& event, const EndPlatformConfig& config,
                const detection::DetectorBackend& backend);

/// Throws InvalidValue when a structural invariant of the state is broken.
void check_invariants(const EndPlatformState& state);

Json alert_to_json(const Alert& a);
Alert alert_from_json(const Json& j);
Json command_to_json(const Command& c);
std::string_view command_name(const Command& c) noexcept;

}  // namespace fruitpal::allergen
