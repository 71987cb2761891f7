#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "fruitpal/core/json.hpp"
#include "fruitpal/core/types.hpp"

namespace fruitpal::hub {

enum class MessageKind { AlertRaised, AlertCleared, TextMessage, DeviceStatus, CaregiverAck };

std::string_view to_string(MessageKind k) noexcept;
std::optional<MessageKind> parse_kind(std::string_view s) noexcept;

struct AlertRaisedPayload {
    std::string alert_id;
    std::string person_id;
    FruitClass fruit;
    double confidence;
    std::string frame_id;
    std::string message;

    friend bool operator==(const AlertRaisedPayload&, const AlertRaisedPayload&) = default;
};

struct AlertClearedPayload {
    std::string alert_id;
    std::string resolution;  // "Acknowledged" or "ClearedByDeparture"

    friend bool operator==(const AlertClearedPayload&, const AlertClearedPayload&) = default;
};

/// Daily digest or other text. GSM-style delivery does not need the
/// subscriber to be online, hence the connectivity flag.
struct TextMessagePayload {
    std::string person_id;
    std::string date;
    std::string body;
    bool requires_connectivity = false;

    friend bool operator==(const TextMessagePayload&, const TextMessagePayload&) = default;
};

struct DeviceStatusPayload {
    std::string status;
    std::string detail;

    friend bool operator==(const DeviceStatusPayload&, const DeviceStatusPayload&) = default;
};

struct CaregiverAckPayload {
    std::string alert_id;
    std::string caregiver_id;

    friend bool operator==(const CaregiverAckPayload&, const CaregiverAckPayload&) = default;
};

using Payload = std::variant<AlertRaisedPayload, AlertClearedPayload, TextMessagePayload, DeviceStatusPayload,
                             CaregiverAckPayload>;

/// The payload alternative a kind requires.
MessageKind payload_kind(const Payload& p) noexcept;

/// Log position assigned by the hub; 0 means "not yet published".
using Cursor = std::uint64_t;

struct HubMessage {
    std::string msg_id;
    MessageKind kind;
    std::string device_id;  // originating device; for CaregiverAck the device being addressed
    Payload payload;
    Tick published_at = 0;
    Cursor cursor = 0;

    friend bool operator==(const HubMessage&, const HubMessage&) = default;
};

/// Throws PublishError on an empty device id or a kind/payload mismatch.
void validate(const HubMessage& m);

// Wire form, one JSON object:
//   {"msg_id": "...", "kind": "AlertRaised", "device_id": "...",
//    "published_at": 42, "cursor": 7, "payload": {...}}
// Payload fields per kind:
//   AlertRaised   alert_id, person_id, fruit, confidence, frame_id, message
//   AlertCleared  alert_id, resolution
//   TextMessage   person_id, date, body, requires_connectivity
//   DeviceStatus  status, detail
//   CaregiverAck  alert_id, caregiver_id
Json message_to_json(const HubMessage& m);
/// Throws ParseError on malformed input. "cursor" and "msg_id" are optional.
HubMessage message_from_json(const Json& j);

Json payload_to_json(const Payload& p);
Payload payload_from_json(MessageKind kind, const Json& j);

/// What a subscriber wants to see. An empty kind set matches every kind.
struct Filter {
    std::set<MessageKind> kinds;
    std::optional<std::string> device_id;

    bool matches(const HubMessage& m) const;
};

Json filter_to_json(const Filter& f);
Filter filter_from_json(const Json& j);

}  // namespace fruitpal::hub
