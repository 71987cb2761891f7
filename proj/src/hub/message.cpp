#include "fruitpal/hub/message.hpp"

#include "fruitpal/core/errors.hpp"

namespace fruitpal::hub {

namespace {

constexpr MessageKind kKinds[] = {MessageKind::AlertRaised, MessageKind::AlertCleared, MessageKind::TextMessage,
                                  MessageKind::DeviceStatus, MessageKind::CaregiverAck};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(MessageKind k) noexcept {
    switch (k) {
        case MessageKind::AlertRaised: return "AlertRaised";
        case MessageKind::AlertCleared: return "AlertCleared";
        case MessageKind::TextMessage: return "TextMessage";
        case MessageKind::DeviceStatus: return "DeviceStatus";
        case MessageKind::CaregiverAck: return "CaregiverAck";
    }
    return "?";
}

std::optional<MessageKind> parse_kind(std::string_view s) noexcept {
    for (MessageKind k : kKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

MessageKind payload_kind(const Payload& p) noexcept {
    // Variant alternatives are declared in MessageKind order.
    return static_cast<MessageKind>(p.index());
}

void validate(const HubMessage& m) {
    if (m.device_id.empty()) throw PublishError("message without device_id");
    if (payload_kind(m.payload) != m.kind) {
        throw PublishError("payload does not match kind " + std::string(to_string(m.kind)));
    }
}

Json payload_to_json(const Payload& p) {
    return std::visit(
        overloaded{
            [](const AlertRaisedPayload& a) {
                return Json{{"alert_id", a.alert_id}, {"person_id", a.person_id},   {"fruit", fruit_to_json(a.fruit)},
                            {"confidence", a.confidence}, {"frame_id", a.frame_id}, {"message", a.message}};
            },
            [](const AlertClearedPayload& a) { return Json{{"alert_id", a.alert_id}, {"resolution", a.resolution}}; },
            [](const TextMessagePayload& t) {
                return Json{{"person_id", t.person_id},
                            {"date", t.date},
                            {"body", t.body},
                            {"requires_connectivity", t.requires_connectivity}};
            },
            [](const DeviceStatusPayload& d) { return Json{{"status", d.status}, {"detail", d.detail}}; },
            [](const CaregiverAckPayload& c) { return Json{{"alert_id", c.alert_id}, {"caregiver_id", c.caregiver_id}}; },
        },
        p);
}

Payload payload_from_json(MessageKind kind, const Json& j) {
    try {
        if (!j.is_object()) throw ParseError("payload must be an object");
        switch (kind) {
            case MessageKind::AlertRaised:
                return AlertRaisedPayload{j.at("alert_id").get<std::string>(), j.at("person_id").get<std::string>(),
                                          fruit_from_json(j.at("fruit")),     j.at("confidence").get<double>(),
                                          j.value("frame_id", std::string()), j.at("message").get<std::string>()};
            case MessageKind::AlertCleared:
                return AlertClearedPayload{j.at("alert_id").get<std::string>(), j.at("resolution").get<std::string>()};
            case MessageKind::TextMessage:
                return TextMessagePayload{j.at("person_id").get<std::string>(), j.at("date").get<std::string>(),
                                          j.at("body").get<std::string>(), j.value("requires_connectivity", false)};
            case MessageKind::DeviceStatus:
                return DeviceStatusPayload{j.at("status").get<std::string>(), j.value("detail", std::string())};
            case MessageKind::CaregiverAck:
                return CaregiverAckPayload{j.at("alert_id").get<std::string>(),
                                           j.at("caregiver_id").get<std::string>()};
        }
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad ") + std::string(to_string(kind)) + " payload: " + e.what());
    }
    throw ParseError("unknown kind");
}

Json message_to_json(const HubMessage& m) {
    return Json{{"msg_id", m.msg_id},
                {"kind", to_string(m.kind)},
                {"device_id", m.device_id},
                {"published_at", m.published_at},
                {"cursor", m.cursor},
                {"payload", payload_to_json(m.payload)}};
}

HubMessage message_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw ParseError("message must be a JSON object");
        const auto kind_text = j.at("kind").get<std::string>();
        const auto kind = parse_kind(kind_text);
        if (!kind) throw ParseError("unknown message kind: " + kind_text);
        return HubMessage{j.value("msg_id", std::string()),
                          *kind,
                          j.at("device_id").get<std::string>(),
                          payload_from_json(*kind, j.at("payload")),
                          j.value("published_at", Tick{0}),
                          j.value("cursor", Cursor{0})};
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad message: ") + e.what());
    }
}

bool Filter::matches(const HubMessage& m) const {
    if (!kinds.empty() && kinds.count(m.kind) == 0) return false;
    return !device_id || *device_id == m.device_id;
}

Json filter_to_json(const Filter& f) {
    Json kinds = Json::array();
    for (MessageKind k : f.kinds) kinds.push_back(to_string(k));
    Json j{{"kinds", kinds}};
    if (f.device_id) j["device_id"] = *f.device_id;
    return j;
}

Filter filter_from_json(const Json& j) {
    Filter f;
    try {
        for (const auto& k : j.value("kinds", Json::array())) {
            const auto kind = parse_kind(k.get<std::string>());
            if (!kind) throw ParseError("unknown message kind in filter: " + k.get<std::string>());
            f.kinds.insert(*kind);
        }
        if (j.contains("device_id")) f.device_id = j["device_id"].get<std::string>();
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad filter: ") + e.what());
    }
    return f;
}

}  // namespace fruitpal::hub
