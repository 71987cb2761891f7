#include "fruitpal/hub/hub.hpp"

#include "fruitpal/core/calendar.hpp"
#include "fruitpal/core/errors.hpp"

namespace fruitpal::hub {

Hub::Hub(std::unique_ptr<LogStore> log, std::chrono::sys_days start_date)
    : log_(std::move(log)), start_date_(start_date) {
    for (HubMessage& m : log_->load()) {
        if (by_id_.count(m.msg_id)) continue;
        m.cursor = messages_.size() + 1;
        index_locked(m);
        messages_.push_back(std::move(m));
    }
}

Hub::~Hub() { shutdown(); }

void Hub::index_locked(const HubMessage& m) {
    by_id_.emplace(m.msg_id, m.cursor);
    if (const auto* a = std::get_if<AlertRaisedPayload>(&m.payload)) {
        alert_device_.emplace(a->alert_id, m.device_id);
    } else if (const auto* c = std::get_if<CaregiverAckPayload>(&m.payload)) {
        acks_.emplace(std::make_pair(c->alert_id, c->caregiver_id), m.msg_id);
    }
}

Receipt Hub::publish(HubMessage m) {
    std::lock_guard lock(mu_);
    return publish_locked(std::move(m));
}

Receipt Hub::publish_locked(HubMessage m) {
    validate(m);
    if (!m.msg_id.empty()) {
        if (auto it = by_id_.find(m.msg_id); it != by_id_.end()) {
            return Receipt{m.msg_id, it->second, 0, true};
        }
    }
    m.cursor = messages_.size() + 1;
    if (m.msg_id.empty()) {
        m.msg_id = "hub-" + std::to_string(m.cursor);
        while (by_id_.count(m.msg_id)) m.msg_id += "x";
    }
    log_->append(m);  // throws PublishError; nothing below runs

    index_locked(m);
    messages_.push_back(m);
    std::size_t delivered = 0;
    for (auto& [id, c] : clients_) {
        if (c.connected && c.filter.matches(m)) {
            c.mailbox.push_back(m);
            ++delivered;
        }
    }
    cv_.notify_all();
    return Receipt{m.msg_id, m.cursor, delivered, false};
}

Hub::Client& Hub::client_locked(const std::string& client_id) {
    auto it = clients_.find(client_id);
    if (it == clients_.end()) throw NotFound("unknown client " + client_id);
    return it->second;
}

const Hub::Client& Hub::client_locked(const std::string& client_id) const {
    auto it = clients_.find(client_id);
    if (it == clients_.end()) throw NotFound("unknown client " + client_id);
    return it->second;
}

std::uint64_t Hub::subscribe(const std::string& client_id, Filter filter, std::optional<Cursor> resume_after) {
    if (client_id.empty()) throw InvalidValue("client_id must not be empty");
    std::lock_guard lock(mu_);
    Client& c = clients_[client_id];
    c.filter = std::move(filter);
    if (resume_after) c.acked = std::min<Cursor>(*resume_after, messages_.size());
    c.mailbox.clear();
    for (std::size_t i = c.acked; i < messages_.size(); ++i) {
        if (c.filter.matches(messages_[i])) c.mailbox.push_back(messages_[i]);
    }
    c.connected = true;
    c.generation = next_generation_++;
    cv_.notify_all();
    return c.generation;
}

void Hub::disconnect(const std::string& client_id) {
    std::lock_guard lock(mu_);
    auto it = clients_.find(client_id);
    if (it == clients_.end()) return;
    it->second.connected = false;
    it->second.mailbox.clear();
    cv_.notify_all();
}

void Hub::disconnect(const std::string& client_id, std::uint64_t generation) {
    std::lock_guard lock(mu_);
    auto it = clients_.find(client_id);
    if (it == clients_.end() || it->second.generation != generation) return;
    it->second.connected = false;
    it->second.mailbox.clear();
    cv_.notify_all();
}

bool Hub::connected(const std::string& client_id) const {
    std::lock_guard lock(mu_);
    auto it = clients_.find(client_id);
    return it != clients_.end() && it->second.connected;
}

std::vector<HubMessage> Hub::receive(const std::string& client_id) {
    std::lock_guard lock(mu_);
    Client& c = client_locked(client_id);
    std::vector<HubMessage> out(c.mailbox.begin(), c.mailbox.end());
    c.mailbox.clear();
    return out;
}

std::optional<std::vector<HubMessage>> Hub::wait_receive(const std::string& client_id, std::uint64_t generation,
                                                         std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    auto live = [&] {
        auto it = clients_.find(client_id);
        return !shut_down_ && it != clients_.end() && it->second.connected && it->second.generation == generation;
    };
    cv_.wait_for(lock, timeout, [&] { return !live() || !clients_.at(client_id).mailbox.empty(); });
    if (!live()) return std::nullopt;
    Client& c = clients_.at(client_id);
    std::vector<HubMessage> out(c.mailbox.begin(), c.mailbox.end());
    c.mailbox.clear();
    return out;
}

void Hub::ack(const std::string& client_id, Cursor upto) {
    std::lock_guard lock(mu_);
    Client& c = client_locked(client_id);
    c.acked = std::max(c.acked, std::min<Cursor>(upto, messages_.size()));
}

Cursor Hub::acked_cursor(const std::string& client_id) const {
    std::lock_guard lock(mu_);
    return client_locked(client_id).acked;
}

Receipt Hub::acknowledge(const std::string& alert_id, const std::string& caregiver_id, Tick now) {
    std::lock_guard lock(mu_);
    auto dev = alert_device_.find(alert_id);
    if (dev == alert_device_.end()) throw NotFound("unknown alert " + alert_id);
    if (auto it = acks_.find({alert_id, caregiver_id}); it != acks_.end()) {
        return Receipt{it->second, by_id_.at(it->second), 0, true};
    }
    HubMessage m{"ack:" + alert_id + ":" + caregiver_id, MessageKind::CaregiverAck, dev->second,
                 CaregiverAckPayload{alert_id, caregiver_id}, now, 0};
    return publish_locked(std::move(m));
}

ScheduleEntry Hub::schedule_digest(const std::string& device_id, std::string_view time_of_day,
                                   DigestProvider provider) {
    const Tick offset = parse_time_of_day(time_of_day);
    if (device_id.empty()) throw ConfigError("digest schedule needs a device id");
    if (!provider) throw ConfigError("digest schedule needs a provider");
    std::lock_guard lock(mu_);
    ScheduleEntry e{device_id, offset, next_occurrence(now_, offset)};
    schedule_[device_id] = {e, std::move(provider)};
    return e;
}

void Hub::unschedule_digest(const std::string& device_id) {
    std::lock_guard lock(mu_);
    schedule_.erase(device_id);
}

std::vector<Receipt> Hub::advance_to(Tick now) {
    std::vector<Receipt> out;
    for (;;) {
        std::unique_lock lock(mu_);
        const std::pair<const std::string, std::pair<ScheduleEntry, DigestProvider>>* due = nullptr;
        for (const auto& kv : schedule_) {
            if (kv.second.first.next_fire <= now && (!due || kv.second.first.next_fire < due->second.first.next_fire)) {
                due = &kv;
            }
        }
        if (!due) {
            now_ = std::max(now_, now);
            return out;
        }
        const ScheduleEntry entry = due->second.first;
        const DigestProvider provider = due->second.second;
        schedule_[entry.device_id].first.next_fire += kTicksPerDay;
        now_ = std::max(now_, entry.next_fire);
        const std::string date = date_of_tick(start_date_, entry.next_fire);
        lock.unlock();

        // The provider may be slow or touch other locks; keep the hub free.
        auto text = provider(entry.device_id, date, entry.next_fire);
        if (!text) continue;
        lock.lock();
        out.push_back(publish_locked(HubMessage{"digest:" + entry.device_id + ":" + date, MessageKind::TextMessage,
                                                entry.device_id, std::move(*text), entry.next_fire, 0}));
    }
}

Tick Hub::now() const {
    std::lock_guard lock(mu_);
    return now_;
}

std::optional<Tick> Hub::next_scheduled() const {
    std::lock_guard lock(mu_);
    std::optional<Tick> best;
    for (const auto& [id, e] : schedule_) {
        if (!best || e.first.next_fire < *best) best = e.first.next_fire;
    }
    return best;
}

std::vector<HubMessage> Hub::read_after(Cursor after, const Filter& filter, std::size_t limit) const {
    std::lock_guard lock(mu_);
    std::vector<HubMessage> out;
    for (std::size_t i = after; i < messages_.size() && out.size() < limit; ++i) {
        if (filter.matches(messages_[i])) out.push_back(messages_[i]);
    }
    return out;
}

std::size_t Hub::size() const {
    std::lock_guard lock(mu_);
    return messages_.size();
}

Cursor Hub::last_cursor() const {
    std::lock_guard lock(mu_);
    return messages_.size();
}

std::optional<std::string> Hub::alert_device(const std::string& alert_id) const {
    std::lock_guard lock(mu_);
    auto it = alert_device_.find(alert_id);
    if (it == alert_device_.end()) return std::nullopt;
    return it->second;
}

void Hub::shutdown() {
    std::lock_guard lock(mu_);
    shut_down_ = true;
    cv_.notify_all();
}

}  // namespace fruitpal::hub
