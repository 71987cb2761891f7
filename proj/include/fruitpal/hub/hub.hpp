#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fruitpal/hub/log_store.hpp"
#include "fruitpal/hub/message.hpp"

namespace fruitpal::hub {

struct Receipt {
    std::string msg_id;
    Cursor cursor = 0;
    std::size_t delivered_to = 0;
    bool duplicate = false;  // msg_id was already in the log; nothing delivered
};

/// Builds the daily digest for a device, or nothing to skip that day.
using DigestProvider =
    std::function<std::optional<TextMessagePayload>(const std::string& device_id, const std::string& date, Tick at)>;

struct ScheduleEntry {
    std::string device_id;
    Tick time_of_day = 0;  // offset from midnight
    Tick next_fire = 0;
};

/// Message router with a durable log.
///
/// Every message is appended to the log before it is handed to any
/// subscriber. Subscribers see messages in log order and acknowledge by
/// cursor; a reconnect replays everything after the last acknowledged cursor,
/// so delivery is at-least-once and clients deduplicate by msg_id.
///
/// All members are thread-safe.
class Hub {
public:
    /// Replays the existing log, so a restarted hub keeps its msg_id index,
    /// alert routing and cursors. Tick 0 is midnight of `start_date`.
    explicit Hub(std::unique_ptr<LogStore> log, std::chrono::sys_days start_date = std::chrono::sys_days{});
    ~Hub();

    Hub(const Hub&) = delete;
    Hub& operator=(const Hub&) = delete;

    /// Throws PublishError on a malformed message or a log failure; in both
    /// cases nothing is delivered. An empty msg_id is filled in by the hub.
    Receipt publish(HubMessage m);

    /// Opens (or replaces) the client's stream and returns its generation.
    /// The mailbox is refilled from the log after `resume_after` if given,
    /// otherwise after the client's last acknowledged cursor.
    std::uint64_t subscribe(const std::string& client_id, Filter filter,
                            std::optional<Cursor> resume_after = std::nullopt);
    void disconnect(const std::string& client_id);
    /// Disconnects only if `generation` is still the client's live stream.
    void disconnect(const std::string& client_id, std::uint64_t generation);
    bool connected(const std::string& client_id) const;

    /// Drains the client's mailbox without blocking. Throws NotFound for an
    /// unknown client.
    std::vector<HubMessage> receive(const std::string& client_id);

    /// Blocks until the mailbox is non-empty or the timeout passes. Returns
    /// nullopt once this generation of the stream is closed (replaced,
    /// disconnected, or hub shut down).
    std::optional<std::vector<HubMessage>> wait_receive(const std::string& client_id, std::uint64_t generation,
                                                        std::chrono::milliseconds timeout);

    /// Marks everything up to `upto` as processed by the client.
    void ack(const std::string& client_id, Cursor upto);
    Cursor acked_cursor(const std::string& client_id) const;

    /// Routes a CaregiverAck to the device that raised the alert. Idempotent
    /// per (alert_id, caregiver_id): repeats return the first receipt with
    /// duplicate set. Throws NotFound for an alert id never raised.
    Receipt acknowledge(const std::string& alert_id, const std::string& caregiver_id, Tick now);

    /// Publishes the provider's digest every day at `time_of_day` ("HH:MM").
    /// Rescheduling a device replaces its entry. Throws ConfigError on a bad time.
    ScheduleEntry schedule_digest(const std::string& device_id, std::string_view time_of_day, DigestProvider provider);
    void unschedule_digest(const std::string& device_id);

    /// Moves the hub clock forward and fires due digests in time order
    /// (ties by device id).
    std::vector<Receipt> advance_to(Tick now);
    Tick now() const;
    std::optional<Tick> next_scheduled() const;

    /// Stateless poll: logged messages with cursor > after that match.
    std::vector<HubMessage> read_after(Cursor after, const Filter& filter, std::size_t limit = SIZE_MAX) const;

    std::size_t size() const;
    Cursor last_cursor() const;
    std::optional<std::string> alert_device(const std::string& alert_id) const;

    /// Wakes all blocked receivers; later waits return nullopt at once.
    void shutdown();

private:
    struct Client {
        Filter filter;
        Cursor acked = 0;
        std::deque<HubMessage> mailbox;
        bool connected = false;
        std::uint64_t generation = 0;
    };

    Receipt publish_locked(HubMessage m);
    void index_locked(const HubMessage& m);
    Client& client_locked(const std::string& client_id);
    const Client& client_locked(const std::string& client_id) const;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::unique_ptr<LogStore> log_;
    std::chrono::sys_days start_date_;

    std::vector<HubMessage> messages_;  // log mirror, cursor = index + 1
    std::unordered_map<std::string, Cursor> by_id_;
    std::unordered_map<std::string, std::string> alert_device_;
    std::map<std::pair<std::string, std::string>, std::string> acks_;  // (alert, caregiver) -> msg_id
    std::map<std::string, Client> clients_;
    std::map<std::string, std::pair<ScheduleEntry, DigestProvider>> schedule_;
    Tick now_ = 0;
    std::uint64_t next_generation_ = 1;
    bool shut_down_ = false;
};

}  // namespace fruitpal::hub
