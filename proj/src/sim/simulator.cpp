#include "fruitpal/sim/simulator.hpp"

#include <cstdlib>
#include <fstream>

#include "fruitpal/core/calendar.hpp"
#include "fruitpal/core/errors.hpp"

namespace fruitpal::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string client_for(const std::string& device_id) { return "device:" + device_id; }

bool raw_frame_has_allergen(const detection::DetectorBackend& backend, const detection::FrameRef& frame,
                            const AllergyProfile& profile) {
    for (const Detection& d : backend.raw_detections(frame)) {
        if (profile.is_allergen(d.fruit) && d.confidence >= profile.confidence_threshold) return true;
    }
    return false;
}

}  // namespace

void EventLog::add(Tick tick, std::string_view type, const std::string& device, Json fields) {
    fields["seq"] = records_.size();
    fields["tick"] = tick;
    fields["type"] = type;
    if (!device.empty()) fields["device"] = device;
    records_.push_back(std::move(fields));
}

std::size_t EventLog::count(std::string_view type) const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r["type"] == type ? 1 : 0;
    return n;
}

std::string EventLog::dump() const {
    std::string out;
    for (const auto& r : records_) out += r.dump() + "\n";
    return out;
}

Simulator::Simulator(const Scenario& scenario, std::unique_ptr<hub::LogStore> hub_log)
    : scenario_(scenario), hub_(std::make_unique<hub::Hub>(std::move(hub_log), scenario.start_date)) {
    for (const DeviceSpec& spec : scenario_.devices) {
        if (spec.role == DeviceRole::Allergen) {
            AllergenDevice d{&spec, {spec.device_id, spec.profile, spec.pir}, {}, {}};
            d.config.validate();
            hub_->subscribe(client_for(spec.device_id), {{hub::MessageKind::CaregiverAck}, spec.device_id});
            allergen_.emplace(spec.device_id, std::move(d));
        } else {
            NutritionDevice d{&spec, std::nullopt, parse_time_of_day(spec.morning_reset), 0};
            d.next_reset = next_occurrence(0, d.reset_offset);
            nutrition_.emplace(spec.device_id, std::move(d));
            hub_->schedule_digest(spec.device_id, spec.digest_time,
                                  [this](const std::string& id, const std::string& date, Tick at) {
                                      return compose(id, date, at);
                                  });
        }
    }
}

std::size_t Simulator::open_alerts() const {
    std::size_t n = 0;
    for (const auto& [id, d] : allergen_) n += d.state.active_alert ? 1 : 0;
    return n;
}

void Simulator::violation(const std::string& device, const std::string& what) {
    log_.add(clock_, "InvariantViolation", device, {{"detail", what}});
    throw InvariantViolation(what);
}

void Simulator::log_hub_message(const hub::HubMessage& m, std::size_t delivered_to) {
    log_.add(m.published_at, to_string(m.kind), m.device_id,
             {{"msg_id", m.msg_id},
              {"cursor", m.cursor},
              {"payload", hub::payload_to_json(m.payload)},
              {"delivered_to", delivered_to}});
}

hub::Receipt Simulator::publish(hub::HubMessage m) {
    const auto r = hub_->publish(m);
    if (!r.duplicate) {
        m.cursor = r.cursor;
        log_hub_message(m, r.delivered_to);
    }
    return r;
}

void Simulator::run() {
    log_.add(0, "ScenarioStart", "",
             {{"name", scenario_.name},
              {"seed", scenario_.seed},
              {"start_date", format_date(scenario_.start_date)},
              {"devices", scenario_.devices.size()},
              {"events", scenario_.timeline.size()}});
    for (const TimelineEvent& e : scenario_.timeline) {
        advance_internal(e.at);
        clock_ = e.at;
        hub_->advance_to(clock_);
        handle(e);
        deliver_to_devices();
        if (e.type == EventType::AdvanceHours) {
            const Tick target = e.at + e.hours * kTicksPerHour;
            advance_internal(target);
            clock_ = target;
            hub_->advance_to(clock_);
        }
    }
    log_.add(clock_, "ScenarioEnd", "",
             {{"alerts_raised", alerts_raised_}, {"open_alerts", open_alerts()}, {"digests", digests_}});
}

void Simulator::advance_internal(Tick limit) {
    for (;;) {
        std::optional<Tick> next;
        auto consider = [&](Tick t) {
            if (t <= limit && (!next || t < *next)) next = t;
        };
        for (const auto& [id, d] : allergen_) {
            if (d.state.mode != allergen::Mode::Idle && d.state.last_motion_at) {
                consider(*d.state.last_motion_at + d.config.pir.no_motion_timeout);
            }
        }
        for (const auto& [id, d] : nutrition_) consider(d.next_reset);
        if (auto t = hub_->next_scheduled()) consider(*t);
        if (!next) return;

        const Tick t = std::max(*next, clock_);
        clock_ = t;
        for (auto& [id, d] : allergen_) {
            if (d.state.mode != allergen::Mode::Idle && d.state.last_motion_at &&
                *d.state.last_motion_at + d.config.pir.no_motion_timeout <= t) {
                step_allergen(d, allergen::ClockEvent{t});
            }
        }
        for (auto& [id, d] : nutrition_) {
            if (d.next_reset <= t) morning_reset(d, t);
        }
        for (const auto& r : hub_->advance_to(t)) {
            if (r.duplicate) continue;
            const auto msgs = hub_->read_after(r.cursor - 1, {}, 1);
            log_hub_message(msgs.at(0), r.delivered_to);
        }
        deliver_to_devices();
    }
}

void Simulator::handle(const TimelineEvent& e) {
    switch (e.type) {
        case EventType::Motion: {
            log_.add(e.at, "Motion", e.device_id);
            step_allergen(allergen_.at(e.device_id), allergen::MotionEvent{e.at});
            break;
        }
        case EventType::Frame: {
            log_.add(e.at, "Frame", e.device_id, {{"frame_ids", e.frame_ids}});
            if (auto it = allergen_.find(e.device_id); it != allergen_.end()) {
                step_allergen(it->second, allergen::FrameEvent{{e.frame_ids.front(), e.at}});
            } else {
                handle_nutrition_frame(nutrition_.at(e.device_id), e);
            }
            break;
        }
        case EventType::CaregiverAck: {
            log_.add(e.at, "AckRequest", "", {{"alert_id", e.alert_id}, {"caregiver_id", e.caregiver_id}});
            try {
                const auto r = hub_->acknowledge(e.alert_id, e.caregiver_id, e.at);
                if (r.duplicate) {
                    log_.add(e.at, "AckDuplicate", "", {{"alert_id", e.alert_id}, {"msg_id", r.msg_id}});
                } else {
                    log_hub_message(hub_->read_after(r.cursor - 1, {}, 1).at(0), r.delivered_to);
                }
            } catch (const NotFound& ex) {
                log_.add(e.at, "AckRejected", "", {{"alert_id", e.alert_id}, {"detail", ex.what()}});
            }
            break;
        }
        case EventType::AdvanceHours:
            log_.add(e.at, "AdvanceHours", "", {{"hours", e.hours}});
            break;
        case EventType::Restart: {
            log_.add(e.at, "Restart", e.device_id);
            nutrition_.at(e.device_id).tracker.reset();
            break;
        }
    }
}

void Simulator::step_allergen(AllergenDevice& d, const allergen::EndEvent& event) {
    const auto before = d.state.mode;
    allergen::StepResult r;
    try {
        r = allergen::step(d.state, event, d.config, scenario_.fixtures);
    } catch (const InvalidValue& ex) {
        violation(d.config.device_id, ex.what());
    }
    try {
        allergen::check_invariants(r.state);
    } catch (const InvalidValue& ex) {
        violation(d.config.device_id, ex.what());
    }
    const std::string& dev = d.config.device_id;
    if (r.error) {
        log_.add(clock_, "StaleAck", dev, {{"detail", r.error->detail}});
    }
    for (const auto& c : r.commands) {
        log_.add(clock_, allergen::command_name(c), dev, allergen::command_to_json(c));
        std::visit(overloaded{
                       [](const allergen::CaptureFrame&) {},
                       [&](const allergen::PublishAlert& p) {
                           const auto* fe = std::get_if<allergen::FrameEvent>(&event);
                           if (!fe || !raw_frame_has_allergen(scenario_.fixtures, fe->frame, d.config.profile)) {
                               violation(dev, "alert " + p.alert.alert_id + " raised without an allergen hit");
                           }
                           ++alerts_raised_;
                           publish({p.alert.alert_id + ":raised", hub::MessageKind::AlertRaised, dev,
                                    hub::AlertRaisedPayload{p.alert.alert_id, p.alert.person_id, p.alert.hit.fruit,
                                                            p.alert.hit.confidence, p.alert.hit.frame.frame_id,
                                                            p.message},
                                    clock_, 0});
                       },
                       [&](const allergen::StopAlarm& s) {
                           publish({s.alert_id + ":cleared", hub::MessageKind::AlertCleared, dev,
                                    hub::AlertClearedPayload{s.alert_id, std::string(to_string(s.resolution))}, clock_,
                                    0});
                       },
                   },
                   c);
    }
    if (r.state.mode != before) {
        log_.add(clock_, "State", dev, {{"from", to_string(before)}, {"to", to_string(r.state.mode)}});
    }
    d.state = std::move(r.state);
}

void Simulator::deliver_to_devices() {
    for (auto& [id, d] : allergen_) {
        const std::string client = client_for(id);
        for (const hub::HubMessage& m : hub_->receive(client)) {
            const auto logged = hub_->read_after(m.cursor - 1, {}, 1);
            if (logged.empty() || logged[0].msg_id != m.msg_id) violation(id, "delivered message " + m.msg_id + " is not in the log");
            hub_->ack(client, m.cursor);
            if (!d.seen_msgs.insert(m.msg_id).second) continue;
            const auto& ack = std::get<hub::CaregiverAckPayload>(m.payload);
            log_.add(clock_, "Delivered", id, {{"msg_id", m.msg_id}, {"alert_id", ack.alert_id}});
            step_allergen(d, allergen::AckEvent{clock_, ack.alert_id});
        }
    }
}

void Simulator::handle_nutrition_frame(NutritionDevice& d, const TimelineEvent& e) {
    const DeviceSpec& spec = *d.spec;
    std::vector<FruitInventory> captures;
    for (const auto& id : e.frame_ids) {
        captures.push_back(detection::to_inventory(detection::detect(scenario_.fixtures, {id, e.at}, spec.inventory_conf)));
    }
    const FruitInventory observed = captures.size() == 3 ? median_inventory(captures[0], captures[1], captures[2])
                                                         : captures.front();
    if (!d.tracker) {
        d.tracker = nutrition::start_day(observed, e.at);
        log_.add(e.at, "Baseline", spec.device_id, {{"inventory", inventory_to_json(observed)}});
        return;
    }
    nutrition::TickResult r;
    try {
        r = nutrition::hourly_tick(*d.tracker, observed);
    } catch (const DayComplete&) {
        log_.add(e.at, "DayComplete", spec.device_id, {{"observed", inventory_to_json(observed)}});
        return;
    }
    for (FruitClass c : kAllFruitClasses) {
        if (r.state.eaten.count(c) < d.tracker->eaten.count(c)) violation(spec.device_id, "eaten ledger decreased");
    }
    if (r.state.hours_elapsed > nutrition::kHoursPerDay) violation(spec.device_id, "more than 24 hourly ticks");
    log_.add(e.at, "HourlyTick", spec.device_id,
             {{"observed", inventory_to_json(observed)},
              {"delta", inventory_to_json(r.delta)},
              {"eaten", inventory_to_json(r.state.eaten)},
              {"hours_elapsed", r.state.hours_elapsed}});
    d.tracker = r.state;
}

void Simulator::morning_reset(NutritionDevice& d, Tick at) {
    d.next_reset += kTicksPerDay;
    if (!d.tracker) return;
    d.tracker = nutrition::daily_reset(*d.tracker, d.tracker->baseline, at);
    log_.add(at, "MorningReset", d.spec->device_id, {{"baseline", inventory_to_json(d.tracker->baseline)}});
}

std::optional<hub::TextMessagePayload> Simulator::compose(const std::string& device_id, const std::string& date,
                                                          Tick at) {
    const NutritionDevice& d = nutrition_.at(device_id);
    const auto digest = nutrition::compose_digest(d.tracker.value_or(nutrition::TrackerState{}), date);
    ++digests_;
    log_.add(at, "DigestMessage", device_id, {{"digest", nutrition::digest_to_json(digest)}});
    return hub::TextMessagePayload{d.spec->person_id, date, digest.text, false};
}

Json RunSummary::to_json() const {
    return Json{{"exit_code", exit_code},   {"message", message},     {"records", records},
                {"alerts_raised", alerts_raised}, {"open_alerts", open_alerts}, {"digests", digests}};
}

RunSummary run_scenario(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& out_dir) {
    namespace fs = std::filesystem;
    RunSummary summary;
    if (out_dir) {
        summary.out_dir = *out_dir;
    } else if (const char* env = std::getenv("FRUITPAL_LOG_DIR"); env && *env) {
        summary.out_dir = env;
    } else {
        summary.out_dir = dir / "out";
    }

    Scenario scenario;
    try {
        scenario = load_scenario(dir);
    } catch (const Error& e) {
        summary.exit_code = 2;
        summary.message = e.what();
        return summary;
    }

    std::error_code ec;
    fs::create_directories(summary.out_dir, ec);
    const fs::path hub_path = summary.out_dir / "hub.jsonl";
    fs::remove(hub_path, ec);
    std::unique_ptr<Simulator> sim;
    try {
        sim = std::make_unique<Simulator>(scenario, std::make_unique<hub::FileLogStore>(hub_path));
    } catch (const Error& e) {
        summary.exit_code = 2;
        summary.message = e.what();
        return summary;
    }
    try {
        sim->run();
        summary.message = "ok";
    } catch (const InvariantViolation& e) {
        summary.exit_code = 1;
        summary.message = std::string("invariant violated: ") + e.what();
    } catch (const Error& e) {
        summary.exit_code = 1;
        summary.message = std::string("run failed: ") + e.what();
    }
    summary.records = sim->log().records().size();
    summary.alerts_raised = sim->alerts_raised();
    summary.open_alerts = sim->open_alerts();
    summary.digests = sim->digests();

    std::ofstream(summary.out_dir / "events.jsonl", std::ios::binary | std::ios::trunc) << sim->log().dump();
    std::ofstream(summary.out_dir / "summary.json", std::ios::trunc) << summary.to_json().dump(2) << "\n";
    return summary;
}

}  // namespace fruitpal::sim
