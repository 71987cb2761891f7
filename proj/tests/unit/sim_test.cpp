#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <set>

#include "fruitpal/sim/simulator.hpp"
#include "support/scenario_writer.hpp"

namespace fs = std::filesystem;
using namespace fruitpal;
using namespace fruitpal::testing;

namespace {

const fs::path kScenarios = fs::path(FRUITPAL_SOURCE_DIR) / "scenarios";

std::vector<Json> of_type(const std::vector<Json>& log, const std::string& type) {
    std::vector<Json> out;
    for (const auto& r : log)
        if (r["type"] == type) out.push_back(r);
    return out;
}

std::size_t first_seq(const std::vector<Json>& log, const std::string& type) {
    for (const auto& r : log)
        if (r["type"] == type) return r["seq"].get<std::size_t>();
    return SIZE_MAX;
}

sim::RunSummary run(const fs::path& dir, const fs::path& out) { return sim::run_scenario(dir, out); }

ScenarioFiles single_allergen(std::vector<std::string> timeline) {
    ScenarioFiles f;
    f.manifest = {{"name", "t"}, {"seed", 3}, {"devices", {allergen_device("k", {"Mango"})}}};
    f.frames = {frame("mango", {{"Mango", 1, 0.8}}), frame("apple", {{"Apple", 2, 0.9}})};
    f.timeline = std::move(timeline);
    return f;
}

}  // namespace

TEST(SimScenario, AllergenAckPathOrdersRaiseAckStop) {
    const auto out = scratch_dir("sim-ack");
    const auto s = run(kScenarios / "allergen_ack", out);
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(out / "events.jsonl");
    const auto raised = first_seq(log, "AlertRaised");
    const auto acked = first_seq(log, "CaregiverAck");
    const auto stopped = first_seq(log, "StopAlarm");
    ASSERT_NE(raised, SIZE_MAX);
    EXPECT_LT(raised, acked);
    EXPECT_LT(acked, stopped);

    const auto alerts = of_type(log, "AlertRaised");
    ASSERT_EQ(alerts.size(), 1u);
    EXPECT_EQ(alerts[0]["payload"]["message"], "Allergen detected \xE2\x80\x93 danger present");
    EXPECT_EQ(alerts[0]["payload"]["frame_id"], "mango-plate");
    EXPECT_EQ(of_type(log, "StopAlarm")[0]["resolution"], "Acknowledged");
    EXPECT_EQ(s.open_alerts, 0u);
}

TEST(SimScenario, DepartureTimeoutClearsAlert) {
    const auto out = scratch_dir("sim-depart");
    const auto s = run(kScenarios / "allergen_departure", out);
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto stops = of_type(read_jsonl(out / "events.jsonl"), "StopAlarm");
    ASSERT_EQ(stops.size(), 1u);
    EXPECT_EQ(stops[0]["resolution"], "ClearedByDeparture");
    // last motion at 36060 plus the 120-tick timeout
    EXPECT_EQ(stops[0]["tick"], 36180);
}

TEST(SimScenario, NutritionDayProducesOneDigest) {
    const auto out = scratch_dir("sim-nutrition");
    const auto s = run(kScenarios / "nutrition_day", out);
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(out / "events.jsonl");
    const auto digests = of_type(log, "DigestMessage");
    ASSERT_EQ(digests.size(), 1u);
    EXPECT_EQ(digests[0]["digest"]["eaten"], Json({{"Apple", 1}, {"Strawberry", 1}}));
    EXPECT_EQ(digests[0]["digest"]["nutrients"], Json({"vitamin C and Manganese", "Vitamin K and Folate"}));
    EXPECT_EQ(digests[0]["digest"]["date"], "2024-03-04");
    EXPECT_EQ(digests[0]["tick"], 20 * 3600);
    const auto texts = of_type(log, "TextMessage");
    ASSERT_EQ(texts.size(), 1u);
    EXPECT_EQ(texts[0]["msg_id"], "digest:plate:2024-03-04");
}

TEST(SimScenario, EmptyTimelineHasNoCommands) {
    const auto out = scratch_dir("sim-empty");
    const auto s = run(kScenarios / "empty", out);
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(out / "events.jsonl");
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log[0]["type"], "ScenarioStart");
    EXPECT_EQ(log[1]["type"], "ScenarioEnd");
    EXPECT_EQ(read_text(out / "hub.jsonl"), "");
}

TEST(SimScenario, ReplayIsBytewiseIdentical) {
    for (const char* name : {"allergen_ack", "allergen_departure", "nutrition_day"}) {
        std::string first_events, first_hub;
        for (int i = 0; i < 3; ++i) {
            const auto out = scratch_dir(std::string("sim-replay-") + name);
            ASSERT_EQ(run(kScenarios / name, out).exit_code, 0);
            const auto events = read_text(out / "events.jsonl");
            const auto hub = read_text(out / "hub.jsonl");
            if (i == 0) {
                first_events = events;
                first_hub = hub;
                EXPECT_FALSE(events.empty());
            } else {
                EXPECT_EQ(events, first_events) << name;
                EXPECT_EQ(hub, first_hub) << name;
            }
        }
    }
}

TEST(SimValidation, NonIncreasingTickIsInputError) {
    const auto dir = scratch_dir("sim-bad-order");
    single_allergen({R"({"at": 10, "type": "Motion"})", R"({"at": 20, "type": "Motion"})",
                     R"({"at": 20, "type": "Motion"})"})
        .write(dir);
    const auto s = run(dir, dir / "out");
    EXPECT_EQ(s.exit_code, 2);
    EXPECT_NE(s.message.find("timeline.jsonl:3:"), std::string::npos) << s.message;
}

TEST(SimValidation, EventInsideAdvanceSpanIsInputError) {
    const auto dir = scratch_dir("sim-bad-advance");
    single_allergen({R"({"at": 10, "type": "AdvanceHours", "hours": 1})", R"({"at": 3609, "type": "Motion"})"})
        .write(dir);
    const auto s = run(dir, dir / "out");
    EXPECT_EQ(s.exit_code, 2);
    EXPECT_NE(s.message.find("timeline.jsonl:2:"), std::string::npos) << s.message;
}

TEST(SimValidation, LineDiagnostics) {
    struct Case {
        std::vector<std::string> timeline;
        std::string needle;
    };
    const std::vector<Case> cases = {
        {{R"({"at": 1, "type": "Motion"})", R"({"at": 2, "type": "Frame", "frame_id": "ghost"})"},
         "timeline.jsonl:2:"},
        {{R"({"at": 1, "type": "Teleport"})"}, "timeline.jsonl:1:"},
        {{"", "# comment", R"({"at": 1, "type": "Restart"})"}, "timeline.jsonl:3:"},
        {{R"({"at": 1, "type": "Motion"})", "{not json"}, "timeline.jsonl:2:"},
        {{R"({"at": 1, "type": "AdvanceHours", "hours": 0})"}, "timeline.jsonl:1:"},
        {{R"({"at": 1, "type": "Motion", "device": "nobody"})"}, "timeline.jsonl:1:"},
    };
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto dir = scratch_dir("sim-diag-" + std::to_string(i));
        single_allergen(cases[i].timeline).write(dir);
        const auto s = run(dir, dir / "out");
        EXPECT_EQ(s.exit_code, 2) << i;
        EXPECT_NE(s.message.find(cases[i].needle), std::string::npos) << i << ": " << s.message;
    }
}

TEST(SimValidation, ManifestErrors) {
    auto dir = scratch_dir("sim-dup-device");
    ScenarioFiles f = single_allergen({});
    f.manifest["devices"].push_back(allergen_device("k", {"Mango"}));
    f.write(dir);
    EXPECT_EQ(run(dir, dir / "out").exit_code, 2);

    dir = scratch_dir("sim-bad-time");
    f = single_allergen({});
    Json n = nutrition_device("n");
    n["digest_time"] = "25:00";
    f.manifest["devices"].push_back(n);
    f.write(dir);
    EXPECT_EQ(run(dir, dir / "out").exit_code, 2);

    dir = scratch_dir("sim-bad-pir");
    f = single_allergen({});
    f.manifest["devices"][0]["pir"]["c7_farads"] = -1.0;
    f.write(dir);
    EXPECT_EQ(run(dir, dir / "out").exit_code, 2);

    const auto missing = run(scratch_dir("sim-missing") / "nope", scratch_dir("sim-missing-out"));
    EXPECT_EQ(missing.exit_code, 2);
    EXPECT_NE(missing.message.find("scenario.json"), std::string::npos);
}

TEST(SimAcks, UnknownAndDuplicateAcksAreLogged) {
    const auto dir = scratch_dir("sim-acks");
    single_allergen({R"({"at": 10, "type": "CaregiverAck", "alert_id": "k-A9"})",
                     R"({"at": 20, "type": "Motion"})",
                     R"({"at": 21, "type": "Frame", "frame_id": "mango"})",
                     R"({"at": 30, "type": "CaregiverAck", "alert_id": "k-A1", "caregiver_id": "nurse"})",
                     R"({"at": 31, "type": "CaregiverAck", "alert_id": "k-A1", "caregiver_id": "nurse"})",
                     R"({"at": 40, "type": "AdvanceHours", "hours": 1})"})
        .write(dir);
    const auto s = run(dir, dir / "out");
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(dir / "out" / "events.jsonl");
    EXPECT_EQ(of_type(log, "AckRejected").size(), 1u);
    EXPECT_EQ(of_type(log, "AckDuplicate").size(), 1u);
    EXPECT_EQ(of_type(log, "CaregiverAck").size(), 1u);
    EXPECT_EQ(of_type(log, "StopAlarm").size(), 1u);
}

TEST(SimAcks, LateAckAfterDepartureIsStale) {
    const auto dir = scratch_dir("sim-late-ack");
    single_allergen({R"({"at": 10, "type": "Motion"})", R"({"at": 11, "type": "Frame", "frame_id": "mango"})",
                     R"({"at": 500, "type": "CaregiverAck", "alert_id": "k-A1"})"})
        .write(dir);
    const auto s = run(dir, dir / "out");
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(dir / "out" / "events.jsonl");
    const auto stops = of_type(log, "StopAlarm");
    ASSERT_EQ(stops.size(), 1u);
    EXPECT_EQ(stops[0]["resolution"], "ClearedByDeparture");
    EXPECT_EQ(stops[0]["tick"], 130);
    EXPECT_EQ(of_type(log, "StaleAck").size(), 1u);
}

TEST(SimNutrition, RestartRebaselines) {
    const auto dir = scratch_dir("sim-restart");
    ScenarioFiles f;
    f.manifest = {{"name", "restart"}, {"devices", {nutrition_device("n")}}};
    f.frames = {frame("a3", {{"Apple", 3}}), frame("a2", {{"Apple", 2}}), frame("a1", {{"Apple", 1}}),
                frame("a0", {})};
    f.timeline = {R"({"at": 25200, "type": "Frame", "frame_id": "a3"})",
                  R"({"at": 28800, "type": "Frame", "frame_id": "a2"})",
                  R"({"at": 29000, "type": "Restart"})",
                  R"({"at": 30000, "type": "Frame", "frame_id": "a1"})",
                  R"({"at": 33600, "type": "Frame", "frame_id": "a0"})",
                  R"({"at": 34000, "type": "AdvanceHours", "hours": 12})"};
    f.write(dir);
    const auto s = run(dir, dir / "out");
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(dir / "out" / "events.jsonl");
    EXPECT_EQ(of_type(log, "Baseline").size(), 2u);
    const auto digests = of_type(log, "DigestMessage");
    ASSERT_EQ(digests.size(), 1u);
    // the apple eaten before the restart is lost with the tracker state
    EXPECT_EQ(digests[0]["digest"]["eaten"], Json({{"Apple", 1}}));
}

TEST(SimNutrition, SmoothingUsesMedianOfThree) {
    const auto dir = scratch_dir("sim-smooth");
    ScenarioFiles f;
    f.manifest = {{"name", "smooth"}, {"devices", {nutrition_device("n", true)}}};
    f.frames = {frame("a5", {{"Apple", 5}}), frame("a4", {{"Apple", 4}}), frame("a1", {{"Apple", 1}})};
    f.timeline = {R"({"at": 25200, "type": "Frame", "frame_ids": ["a5", "a5", "a5"]})",
                  R"({"at": 28800, "type": "Frame", "frame_ids": ["a5", "a1", "a4"]})",
                  R"({"at": 28801, "type": "AdvanceHours", "hours": 15})"};
    f.write(dir);
    const auto s = run(dir, dir / "out");
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto ticks = of_type(read_jsonl(dir / "out" / "events.jsonl"), "HourlyTick");
    ASSERT_EQ(ticks.size(), 1u);
    EXPECT_EQ(ticks[0]["delta"], Json({{"Apple", 1}}));

    const auto bad = scratch_dir("sim-smooth-bad");
    f.timeline = {R"({"at": 1, "type": "Frame", "frame_id": "a5"})"};
    f.write(bad);
    EXPECT_EQ(run(bad, bad / "out").exit_code, 2);
}

TEST(SimNutrition, TwoDaysTwoDigestsWithMorningReset) {
    const auto dir = scratch_dir("sim-two-days");
    ScenarioFiles f;
    f.manifest = {{"name", "two-days"}, {"start_date", "2024-12-31"}, {"devices", {nutrition_device("n")}}};
    f.frames = {frame("o2", {{"Orange", 2}}), frame("o1", {{"Orange", 1}}), frame("o0", {})};
    f.timeline = {R"({"at": 25200, "type": "Frame", "frame_id": "o2"})",
                  R"({"at": 28800, "type": "Frame", "frame_id": "o1"})",
                  R"({"at": 30000, "type": "AdvanceHours", "hours": 22})",
                  R"({"at": 111600, "type": "Frame", "frame_id": "o0"})",
                  R"({"at": 111601, "type": "AdvanceHours", "hours": 14})"};
    f.write(dir);
    const auto s = run(dir, dir / "out");
    ASSERT_EQ(s.exit_code, 0) << s.message;
    const auto log = read_jsonl(dir / "out" / "events.jsonl");
    const auto digests = of_type(log, "DigestMessage");
    ASSERT_EQ(digests.size(), 2u);
    EXPECT_EQ(digests[0]["digest"]["date"], "2024-12-31");
    EXPECT_EQ(digests[0]["digest"]["eaten"], Json({{"Orange", 1}}));
    EXPECT_EQ(digests[1]["digest"]["date"], "2025-01-01");
    EXPECT_EQ(digests[1]["digest"]["eaten"], Json({{"Orange", 1}}));
    EXPECT_EQ(of_type(log, "MorningReset").size(), 1u);
}

TEST(SimOutput, LogDirPrecedence) {
    const auto dir = scratch_dir("sim-env");
    single_allergen({R"({"at": 1, "type": "Motion"})"}).write(dir);
    const auto env_dir = scratch_dir("sim-env-out");

    ::setenv("FRUITPAL_LOG_DIR", env_dir.c_str(), 1);
    auto s = sim::run_scenario(dir);
    EXPECT_EQ(s.out_dir, env_dir);
    EXPECT_TRUE(fs::exists(env_dir / "events.jsonl"));
    EXPECT_TRUE(fs::exists(env_dir / "summary.json"));

    const auto explicit_dir = scratch_dir("sim-env-explicit");
    s = sim::run_scenario(dir, explicit_dir);
    EXPECT_EQ(s.out_dir, explicit_dir);

    ::unsetenv("FRUITPAL_LOG_DIR");
    s = sim::run_scenario(dir);
    EXPECT_EQ(s.out_dir, dir / "out");
    EXPECT_TRUE(fs::exists(dir / "out" / "hub.jsonl"));
    EXPECT_EQ(Json::parse(read_text(dir / "out" / "summary.json"))["exit_code"], 0);
}

TEST(SimProperties, FuzzedAlertsAlwaysHaveAnAllergenFrame) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto fz = fuzz_allergen_scenario(seed, 2000);
        const auto dir = scratch_dir("sim-fuzz-" + std::to_string(seed));
        fz.files.write(dir);
        const auto s = run(dir, dir / "out");
        ASSERT_EQ(s.exit_code, 0) << s.message;
        const auto log = read_jsonl(dir / "out" / "events.jsonl");

        // oracle straight from the fixture rows: Mango or Peach at >= 0.5
        std::set<std::string> allergen_frames;
        for (const auto& fr : fz.files.frames) {
            for (const auto& row : fr["rows"]) {
                const auto label = row[0].get<std::string>();
                if ((label == "Mango" || label == "Peach") && row[5].get<double>() >= 0.5) {
                    allergen_frames.insert(fr["frame_id"]);
                }
            }
        }
        std::size_t open = 0;
        std::set<std::string> ids;
        for (const auto& r : log) {
            if (r["type"] == "AlertRaised") {
                EXPECT_TRUE(allergen_frames.count(r["payload"]["frame_id"])) << r.dump();
                EXPECT_TRUE(ids.insert(r["payload"]["alert_id"]).second);
                EXPECT_EQ(open, 0u) << "second alert while one is active";
                ++open;
            } else if (r["type"] == "AlertCleared") {
                ASSERT_EQ(open, 1u);
                --open;
            }
        }
        EXPECT_EQ(s.alerts_raised, ids.size());
        EXPECT_EQ(of_type(log, "InvariantViolation").size(), 0u);
        EXPECT_GT(ids.size(), 10u) << "fuzz did not exercise the alert path";
    }
}

TEST(SimPerformance, FullDayUnderFiveSeconds) {
    const auto dir = scratch_dir("sim-day");
    ScenarioFiles f;
    f.manifest = {{"name", "day"},
                  {"devices", {allergen_device("k", {"Mango"}, 0.5, 120), nutrition_device("n")}}};
    f.frames = {frame("mango", {{"Mango", 1, 0.8}}), frame("plain", {{"Apple", 1}}),
                frame("bowl", {{"Apple", 4}, {"Banana", 3}})};
    for (std::int64_t t = 30; t < 86400; t += 30) {
        Json e{{"at", t}};
        if (t % 3600 == 0) {
            e.update({{"type", "Frame"}, {"device", "n"}, {"frame_id", "bowl"}});
        } else if (t % 600 == 0) {
            e.update({{"type", "Frame"}, {"device", "k"}, {"frame_id", t % 1800 == 0 ? "mango" : "plain"}});
        } else if (t % 900 == 450) {
            e.update({{"type", "CaregiverAck"}, {"alert_id", "k-A1"}});
        } else {
            e.update({{"type", "Motion"}, {"device", "k"}});
        }
        f.timeline.push_back(e.dump());
    }
    f.write(dir);
    const auto start = std::chrono::steady_clock::now();
    const auto s = run(dir, dir / "out");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ASSERT_EQ(s.exit_code, 0) << s.message;
    EXPECT_EQ(s.digests, 1u);
    EXPECT_LT(seconds, 5.0);
}
