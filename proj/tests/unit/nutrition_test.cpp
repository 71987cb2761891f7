#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "fruitpal/core/errors.hpp"
#include "fruitpal/core/nutrients.hpp"
#include "fruitpal/core/random.hpp"
#include "fruitpal/nutrition/tracker.hpp"

namespace fruitpal::nutrition {
namespace {

using F = FruitClass;

TEST(Tracker, StartDay) {
    const auto s = start_day({{F::Apple, 2}}, 100);
    EXPECT_EQ(s.baseline, FruitInventory({{F::Apple, 2}}));
    EXPECT_TRUE(s.eaten.empty());
    EXPECT_EQ(s.hours_elapsed, 0);
    EXPECT_EQ(s.day_start, 100);
    EXPECT_TRUE(start_day({}, 0).baseline.empty());
}

TEST(Tracker, DropIsEaten) {
    const auto s = start_day({{F::Apple, 2}, {F::Banana, 1}}, 0);
    const auto r = hourly_tick(s, {{F::Apple, 1}, {F::Banana, 1}});
    EXPECT_EQ(r.delta, FruitInventory({{F::Apple, 1}}));
    EXPECT_EQ(r.state.eaten, FruitInventory({{F::Apple, 1}}));
    EXPECT_EQ(r.state.baseline, FruitInventory({{F::Apple, 1}, {F::Banana, 1}}));
    EXPECT_EQ(r.state.hours_elapsed, 1);
}

TEST(Tracker, IdenticalObservationIsNoOp) {
    const auto s = start_day({{F::Apple, 2}}, 0);
    const auto r = hourly_tick(s, s.baseline);
    EXPECT_TRUE(r.delta.empty());
    EXPECT_EQ(r.state.eaten, s.eaten);
    EXPECT_EQ(r.state.baseline, s.baseline);
}

TEST(Tracker, AdditionsRebaseline) {
    const auto s = start_day({{F::Apple, 2}}, 0);
    const auto r = hourly_tick(s, {{F::Apple, 2}, {F::Mango, 2}});
    EXPECT_TRUE(r.delta.empty());
    EXPECT_EQ(r.state.baseline.count(F::Mango), 2u);
}

TEST(Tracker, DayCompleteAfter24Ticks) {
    auto s = start_day({{F::Pear, 1}}, 0);
    for (int h = 0; h < 24; ++h) s = hourly_tick(s, s.baseline).state;
    EXPECT_EQ(s.hours_elapsed, 24);
    EXPECT_THROW(hourly_tick(s, s.baseline), DayComplete);
    s = daily_reset(s, {{F::Pear, 3}}, kTicksPerDay);
    EXPECT_EQ(s.baseline, FruitInventory({{F::Pear, 3}}));
    EXPECT_TRUE(s.eaten.empty());
    EXPECT_NO_THROW(hourly_tick(s, s.baseline));
}

TEST(Tracker, RestartDiscardsLedger) {
    auto s = start_day({{F::Apple, 2}}, 0);
    s = hourly_tick(s, {}).state;
    EXPECT_EQ(s.eaten.count(F::Apple), 2u);
    s = start_day({{F::Apple, 1}}, 7200);
    EXPECT_TRUE(s.eaten.empty());
}

TEST(Tracker, SmoothingTakesMedian) {
    const auto s = start_day({{F::Grape, 5}}, 0);
    // One capture misses most of the grapes; the median ignores it.
    const auto r = hourly_tick_smoothed(s, {{F::Grape, 5}}, {{F::Grape, 1}}, {{F::Grape, 4}});
    EXPECT_EQ(r.delta, FruitInventory({{F::Grape, 1}}));
}

TEST(Tracker, GoldenThreeHours) {
    auto s = start_day({{F::Apple, 2}, {F::Banana, 1}, {F::Strawberry, 3}}, 0);
    s = hourly_tick(s, {{F::Apple, 1}, {F::Banana, 1}, {F::Strawberry, 3}}).state;
    s = hourly_tick(s, {{F::Apple, 1}, {F::Banana, 1}, {F::Strawberry, 3}, {F::Mango, 2}}).state;
    s = hourly_tick(s, {{F::Apple, 1}, {F::Banana, 1}, {F::Strawberry, 2}, {F::Mango, 2}}).state;
    const auto d = compose_digest(s, "2024-03-01");
    EXPECT_EQ(d.eaten, FruitInventory({{F::Apple, 1}, {F::Strawberry, 1}}));
    EXPECT_EQ(d.nutrients, (std::vector<std::string>{"vitamin C and Manganese", "Vitamin K and Folate"}));
    EXPECT_NE(d.text.find("1 x Apple"), std::string::npos);
    EXPECT_NE(d.text.find("1 x Strawberry"), std::string::npos);
}

// Ledger conservation against a direct per-class recomputation.
TEST(Tracker, LedgerConservationProperty) {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        FruitInventory start;
        for (FruitClass c : kAllFruitClasses) start.set(c, static_cast<FruitInventory::Count>(rng.below(4)));
        auto s = start_day(start, 0);
        std::map<FruitClass, long> expected, prev;
        for (FruitClass c : kAllFruitClasses) prev[c] = start.count(c);
        const int hours = static_cast<int>(rng.below(25));
        FruitInventory last_eaten;
        for (int h = 0; h < hours; ++h) {
            FruitInventory obs;
            for (FruitClass c : kAllFruitClasses) obs.set(c, static_cast<FruitInventory::Count>(rng.below(4)));
            s = hourly_tick(s, obs).state;
            for (FruitClass c : kAllFruitClasses) {
                expected[c] += std::max(0L, prev[c] - static_cast<long>(obs.count(c)));
                prev[c] = obs.count(c);
                ASSERT_GE(s.eaten.count(c), last_eaten.count(c)) << "ledger decreased";
            }
            last_eaten = s.eaten;
        }
        for (FruitClass c : kAllFruitClasses) ASSERT_EQ(static_cast<long>(s.eaten.count(c)), expected[c]);
    }
}

TEST(Digest, Examples) {
    TrackerState s;
    s.eaten = {{F::Banana, 1}, {F::Strawberry, 2}};
    EXPECT_EQ(compose_digest(s, "d").nutrients, (std::vector<std::string>{"Vitamin B6 and C", "Vitamin K and Folate"}));
    s.eaten = {{F::Grapefruit, 1}, {F::Lemon, 1}};
    EXPECT_EQ(compose_digest(s, "d").nutrients, (std::vector<std::string>{"Vitamin C and Potassium"}));
}

TEST(Digest, EmptyLedger) {
    const auto d = compose_digest(start_day({{F::Apple, 1}}, 0), "2024-03-01");
    EXPECT_NE(d.text.find("no fruit consumed"), std::string::npos);
    EXPECT_TRUE(d.nutrients.empty());
}

// All 2^6 group combinations, one representative per group. The nutrient
// strings are typed out here rather than read from the table.
TEST(Digest, ExhaustiveOverGroupSubsets) {
    struct G {
        FruitClass representative;
        const char* nutrient;
    };
    const G groups[] = {
        {F::Orange, "Vitamin C and Potassium"},   {F::Pineapple, "Vitamin B6 and C"},
        {F::Pomegranate, "vitamin C and Manganese"}, {F::Pear, "vitamins A, C, and E"},
        {F::Watermelon, "Vitamins A and C"},      {F::Strawberry, "Vitamin K and Folate"},
    };
    for (unsigned mask = 0; mask < 64; ++mask) {
        TrackerState s;
        std::vector<std::pair<std::size_t, std::string>> ranked;
        for (unsigned g = 0; g < 6; ++g) {
            if (mask & (1u << g)) {
                s.eaten.add(groups[g].representative, 1 + g);
                ranked.emplace_back(index_of(groups[g].representative), groups[g].nutrient);
            }
        }
        std::sort(ranked.begin(), ranked.end());
        std::vector<std::string> expected;
        for (auto& [rank, n] : ranked) expected.push_back(n);
        EXPECT_EQ(compose_digest(s, "d").nutrients, expected) << "mask " << mask;
    }
}

TEST(Digest, DuplicatesWithinGroupCollapse) {
    for (const auto& group : nutrient_groups()) {
        TrackerState s;
        for (FruitClass c : group.members) s.eaten.add(c, 2);
        const auto d = compose_digest(s, "d");
        ASSERT_EQ(d.nutrients.size(), group.nutrients.size());
    }
}

TEST(Digest, JsonRoundTripAndDeterminism) {
    auto run = [] {
        auto s = start_day({{F::Peach, 3}, {F::Lemon, 2}}, 0);
        s = hourly_tick(s, {{F::Peach, 1}, {F::Lemon, 2}}).state;
        s = hourly_tick(s, {{F::Peach, 1}}).state;
        return compose_digest(s, "2024-03-02");
    };
    const auto d = run();
    EXPECT_EQ(d, run());
    EXPECT_EQ(digest_from_json(digest_to_json(d)), d);
    EXPECT_EQ(d.nutrients, (std::vector<std::string>{"Vitamin C and Potassium", "vitamins A, C, and E"}));
}

}  // namespace
}  // namespace fruitpal::nutrition
