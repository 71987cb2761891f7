#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fruitpal/core/json.hpp"

namespace fruitpal::testing {

/// Writes a scenario directory from JSON pieces. Lines are written verbatim,
/// so tests can also produce invalid input.
struct ScenarioFiles {
    Json manifest = Json::object();
    std::vector<Json> frames;
    std::vector<std::string> timeline;

    void write(const std::filesystem::path& dir) const;
};

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_text(const std::filesystem::path& path);
std::vector<Json> read_jsonl(const std::filesystem::path& path);

Json allergen_device(const std::string& id, const std::vector<std::string>& allergens, double threshold = 0.5,
                     std::int64_t timeout = 120);
Json nutrition_device(const std::string& id, bool smoothing = false);

/// A frame with `n` boxes per listed (label, count, confidence).
struct Box {
    std::string label;
    int count = 1;
    double confidence = 0.9;
};
Json frame(const std::string& id, const std::vector<Box>& boxes);

/// Randomized allergen timeline over the given frames: motion, frames and
/// acks for alert ids the device could have raised, with random gaps.
struct FuzzScenario {
    ScenarioFiles files;
    std::size_t events = 0;
};
FuzzScenario fuzz_allergen_scenario(std::uint64_t seed, std::size_t events);

}  // namespace fruitpal::testing
