#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tc/allocation.hpp"
#include "tc/experiment.hpp"
#include "tc/game.hpp"

namespace tc {

// Raised for unreadable files and schema violations; the message names the
// offending path or field.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Situation <-> {"p": [...], "c": [...], "alpha": [...], "beta": x}
// n is inferred from the vector lengths; mismatched lengths are rejected.
nlohmann::json to_json(const Situation& theta);
Situation situation_from_json(const nlohmann::json& j);

// Scenario file: {"situation": {...}, "delta": x?, "rules": ["mse", ...]?}
struct Scenario {
    Situation situation;
    std::optional<double> delta;   // in (0,1) when present
    std::vector<Rule> rules;       // empty when absent
};
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

// Game <-> {"n": k, "kind": "plain"|"delta-scaled", "delta": x?, "values": {"0b101": v, ...}}
nlohmann::json to_json(const Game& game);
Game game_from_json(const nlohmann::json& j);

// Allocation -> {"rule": "...", "payoffs": [...], "metadata": {"phi": x?, "delta": y?, "threshold": z?}}
nlohmann::json to_json(const Allocation& allocation);

nlohmann::json to_json(const ExperimentReport& report);

// One row per rule per report: rule,n,trials,in_core,undefined,fraction,seed.
// Numbers are rendered at full round-trip precision.
std::string reports_to_csv(std::span<const ExperimentReport> reports);

}  // namespace tc
