#include "tc/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tc {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw IoError(std::string("situation: missing or non-array field \"") + key + "\"");
    }
    std::vector<double> out;
    for (const auto& entry : j.at(key)) {
        if (!entry.is_number()) {
            throw IoError(std::string("situation: non-numeric entry in \"") + key + "\"");
        }
        out.push_back(entry.get<double>());
    }
    return out;
}

// Shortest representation that parses back to the same double.
std::string dump_double(double x) { return json(x).dump(); }

}  // namespace

json to_json(const Situation& theta) {
    return json{{"p", theta.prices}, {"c", theta.costs}, {"alpha", theta.alphas},
                {"beta", theta.beta}};
}

Situation situation_from_json(const json& j) {
    if (!j.is_object()) throw IoError("situation: expected a JSON object");
    Situation theta;
    theta.prices = number_array(j, "p");
    theta.costs = number_array(j, "c");
    theta.alphas = number_array(j, "alpha");
    if (!j.contains("beta") || !j.at("beta").is_number()) {
        throw IoError("situation: missing or non-numeric field \"beta\"");
    }
    theta.beta = j.at("beta").get<double>();
    if (theta.prices.empty() || theta.costs.size() != theta.prices.size() ||
        theta.alphas.size() != theta.prices.size()) {
        std::ostringstream msg;
        msg << "situation: vector lengths disagree (p:" << theta.prices.size()
            << " c:" << theta.costs.size() << " alpha:" << theta.alphas.size() << ")";
        throw IoError(msg.str());
    }
    try {
        theta.validate();
    } catch (const std::invalid_argument& err) {
        throw IoError(err.what());
    }
    return theta;
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object() || !j.contains("situation")) {
        throw IoError("scenario: expected an object with a \"situation\" field");
    }
    Scenario scenario;
    scenario.situation = situation_from_json(j.at("situation"));
    if (j.contains("delta")) {
        if (!j.at("delta").is_number()) throw IoError("scenario: \"delta\" must be a number");
        const double delta = j.at("delta").get<double>();
        if (!(delta > 0.0) || !(delta < 1.0)) {
            throw IoError("scenario: \"delta\" must lie in (0, 1), got " + dump_double(delta));
        }
        scenario.delta = delta;
    }
    if (j.contains("rules")) {
        if (!j.at("rules").is_array()) throw IoError("scenario: \"rules\" must be an array");
        for (const auto& entry : j.at("rules")) {
            if (!entry.is_string()) throw IoError("scenario: rule names must be strings");
            const auto rule = rule_from_name(entry.get<std::string>());
            if (!rule) throw IoError("scenario: unknown rule \"" + entry.get<std::string>() + "\"");
            scenario.rules.push_back(*rule);
        }
    }
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw IoError("invalid JSON in " + path.string() + ": " + err.what());
    }
    return scenario_from_json(j);
}

json to_json(const Game& game) {
    json values = json::object();
    for (std::size_t mask = 0; mask < game.values.size(); ++mask) {
        values[to_mask_literal(Coalition{static_cast<std::uint32_t>(mask)}, game.n)] =
            game.values[mask];
    }
    json j{{"n", game.n}, {"values", std::move(values)}};
    if (game.kind == GameKind::DeltaScaled) {
        j["kind"] = "delta-scaled";
        j["delta"] = game.delta;
    } else {
        j["kind"] = "plain";
    }
    return j;
}

Game game_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("kind") || !j.contains("values")) {
        throw IoError("game: expected an object with \"n\", \"kind\", and \"values\"");
    }
    Game game;
    game.n = j.at("n").get<int>();
    if (game.n < 1 || game.n > 24) throw IoError("game: n out of range");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "plain") {
        game.kind = GameKind::Plain;
    } else if (kind == "delta-scaled") {
        game.kind = GameKind::DeltaScaled;
        if (!j.contains("delta")) throw IoError("game: delta-scaled game without \"delta\"");
        game.delta = j.at("delta").get<double>();
    } else {
        throw IoError("game: unknown kind \"" + kind + "\"");
    }
    const std::size_t count = std::size_t{1} << game.n;
    const json& values = j.at("values");
    if (!values.is_object() || values.size() != count) {
        throw IoError("game: \"values\" must map all " + std::to_string(count) + " coalitions");
    }
    game.values.assign(count, 0.0);
    for (const auto& [key, value] : values.items()) {
        const Coalition m = coalition_from_mask_literal(key);
        if (m.bits >= count) throw IoError("game: coalition key " + key + " out of range");
        game.values[m.bits] = value.get<double>();
    }
    return game;
}

json to_json(const Allocation& allocation) {
    json metadata = json::object();
    if (allocation.phi) metadata["phi"] = *allocation.phi;
    if (allocation.delta) metadata["delta"] = *allocation.delta;
    if (allocation.threshold) metadata["threshold"] = *allocation.threshold;
    return json{{"rule", std::string(rule_name(allocation.rule))},
                {"payoffs", allocation.payoffs},
                {"metadata", std::move(metadata)}};
}

json to_json(const ExperimentReport& report) {
    json rules = json::array();
    for (const auto& [rule, outcome] : report.per_rule) {
        rules.push_back(json{{"rule", std::string(rule_name(rule))},
                             {"evaluated", outcome.evaluated},
                             {"in_core", outcome.in_core},
                             {"undefined", outcome.undefined},
                             {"fraction", report.fraction(rule)}});
    }
    json failures = json::array();
    for (const auto& failure : report.failures) {
        failures.push_back(json{{"rule", std::string(rule_name(failure.rule))},
                                {"trial", failure.trial},
                                {"situation", to_json(failure.situation)}});
    }
    return json{{"n", report.n_players},     {"trials", report.trials},
                {"seed", report.seed},       {"rules", std::move(rules)},
                {"nash_retries", report.nash_retries}, {"failures", std::move(failures)}};
}

std::string reports_to_csv(std::span<const ExperimentReport> reports) {
    std::string out = "rule,n,trials,in_core,undefined,fraction,seed\n";
    for (const ExperimentReport& report : reports) {
        for (const auto& [rule, outcome] : report.per_rule) {
            out += std::string(rule_name(rule));
            out += ',' + std::to_string(report.n_players);
            out += ',' + std::to_string(report.trials);
            out += ',' + std::to_string(outcome.in_core);
            out += ',' + std::to_string(outcome.undefined);
            out += ',' + dump_double(report.fraction(rule));
            out += ',' + std::to_string(report.seed);
            out += '\n';
        }
    }
    return out;
}

}  // namespace tc
