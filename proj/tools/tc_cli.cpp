// Command-line front end: solve a pricing scenario, build the cooperative game,
// evaluate allocation rules, test core membership, scan the society-payback
// fraction, and run the Monte Carlo replication harness.
//
// Exit codes: 0 success, 1 data error (unreadable/invalid input), 2 usage error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tc/allocation.hpp"
#include "tc/experiment.hpp"
#include "tc/game.hpp"
#include "tc/io.hpp"
#include "tc/model.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed3(double x) {
    if (x < 0.0 && x > -5e-4) x = 0.0;   // avoid "-0.000"
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << x;
    return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw tc::IoError("cannot write output file: " + out_path);
    out << text;
}

void print_operator_table(std::ostream& os, const tc::Situation& theta,
                          const tc::MarketState& market) {
    const int n = theta.size();
    auto row = [&](const char* label, auto value_of) {
        os << std::left << std::setw(14) << label;
        for (int i = 0; i < n; ++i) os << std::right << std::setw(10) << fixed3(value_of(i));
        os << '\n';
    };
    os << std::left << std::setw(14) << "operator";
    for (int i = 0; i < n; ++i) os << std::right << std::setw(10) << (i + 1);
    os << '\n';
    row("price", [&](int i) { return theta.prices[i]; });
    row("market share", [&](int i) { return market.shares[i]; });
    row("profit", [&](int i) { return market.profits[i]; });
}

tc::Rule parse_rule(const std::string& name) {
    const auto rule = tc::rule_from_name(name);
    if (!rule) throw UsageError("unknown rule \"" + name + "\"");
    return *rule;
}

json market_to_json(const tc::Situation& theta, const tc::MarketState& market) {
    return json{{"prices", theta.prices},
                {"shares", market.shares},
                {"outside_share", market.outside_share},
                {"profits", market.profits}};
}

int cmd_solve(const std::string& scenario_path, const std::string& format) {
    const tc::Scenario scenario = tc::load_scenario(scenario_path);
    const tc::Situation& theta = scenario.situation;

    const tc::MarketState status_quo = tc::market_state(theta);
    const tc::CollaborativeOptimum optimum = tc::optimal_prices(theta);
    tc::Situation collaborative = theta;
    collaborative.equilibrium = false;
    collaborative.prices = optimum.prices;
    const tc::MarketState after = tc::market_state(collaborative);

    double status_quo_total = 0.0;
    for (double profit : status_quo.profits) status_quo_total += profit;

    if (format == "json") {
        json j{{"situation", tc::to_json(theta)},
               {"status_quo", market_to_json(theta, status_quo)},
               {"collaborative", market_to_json(collaborative, after)},
               {"joint_profit", optimum.joint_profit},
               {"status_quo_joint_profit", status_quo_total},
               {"gain", optimum.joint_profit - status_quo_total}};
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }

    std::cout << "status quo\n";
    print_operator_table(std::cout, theta, status_quo);
    std::cout << '\n' << "collaborative optimum (total market share held fixed)\n";
    print_operator_table(std::cout, collaborative, after);
    std::cout << '\n'
              << "joint profit " << fixed3(optimum.joint_profit) << "  (status quo "
              << fixed3(status_quo_total) << ", gain "
              << fixed3(optimum.joint_profit - status_quo_total) << ")\n";
    return kExitOk;
}

tc::Game scenario_game(const tc::Scenario& scenario, std::optional<double> delta) {
    tc::Game game = tc::build_game(scenario.situation);
    if (delta) game = tc::build_delta_game(game, *delta);
    return game;
}

int cmd_game(const std::string& scenario_path, std::optional<double> delta,
             const std::string& format, const std::string& out_path) {
    const tc::Scenario scenario = tc::load_scenario(scenario_path);
    if (!delta) delta = scenario.delta;
    const tc::Game game = scenario_game(scenario, delta);

    if (format == "json") {
        emit(tc::to_json(game).dump(2) + "\n", out_path);
        return kExitOk;
    }
    std::ostringstream table;
    table << "coalition worths (" << (game.kind == tc::GameKind::Plain ? "plain" : "delta-scaled")
          << (game.kind == tc::GameKind::DeltaScaled ? ", delta " + fixed3(game.delta) : "")
          << ")\n";
    for (std::size_t mask = 0; mask < game.values.size(); ++mask) {
        const tc::Coalition m{static_cast<std::uint32_t>(mask)};
        table << std::left << std::setw(12) << tc::to_mask_literal(m, game.n) << std::setw(14)
              << tc::to_string(m) << std::right << std::setw(10) << fixed3(game.values[mask])
              << '\n';
    }
    emit(table.str(), out_path);
    return kExitOk;
}

tc::Allocation evaluate_named_rule(tc::Rule rule, const tc::Scenario& scenario,
                                   const tc::Game& plain_game, std::optional<double> delta) {
    switch (rule) {
        case tc::Rule::IProp: return tc::iprop(plain_game);
        case tc::Rule::MProp: return tc::mprop(scenario.situation, plain_game);
        case tc::Rule::Shapley: return tc::shapley(plain_game);
        case tc::Rule::Mse: return tc::mse(scenario.situation, plain_game);
        case tc::Rule::MseDelta:
            if (!delta) {
                throw UsageError("rule mse-delta needs --delta or a scenario \"delta\" field");
            }
            return tc::mse_delta(scenario.situation, plain_game, *delta);
        case tc::Rule::Custom: break;
    }
    throw UsageError("rule \"custom\" cannot be evaluated; pass --payoffs to check-core instead");
}

void print_core_report(std::ostream& os, const tc::Game& game, const tc::Allocation& allocation,
                       const tc::CoreReport& report, bool verbose) {
    if (report.in_core) {
        os << "in core (worst coalition " << tc::to_string(report.worst_coalition) << ", slack "
           << fixed3(-report.worst_deficit) << ")\n";
        return;
    }
    os << "NOT in core: coalition " << tc::to_string(report.worst_coalition)
       << " is short by " << fixed3(report.worst_deficit) << " (worth "
       << fixed3(game.value(report.worst_coalition)) << ")\n";
    if (verbose) {
        for (const tc::CoreViolation& violation :
             tc::core_violations(game, allocation, report.tolerance)) {
            os << "  " << std::left << std::setw(14) << tc::to_string(violation.coalition)
               << "deficit " << fixed3(violation.deficit) << '\n';
        }
    }
}

int cmd_allocate(const std::string& scenario_path, const std::string& rule_name,
                 std::optional<double> delta, const std::string& format,
                 const std::string& out_path, bool verbose) {
    const tc::Rule rule = parse_rule(rule_name);
    if (delta && rule != tc::Rule::MseDelta) {
        throw UsageError("--delta only applies to rule mse-delta");
    }
    const tc::Scenario scenario = tc::load_scenario(scenario_path);
    // The scenario's delta only kicks in where a payback fraction is needed.
    if (!delta && rule == tc::Rule::MseDelta) delta = scenario.delta;

    const tc::Game plain_game = tc::build_game(scenario.situation);
    const tc::Allocation allocation = evaluate_named_rule(rule, scenario, plain_game, delta);
    const tc::Game target_game =
        rule == tc::Rule::MseDelta ? scenario_game(scenario, delta) : plain_game;
    const tc::CoreReport report = tc::core_check(target_game, allocation);

    if (format == "json") {
        json j{{"allocation", tc::to_json(allocation)},
               {"core",
                json{{"in_core", report.in_core},
                     {"worst_coalition", tc::to_mask_literal(report.worst_coalition, target_game.n)},
                     {"worst_deficit", report.worst_deficit},
                     {"tolerance", report.tolerance}}}};
        emit(j.dump(2) + "\n", out_path);
        return kExitOk;
    }

    std::ostringstream table;
    table << tc::rule_name(rule) << " allocation\n";
    for (int i = 0; i < target_game.n; ++i) {
        table << "  operator " << (i + 1) << "  " << std::right << std::setw(10)
              << fixed3(allocation.payoffs[i]) << '\n';
    }
    if (allocation.phi) table << "  phi        " << fixed3(*allocation.phi) << '\n';
    if (allocation.delta) table << "  delta      " << fixed3(*allocation.delta) << '\n';
    if (allocation.threshold) table << "  threshold  " << fixed3(*allocation.threshold) << '\n';
    print_core_report(table, target_game, allocation, report, verbose);
    emit(table.str(), out_path);
    return kExitOk;
}

int cmd_check_core(const std::string& scenario_path, const std::string& rule_name,
                   const std::vector<double>& payoffs, std::optional<double> delta,
                   double tolerance, bool verbose) {
    if (rule_name.empty() == payoffs.empty()) {
        throw UsageError("check-core needs exactly one of --rule or --payoffs");
    }
    const tc::Scenario scenario = tc::load_scenario(scenario_path);

    const tc::Game plain_game = tc::build_game(scenario.situation);
    tc::Allocation allocation;
    if (!rule_name.empty()) {
        const tc::Rule rule = parse_rule(rule_name);
        if (delta && rule != tc::Rule::MseDelta) {
            throw UsageError("--delta only applies to rule mse-delta or explicit --payoffs");
        }
        if (!delta && rule == tc::Rule::MseDelta) delta = scenario.delta;
        allocation = evaluate_named_rule(rule, scenario, plain_game, delta);
    } else {
        allocation.rule = tc::Rule::Custom;
        allocation.payoffs = payoffs;
        if (!delta) delta = scenario.delta;
    }
    // Custom payoffs and the scaled rule are judged against the payback game
    // when a delta is in play; everything else against the plain game.
    const bool against_delta_game =
        delta && (allocation.rule == tc::Rule::MseDelta || allocation.rule == tc::Rule::Custom);
    const tc::Game target_game =
        against_delta_game ? scenario_game(scenario, delta) : plain_game;

    const tc::CoreReport report = tc::core_check(target_game, allocation, tolerance);
    std::cout << tc::rule_name(allocation.rule) << ": ";
    print_core_report(std::cout, target_game, allocation, report, verbose);
    return kExitOk;
}

int cmd_delta_threshold(const std::string& scenario_path) {
    const tc::Scenario scenario = tc::load_scenario(scenario_path);
    const tc::Game game = tc::build_game(scenario.situation);
    std::cout << "mse-delta core guarantee up to  " << fixed3(tc::mse_delta_threshold(
                     scenario.situation, game))
              << '\n';
    std::cout << "collaboration viable up to      " << fixed3(tc::max_feasible_delta(game))
              << '\n';
    return kExitOk;
}

int cmd_experiment(const std::vector<int>& n_values, long trials,
                   std::uint64_t seed, const std::vector<std::string>& rule_names,
                   const std::string& format, const std::string& out_path) {
    std::vector<tc::Rule> rules;
    if (rule_names.empty()) {
        rules = {tc::Rule::IProp, tc::Rule::MProp, tc::Rule::Shapley, tc::Rule::Mse};
    } else {
        for (const std::string& name : rule_names) rules.push_back(parse_rule(name));
    }

    std::vector<tc::ExperimentReport> reports;
    for (int n : n_values) {
        reports.push_back(tc::run_experiment(n, trials, rules, seed));
    }

    std::string text;
    if (format == "json") {
        json j = json::array();
        for (const auto& report : reports) j.push_back(tc::to_json(report));
        text = j.dump(2) + "\n";
    } else {
        text = tc::reports_to_csv(reports);
    }
    emit(text, out_path);
    if (!out_path.empty()) {
        std::cout << "seed " << seed << ", " << trials << " trials per n, report written to "
                  << out_path << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative price setting for transport operators under logit demand"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string rule;
    std::string format = "table";
    std::string out_path;
    std::optional<double> delta;
    std::vector<double> payoffs;
    double tolerance = 1e-9;
    bool verbose = false;
    std::vector<int> n_values{3};
    long trials = 10'000;
    std::uint64_t seed = 1;
    std::vector<std::string> rule_names;

    const auto delta_validator = CLI::Validator(
        [](std::string& value) -> std::string {
            const double d = std::stod(value);
            return (d > 0.0 && d < 1.0) ? "" : "delta must lie strictly between 0 and 1";
        },
        "DELTA(0,1)");

    auto add_scenario = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    };

    CLI::App* solve = app.add_subcommand("solve", "status-quo and collaborative market outcome");
    add_scenario(solve);
    solve->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    CLI::App* game = app.add_subcommand("game", "coalition worths of the cooperative game");
    add_scenario(game);
    game->add_option("--delta", delta, "society-payback fraction")->check(delta_validator);
    game->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
    game->add_option("--out", out_path, "write the report to this file");

    CLI::App* allocate = app.add_subcommand("allocate", "evaluate an allocation rule");
    add_scenario(allocate);
    allocate->add_option("--rule", rule, "iprop | mprop | shapley | mse | mse-delta")->required();
    allocate->add_option("--delta", delta)->check(delta_validator);
    allocate->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
    allocate->add_option("--out", out_path);
    allocate->add_flag("--verbose", verbose, "list every violated coalition");

    CLI::App* check = app.add_subcommand("check-core", "test an allocation for core membership");
    add_scenario(check);
    check->add_option("--rule", rule);
    check->add_option("--payoffs", payoffs, "explicit payoff vector")->delimiter(',');
    check->add_option("--delta", delta)->check(delta_validator);
    check->add_option("--tolerance", tolerance)->check(CLI::PositiveNumber);
    check->add_flag("--verbose", verbose);

    CLI::App* threshold = app.add_subcommand(
        "delta-threshold", "largest payback fractions that keep the collaboration stable");
    add_scenario(threshold);

    CLI::App* experiment =
        app.add_subcommand("experiment", "Monte Carlo core-membership study on random instances");
    experiment->add_option("--n", n_values, "operator counts (repeatable)")
        ->check(CLI::Range(2, 24));
    experiment->add_option("--trials", trials)->check(CLI::PositiveNumber);
    experiment->add_option("--seed", seed, "master RNG seed");
    experiment->add_option("--rules", rule_names, "subset of iprop,mprop,shapley,mse")
        ->delimiter(',');
    experiment->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    experiment->add_option("--out", out_path);
    experiment->parse_complete_callback([&] {
        if (format == "table") format = "csv";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitUsageError;
    }

    try {
        if (solve->parsed()) return cmd_solve(scenario_path, format);
        if (game->parsed()) return cmd_game(scenario_path, delta, format, out_path);
        if (allocate->parsed()) {
            return cmd_allocate(scenario_path, rule, delta, format, out_path, verbose);
        }
        if (check->parsed()) {
            return cmd_check_core(scenario_path, rule, payoffs, delta, tolerance, verbose);
        }
        if (threshold->parsed()) return cmd_delta_threshold(scenario_path);
        if (experiment->parsed()) {
            return cmd_experiment(n_values, trials, seed, rule_names, format, out_path);
        }
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsageError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitDataError;
    }
    return kExitUsageError;
}
