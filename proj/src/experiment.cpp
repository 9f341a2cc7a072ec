#include "tc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "tc/game.hpp"

namespace tc {

GridSpec GridSpec::standard() {
    GridSpec grid;
    for (int k = 1; k <= 30; ++k) grid.cost_grid.push_back(0.5 * k);
    grid.alpha_grid = grid.cost_grid;
    for (int k = 1; k <= 10; ++k) grid.beta_grid.push_back(0.1 * k);
    return grid;
}

void GridSpec::validate() const {
    for (const auto* g : {&cost_grid, &alpha_grid, &beta_grid}) {
        if (g->empty()) throw std::invalid_argument("GridSpec: empty grid");
        for (double x : *g) {
            if (!std::isfinite(x) || !(x > 0.0)) {
                throw std::invalid_argument("GridSpec: grid entries must be positive and finite");
            }
        }
    }
}

std::size_t TrialRng::index(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("TrialRng::index: bound must be positive");
    // Unbiased rejection sampling: discard the partial block at the top of the
    // 64-bit range.
    const std::uint64_t m = bound;
    const std::uint64_t threshold = (0ull - m) % m;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return static_cast<std::size_t>(r % m);
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
    // splitmix64 over master + trial index: well-scrambled, collision-free
    // per-trial streams regardless of how trials are scheduled.
    std::uint64_t z = master_seed + (trial + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Situation random_situation(TrialRng& rng, int n, const GridSpec& grid, const SolverConfig& config,
                           int* retries) {
    if (n < 2) throw std::invalid_argument("random_situation: needs at least two operators");
    grid.validate();

    int consecutive_failures = 0;
    for (;;) {
        Situation theta;
        theta.costs.resize(n);
        theta.alphas.resize(n);
        for (int i = 0; i < n; ++i) theta.costs[i] = grid.cost_grid[rng.index(grid.cost_grid.size())];
        for (int i = 0; i < n; ++i) theta.alphas[i] = grid.alpha_grid[rng.index(grid.alpha_grid.size())];
        theta.beta = grid.beta_grid[rng.index(grid.beta_grid.size())];
        try {
            theta.prices = nash_prices(theta.costs, theta.alphas, theta.beta, config);
        } catch (const ConvergenceError&) {
            if (retries) ++*retries;
            if (++consecutive_failures >= 100) throw;
            continue;
        }
        theta.equilibrium = true;
        return theta;
    }
}

double ExperimentReport::fraction(Rule rule) const {
    for (const auto& [r, outcome] : per_rule) {
        if (r == rule) return static_cast<double>(outcome.in_core) / static_cast<double>(trials);
    }
    throw std::invalid_argument("ExperimentReport: rule was not part of the run");
}

namespace {

enum class TrialVerdict : std::uint8_t { Undefined, OutOfCore, InCore };

Allocation evaluate_rule(Rule rule, const Situation& theta, const Game& game) {
    switch (rule) {
        case Rule::IProp: return iprop(game);
        case Rule::MProp: return mprop(theta, game);
        case Rule::Shapley: return shapley(game);
        case Rule::Mse: return mse(theta, game);
        default: break;
    }
    throw std::invalid_argument("run_experiment: unsupported rule in the experiment set");
}

struct TrialResult {
    std::vector<TrialVerdict> verdicts;
    int retries = 0;
};

TrialResult run_trial(std::uint64_t master_seed, long trial, int n, std::span<const Rule> rules,
                      const GridSpec& grid) {
    constexpr double kCoreTolerance = 1e-9;
    TrialResult result;
    result.verdicts.resize(rules.size());

    TrialRng rng(trial_seed(master_seed, static_cast<std::uint64_t>(trial)));
    const Situation theta = random_situation(rng, n, grid, {}, &result.retries);
    const Game game = build_game(theta);

    for (std::size_t k = 0; k < rules.size(); ++k) {
        try {
            const Allocation allocation = evaluate_rule(rules[k], theta, game);
            const CoreReport report = core_check(game, allocation, kCoreTolerance);
            result.verdicts[k] = report.in_core ? TrialVerdict::InCore : TrialVerdict::OutOfCore;
        } catch (const UndefinedAllocationError&) {
            result.verdicts[k] = TrialVerdict::Undefined;
        }
    }
    return result;
}

// Worker count: hardware threads, overridable via TC_EXPERIMENT_THREADS.
// Reports are identical for any count; the override mainly serves tests.
unsigned worker_count(long trials) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TC_EXPERIMENT_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1) workers = static_cast<unsigned>(std::min<long>(requested, 64));
    }
    return static_cast<unsigned>(std::min<long>(trials, workers));
}

}  // namespace

ExperimentReport run_experiment(int n_players, long trials, std::span<const Rule> rules,
                                std::uint64_t seed, const GridSpec& grid,
                                int max_failure_samples) {
    if (trials < 1) throw std::invalid_argument("run_experiment: trials must be at least 1");
    if (rules.empty()) throw std::invalid_argument("run_experiment: empty rule set");
    for (Rule rule : rules) {
        if (rule == Rule::MseDelta || rule == Rule::Custom) {
            throw std::invalid_argument("run_experiment: rule set is limited to "
                                        "I-PROP, M-PROP, SHAPLEY, and MSE");
        }
    }
    grid.validate();

    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    const unsigned workers = worker_count(trials);

    auto work = [&](unsigned worker) {
        for (long t = worker; t < trials; t += workers) {
            results[static_cast<std::size_t>(t)] = run_trial(seed, t, n_players, rules, grid);
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& thread : pool) thread.join();
    }

    // Merge in trial order so the report is identical for any worker count.
    ExperimentReport report;
    report.n_players = n_players;
    report.trials = trials;
    report.seed = seed;
    for (Rule rule : rules) report.per_rule.emplace_back(rule, RuleOutcome{});

    std::vector<int> failure_budget(rules.size(), max_failure_samples);
    for (long t = 0; t < trials; ++t) {
        const TrialResult& result = results[static_cast<std::size_t>(t)];
        report.nash_retries += result.retries;
        for (std::size_t k = 0; k < rules.size(); ++k) {
            RuleOutcome& outcome = report.per_rule[k].second;
            switch (result.verdicts[k]) {
                case TrialVerdict::Undefined:
                    ++outcome.undefined;
                    break;
                case TrialVerdict::InCore:
                    ++outcome.evaluated;
                    ++outcome.in_core;
                    break;
                case TrialVerdict::OutOfCore:
                    ++outcome.evaluated;
                    if (failure_budget[k] > 0) {
                        --failure_budget[k];
                        TrialRng rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
                        report.failures.push_back(
                            {rules[k], t, random_situation(rng, n_players, grid)});
                    }
                    break;
            }
        }
    }
    return report;
}

}  // namespace tc
