#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tc/allocation.hpp"
#include "tc/model.hpp"

namespace tc {

// Discrete parameter grids the random instances are drawn from.
struct GridSpec {
    std::vector<double> cost_grid;    // defaults: 0.5, 1.0, ..., 15.0
    std::vector<double> alpha_grid;   // defaults: 0.5, 1.0, ..., 15.0
    std::vector<double> beta_grid;    // defaults: 0.1, 0.2, ..., 1.0

    static GridSpec standard();
    void validate() const;   // all grids nonempty, entries finite and positive
};

// Seedable generator with a portable bounded draw. mt19937_64 output is fully
// specified by the standard; the unbiased rejection step keeps index draws
// identical across platforms (std::uniform_int_distribution is not portable).
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    // Uniform draw from {0, 1, ..., bound-1}.
    std::size_t index(std::size_t bound);

private:
    std::mt19937_64 engine_;
};

// Derives the seed of one trial's private stream from the master seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

// Draws costs and alphas uniformly from their grids, one beta from its grid,
// and prices from the best-response solver; the result is flagged equilibrium.
// Draws that fail to converge are redrawn (count reported via *retries);
// 100 consecutive failures abort with ConvergenceError.
Situation random_situation(TrialRng& rng, int n, const GridSpec& grid,
                           const SolverConfig& config = {}, int* retries = nullptr);

struct RuleOutcome {
    long evaluated = 0;   // trials where the rule produced a payoff vector
    long in_core = 0;
    long undefined = 0;   // trials where the rule was undefined (evaluated + undefined = trials)
};

struct FailureSample {
    Rule rule;
    long trial;
    Situation situation;
};

struct ExperimentReport {
    int n_players = 0;
    long trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<Rule, RuleOutcome>> per_rule;   // in the requested rule order
    std::vector<FailureSample> failures;                  // first few out-of-core draws per rule
    long nash_retries = 0;

    double fraction(Rule rule) const;   // in_core / trials
};

// Monte Carlo core-membership study: `trials` random situations, each rule
// evaluated on the resulting game and tested for core membership at absolute
// tolerance 1e-9. Deterministic for a given (seed, n, trials, grid, rules):
// trial t always uses the stream seeded by trial_seed(seed, t), and trials may
// run on several threads with results merged in trial order.
ExperimentReport run_experiment(int n_players, long trials, std::span<const Rule> rules,
                                std::uint64_t seed, const GridSpec& grid = GridSpec::standard(),
                                int max_failure_samples = 5);

}  // namespace tc
