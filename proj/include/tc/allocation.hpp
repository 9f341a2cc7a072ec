#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tc/game.hpp"

namespace tc {

enum class Rule { IProp, MProp, Shapley, Mse, MseDelta, Custom };

// Canonical display names: "I-PROP", "M-PROP", "SHAPLEY", "MSE", "MSE-DELTA", "CUSTOM".
std::string_view rule_name(Rule rule);
// Accepts the canonical names and lowercase CLI spellings ("iprop", "mse-delta", ...).
std::optional<Rule> rule_from_name(std::string_view name);

// A payoff vector together with the rule that produced it. Every rule output
// is efficient: payoffs sum to the worth of the grand coalition.
struct Allocation {
    std::vector<double> payoffs;
    Rule rule = Rule::Custom;
    std::optional<double> phi;         // exchange price, set by the MSE rules
    std::optional<double> delta;       // payback fraction, set by MSE-DELTA
    std::optional<double> threshold;   // largest delta with a core guarantee, set by MSE-DELTA
};

// Thrown when a rule is genuinely undefined for the given game
// (e.g. a vanishing proportionality denominator).
struct UndefinedAllocationError : std::domain_error {
    using std::domain_error::domain_error;
};

// Splits v(N) in proportion to the singleton worths v({i}).
// Throws UndefinedAllocationError when |sum_j v({j})| < 1e-12.
Allocation iprop(const Game& game);

// Splits v(N) in proportion to the status-quo market shares.
Allocation mprop(const Situation& theta, const Game& game);

// Shapley value by exact enumeration over all 2^n coalitions.
Allocation shapley(const Game& game);

// Market share exchange rule: each operator keeps the profit it earns at the
// collaborative prices and settles the share it gained or lost at the exchange
// price phi. Requires the plain game built from theta.
Allocation mse(const Situation& theta, const Game& game);

// Exchange price per unit of market share, closed form:
// phi = (ln(D(c)/D(p)) - 1) / beta.
double mse_exchange_price(const Situation& theta);

// Same price from its definition: the collaborative gain over a zero-gain
// benchmark situation (costs p_i - 1/beta, identical total share), divided by
// the total market share. Agrees with the closed form to ~1e-10; both are
// computed and cross-checked inside mse().
double mse_exchange_price_definitional(const Situation& theta);

// Scaled rule (1-delta)*MSE for the society-payback game. delta must lie in (0,1).
Allocation mse_delta(const Situation& theta, const Game& game, double delta);

// Largest delta for which (1-delta)*MSE is guaranteed to be stable in the
// payback game: 1 - max_i v({i}) / MSE_i. Throws std::domain_error when some
// MSE_i is exactly zero.
double mse_delta_threshold(const Situation& theta, const Game& game);

struct CoreReport {
    bool in_core = false;
    Coalition worst_coalition;   // nonempty coalition with the largest deficit
    double worst_deficit = 0.0;  // v(M) - sum_{i in M} x_i; positive means violated
    double tolerance = 0.0;
};

struct CoreViolation {
    Coalition coalition;
    double deficit;
};

// Checks efficiency |sum x_i - v(N)| <= tolerance and stability
// sum_{i in M} x_i >= v(M) - tolerance over every coalition.
CoreReport core_check(const Game& game, const Allocation& allocation, double tolerance = 1e-9);

// All violated coalitions, by descending deficit.
std::vector<CoreViolation> core_violations(const Game& game, const Allocation& allocation,
                                           double tolerance = 1e-9);

}  // namespace tc
