#pragma once

#include <span>
#include <vector>

#include "tc/coalition.hpp"
#include "tc/numerics.hpp"

namespace tc {

// One market instance: n operators with prices p, unit costs c,
// alternative-specific constants alpha, and a common price sensitivity beta.
// Travelers pick operator i with probability proportional to exp(alpha_i - beta*p_i),
// against an outside option of weight 1.
struct Situation {
    std::vector<double> prices;
    std::vector<double> costs;
    std::vector<double> alphas;
    double beta = 1.0;
    // Set when prices came from the best-response solver; validate() then also
    // checks the equilibrium residual.
    bool equilibrium = false;

    int size() const { return static_cast<int>(prices.size()); }

    // Throws std::invalid_argument on mismatched lengths, non-finite entries,
    // beta <= 0, or (when flagged equilibrium) a best-response residual > 1e-8.
    void validate() const;
};

struct MarketState {
    std::vector<double> shares;    // per-operator market share, each in (0,1)
    double outside_share = 0.0;    // probability of the no-buy option
    std::vector<double> profits;   // (p_i - c_i) * share_i
};

// Coalition aggregate sum_{i in m} exp(alpha_i - beta*x[i]); 0 for the empty set.
// x must cover all members (length n vector; non-member entries are ignored).
double d_aggregate(const Situation& theta, Coalition m, std::span<const double> x);

// Logit market shares, the outside share, and per-operator profits at theta's prices.
MarketState market_state(const Situation& theta);

// Simultaneous best-response prices: solves the per-operator first-order
// conditions p_i = c_i + (1 + W(exp(alpha_i - 1 - beta*c_i) / A_i)) / beta with
// A_i = 1 + sum_{j != i} exp(alpha_j - beta*p_j), as a damped fixed point.
// Every solution has p_i - c_i > 1/beta. Throws ConvergenceError on failure.
std::vector<double> nash_prices(std::span<const double> costs, std::span<const double> alphas,
                                double beta, const SolverConfig& config = {});

// Residual max_i |p_i - best_response_i(p)| of the equilibrium conditions.
double nash_residual(const Situation& theta);

struct CollaborativeOptimum {
    std::vector<double> prices;   // p*_i = c_i + ln(D(c)/D(p)) / beta
    double joint_profit = 0.0;    // D(p) / (beta*(D(p)+1)) * ln(D(c)/D(p))
};

// Joint-profit-maximizing prices when all operators collaborate under the
// constraint that their total market share stays at the status-quo level.
CollaborativeOptimum optimal_prices(const Situation& theta);

}  // namespace tc
