#include "tc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tc {

namespace {

void require_finite(const std::vector<double>& v, const char* name) {
    for (double value : v) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument(std::string("Situation: non-finite entry in ") + name);
        }
    }
}

// Best responses for every operator at the current price vector.
std::vector<double> best_response(std::span<const double> prices, std::span<const double> costs,
                                  std::span<const double> alphas, double beta) {
    const std::size_t n = prices.size();
    std::vector<double> weights(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = std::exp(alphas[i] - beta * prices[i]);
        total += weights[i];
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rivals = 1.0 + (total - weights[i]);
        const double arg = std::exp(alphas[i] - 1.0 - beta * costs[i]) / rivals;
        next[i] = costs[i] + (1.0 + lambert_w0(arg)) / beta;
    }
    return next;
}

}  // namespace

void Situation::validate() const {
    const std::size_t n = prices.size();
    if (n == 0) throw std::invalid_argument("Situation: needs at least one operator");
    if (costs.size() != n || alphas.size() != n) {
        std::ostringstream msg;
        msg << "Situation: vector lengths disagree (p:" << n << " c:" << costs.size()
            << " alpha:" << alphas.size() << ")";
        throw std::invalid_argument(msg.str());
    }
    require_finite(prices, "p");
    require_finite(costs, "c");
    require_finite(alphas, "alpha");
    if (!std::isfinite(beta) || !(beta > 0.0)) {
        throw std::invalid_argument("Situation: beta must be positive and finite");
    }
    if (equilibrium) {
        const double residual = nash_residual(*this);
        if (!(residual <= 1e-8)) {
            std::ostringstream msg;
            msg << "Situation: flagged equilibrium but best-response residual is " << residual;
            throw std::invalid_argument(msg.str());
        }
    }
}

double d_aggregate(const Situation& theta, Coalition m, std::span<const double> x) {
    const int n = theta.size();
    if (x.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("d_aggregate: price vector does not cover the operators");
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (m.contains(i)) total += std::exp(theta.alphas[i] - theta.beta * x[i]);
    }
    return total;
}

MarketState market_state(const Situation& theta) {
    theta.validate();
    const int n = theta.size();
    MarketState state;
    state.shares.resize(n);
    state.profits.resize(n);
    const double d_total = d_aggregate(theta, Coalition::all(n), theta.prices);
    const double denom = 1.0 + d_total;
    for (int i = 0; i < n; ++i) {
        state.shares[i] = std::exp(theta.alphas[i] - theta.beta * theta.prices[i]) / denom;
        state.profits[i] = (theta.prices[i] - theta.costs[i]) * state.shares[i];
    }
    state.outside_share = 1.0 / denom;
    return state;
}

std::vector<double> nash_prices(std::span<const double> costs, std::span<const double> alphas,
                                double beta, const SolverConfig& config) {
    if (costs.size() != alphas.size() || costs.empty()) {
        throw std::invalid_argument("nash_prices: costs and alphas must have equal, nonzero length");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("nash_prices: beta must be positive");

    // Start inside the feasible margin region p_i > c_i + 1/beta.
    std::vector<double> start(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i) start[i] = costs[i] + 2.0 / beta;

    auto map = [&](const std::vector<double>& p) { return best_response(p, costs, alphas, beta); };
    return fixed_point(map, std::move(start), config);
}

double nash_residual(const Situation& theta) {
    const std::vector<double> response =
        best_response(theta.prices, theta.costs, theta.alphas, theta.beta);
    double residual = 0.0;
    for (int i = 0; i < theta.size(); ++i) {
        residual = std::max(residual, std::abs(response[i] - theta.prices[i]));
    }
    return residual;
}

CollaborativeOptimum optimal_prices(const Situation& theta) {
    theta.validate();
    const int n = theta.size();
    const Coalition everyone = Coalition::all(n);
    const double d_p = d_aggregate(theta, everyone, theta.prices);
    const double d_c = d_aggregate(theta, everyone, theta.costs);
    const double markup = std::log(d_c / d_p) / theta.beta;

    CollaborativeOptimum result;
    result.prices.resize(n);
    for (int i = 0; i < n; ++i) result.prices[i] = theta.costs[i] + markup;
    result.joint_profit = d_p / (theta.beta * (d_p + 1.0)) * std::log(d_c / d_p);
    return result;
}

}  // namespace tc
