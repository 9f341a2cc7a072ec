#include "tc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tc {

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("SolverConfig: tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("SolverConfig: max_iterations must be at least 1");
    }
    if (!(damping > 0.0) || damping > 1.0) {
        throw std::invalid_argument("SolverConfig: damping must lie in (0, 1]");
    }
}

ConvergenceError::ConvergenceError(const std::string& what, double residual_, int iterations_)
    : std::runtime_error(what), residual(residual_), iterations(iterations_) {}

namespace {

double lambert_seed(double x) {
    if (x >= 0.0) {
        return std::log1p(x);
    }
    // Branch-point series in q = sqrt(2*(1 + e*x)), accurate near x = -1/e.
    const double q2 = 2.0 * (1.0 + std::exp(1.0) * x);
    const double q = std::sqrt(std::max(q2, 0.0));
    if (q < 1.0) {
        return -1.0 + q * (1.0 + q * (-1.0 / 3.0 + q * (11.0 / 72.0)));
    }
    // Remaining window (-1/(2e), 0): the Taylor series at 0 is plenty as a seed.
    return x * (1.0 + x * (-1.0 + x * 1.5));
}

}  // namespace

double lambert_w0(double x) {
    static const double kMinusInvE = -std::exp(-1.0);
    if (std::isnan(x) || x < kMinusInvE) {
        std::ostringstream msg;
        msg << "lambert_w0: argument " << x << " below -1/e";
        throw std::domain_error(msg.str());
    }
    if (x == kMinusInvE) return -1.0;
    if (x == 0.0) return 0.0;

    const double residual_bound = 1e-12 * std::max(1.0, std::abs(x));
    double w = lambert_seed(x);
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= residual_bound) break;
        // Halley step for f(w) = w*e^w - x.
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        const double step = f / denom;
        if (!std::isfinite(step)) break;
        w -= step;
        if (w < -1.0) w = -1.0;   // W0 never drops below the branch point
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

std::vector<double> fixed_point(const VectorMap& map, std::vector<double> start,
                                const SolverConfig& config) {
    config.validate();
    std::vector<double> x = std::move(start);
    double damping = config.damping;
    double previous_residual = std::numeric_limits<double>::infinity();
    double residual = previous_residual;

    for (int it = 0; it < config.max_iterations; ++it) {
        std::vector<double> fx = map(x);
        if (fx.size() != x.size()) {
            throw std::invalid_argument("fixed_point: map changed the vector dimension");
        }
        residual = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            residual = std::max(residual, std::abs(fx[i] - x[i]));
        }
        if (residual <= config.tolerance) return x;
        if (residual > previous_residual) damping *= 0.5;
        previous_residual = residual;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = (1.0 - damping) * x[i] + damping * fx[i];
        }
    }
    std::ostringstream msg;
    msg << "fixed_point: no convergence after " << config.max_iterations
        << " iterations (residual " << residual << ", tolerance " << config.tolerance << ")";
    throw ConvergenceError(msg.str(), residual, config.max_iterations);
}

namespace {

// Per-dimension search box sampled with evenly spaced points.
struct GridSearch {
    std::vector<double> lo, hi;
    int resolution;

    double point(int dim, int step) const {
        if (resolution == 1) return 0.5 * (lo[dim] + hi[dim]);
        return lo[dim] + (hi[dim] - lo[dim]) * step / (resolution - 1);
    }
};

}  // namespace

OraclePoint oracle_optimize(const std::function<double(std::span<const double>)>& objective,
                            double share_budget, std::span<const double> alphas, double beta,
                            int resolution) {
    if (!(share_budget > 0.0)) {
        throw std::invalid_argument("oracle_optimize: share_budget must be positive");
    }
    if (alphas.empty()) {
        throw std::invalid_argument("oracle_optimize: empty coalition");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("oracle_optimize: beta must be positive");
    }
    if (resolution < 2) {
        throw std::invalid_argument("oracle_optimize: resolution too small");
    }

    const int m = static_cast<int>(alphas.size());
    if (m == 1) {
        // The constraint pins the single point exp(alpha - beta*x) = budget.
        std::vector<double> x{(alphas[0] - std::log(share_budget)) / beta};
        const double value = objective(x);
        return {std::move(x), value};
    }

    // Weights are gridded as log ratios to the last member and normalized to
    // the budget, so every member can take any relative size down to 1e-9 of
    // the others. The span covers the whole dynamic range either way.
    const double log_span = std::log(1e9);
    const double log_budget = std::log(share_budget);

    GridSearch grid;
    grid.resolution = resolution;
    grid.lo.assign(m - 1, -log_span);
    grid.hi.assign(m - 1, log_span);

    std::vector<double> x(m);
    std::vector<double> log_ratio(m, 0.0);   // entry m-1 stays pinned at 0
    std::vector<int> steps(m - 1, 0);
    std::vector<double> best_ratio(m - 1, 0.0);
    OraclePoint best;
    best.value = -std::numeric_limits<double>::infinity();

    constexpr int kRounds = 3;
    for (int round = 0; round < kRounds; ++round) {
        std::fill(steps.begin(), steps.end(), 0);
        bool done = false;
        while (!done) {
            double total = 1.0;   // the pinned member's ratio
            for (int d = 0; d < m - 1; ++d) {
                log_ratio[d] = grid.point(d, steps[d]);
                total += std::exp(log_ratio[d]);
            }
            // ln w_i = ln(budget * ratio_i / total)
            const double shift = log_budget - std::log(total);
            for (int i = 0; i < m; ++i) {
                x[i] = (alphas[i] - (log_ratio[i] + shift)) / beta;
            }
            const double value = objective(x);
            if (value > best.value) {
                best.value = value;
                best.x = x;
                for (int d = 0; d < m - 1; ++d) best_ratio[d] = log_ratio[d];
            }
            // Advance the odometer.
            int d = 0;
            while (d < m - 1 && ++steps[d] == resolution) steps[d++] = 0;
            done = (d == m - 1);
        }
        if (round + 1 < kRounds) {
            for (int d = 0; d < m - 1; ++d) {
                const double width = (grid.hi[d] - grid.lo[d]) / 10.0;
                grid.lo[d] = std::max(best_ratio[d] - 0.5 * width, -log_span);
                grid.hi[d] = std::min(grid.lo[d] + width, log_span);
            }
        }
    }
    return best;
}

}  // namespace tc
