#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tc {

// Tolerances and iteration limits shared by the iterative solvers.
struct SolverConfig {
    double tolerance = 1e-10;   // residual bound, dimensionless
    int max_iterations = 10'000;
    double damping = 1.0;       // step factor in (0,1]; halved automatically when the residual grows

    // Throws std::invalid_argument when any field is out of range.
    void validate() const;
};

// Thrown when an iterative solver exhausts its iteration budget.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual, int iterations);
    double residual;
    int iterations;
};

// Principal branch W0 of the Lambert W function: the w >= -1 solving w*e^w = x.
// Defined for x >= -1/e; throws std::domain_error below that.
// Halley iteration seeded with ln(1+x) for x >= 0 and a branch-point series near -1/e;
// residual target 1e-12 * max(1, |x|).
double lambert_w0(double x);

using VectorMap = std::function<std::vector<double>(const std::vector<double>&)>;

// Damped fixed-point iteration x <- (1-d)*x + d*map(x), stopping once
// ||map(x) - x||_inf <= config.tolerance. The damping factor is halved whenever
// the residual increases. Throws ConvergenceError after max_iterations.
std::vector<double> fixed_point(const VectorMap& map, std::vector<double> start,
                                const SolverConfig& config = {});

struct OraclePoint {
    std::vector<double> x;
    double value = 0.0;
};

// Brute-force maximizer over the constraint set
//   { x : sum_i exp(alphas[i] - beta*x[i]) = share_budget }.
// Feasible points are parametrized by weights w on the scaled simplex
// { w_i > 0, sum_i w_i = share_budget } via x_i = (alphas[i] - ln w_i) / beta,
// so the constraint holds exactly by construction. The weight box is searched
// on a log-spaced grid with `resolution` points per free weight, refined over
// three rounds that each shrink the box by 10x around the incumbent.
//
// Deliberately independent of any closed-form optimum: used as a verification
// oracle for the analytic pricing results.
OraclePoint oracle_optimize(const std::function<double(std::span<const double>)>& objective,
                            double share_budget, std::span<const double> alphas, double beta,
                            int resolution);

}  // namespace tc
