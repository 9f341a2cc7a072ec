#pragma once

#include "tc/model.hpp"

// Hand-picked instances reused across the suites.
namespace fixtures {

// Three operators with mixed margins; operator 1 prices below cost, so its
// status-quo profit is negative while the collaborative optimum is not.
inline tc::Situation demo3() {
    return {{6.0, 8.0, 15.0}, {8.0, 4.0, 1.0}, {1.0, 0.5, 1.5}, 0.36, false};
}

// Low price sensitivity; the induced game is neither monotonic nor convex.
inline tc::Situation lowbeta3() {
    return {{0.5, 0.5, 2.0}, {0.5, 1.0, 1.5}, {1.0, 2.0, 1.5}, 0.1, false};
}

// Every operator priced exactly 1/beta above cost: collaborating gains nothing.
inline tc::Situation flat_margin3() {
    const double beta = 0.5;
    tc::Situation theta;
    theta.costs = {1.0, 2.5, 0.75};
    theta.alphas = {2.0, 1.0, 1.5};
    theta.beta = beta;
    for (double c : theta.costs) theta.prices.push_back(c + 1.0 / beta);
    return theta;
}

}  // namespace fixtures
