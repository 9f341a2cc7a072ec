#include "tc/game.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tc {

namespace {

constexpr int kMaxPlayers = 24;   // dense 2^n storage; experiments use n <= 5

double worth(double d_p, double d_c, double d_total, double beta) {
    return d_p / (beta * (d_total + 1.0)) * std::log(d_c / d_p);
}

}  // namespace

double Game::value(Coalition m) const {
    if (m.bits >= values.size()) {
        throw std::out_of_range("Game::value: coalition " + to_string(m) +
                                " outside a " + std::to_string(n) + "-player game");
    }
    return values[m.bits];
}

double coalition_value(const Situation& theta, Coalition m) {
    if (m.is_empty()) {
        throw std::invalid_argument("coalition_value: empty coalition (worth 0 by definition)");
    }
    const int n = theta.size();
    if (m.bits >= (std::uint32_t{1} << n)) {
        throw std::invalid_argument("coalition_value: coalition " + to_string(m) +
                                    " names players beyond n=" + std::to_string(n));
    }
    const double d_p = d_aggregate(theta, m, theta.prices);
    const double d_c = d_aggregate(theta, m, theta.costs);
    const double d_total = d_aggregate(theta, Coalition::all(n), theta.prices);
    return worth(d_p, d_c, d_total, theta.beta);
}

Game build_game(const Situation& theta) {
    theta.validate();
    const int n = theta.size();
    if (n > kMaxPlayers) {
        throw std::invalid_argument("build_game: n=" + std::to_string(n) + " exceeds the " +
                                    std::to_string(kMaxPlayers) + "-player enumeration bound");
    }
    const std::size_t count = std::size_t{1} << n;

    std::vector<double> w_p(n), w_c(n);
    for (int i = 0; i < n; ++i) {
        w_p[i] = std::exp(theta.alphas[i] - theta.beta * theta.prices[i]);
        w_c[i] = std::exp(theta.alphas[i] - theta.beta * theta.costs[i]);
    }

    // Subset sums via the highest set bit, so each aggregate accumulates in
    // ascending player order exactly like d_aggregate does.
    std::vector<double> d_p(count, 0.0), d_c(count, 0.0);
    for (std::size_t mask = 1; mask < count; ++mask) {
        const int top = std::bit_width(mask) - 1;
        const std::size_t rest = mask ^ (std::size_t{1} << top);
        d_p[mask] = d_p[rest] + w_p[top];
        d_c[mask] = d_c[rest] + w_c[top];
    }

    Game game;
    game.n = n;
    game.kind = GameKind::Plain;
    game.source = theta;
    game.values.resize(count);
    game.values[0] = 0.0;
    const double d_total = d_p[count - 1];
    for (std::size_t mask = 1; mask < count; ++mask) {
        game.values[mask] = worth(d_p[mask], d_c[mask], d_total, theta.beta);
    }
    return game;
}

Game build_delta_game(const Game& game, double delta) {
    if (game.kind != GameKind::Plain) {
        throw std::invalid_argument("build_delta_game: the game is already delta-scaled");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
        std::ostringstream msg;
        msg << "build_delta_game: delta " << delta << " outside (0, 1)";
        throw std::invalid_argument(msg.str());
    }
    Game scaled = game;
    scaled.kind = GameKind::DeltaScaled;
    scaled.delta = delta;
    for (std::size_t mask = 0; mask < game.values.size(); ++mask) {
        if (std::popcount(mask) >= 2) scaled.values[mask] = (1.0 - delta) * game.values[mask];
    }
    return scaled;
}

double max_feasible_delta(const Game& game) {
    if (game.kind != GameKind::Plain) {
        throw std::invalid_argument("max_feasible_delta: expects a plain game");
    }
    const double grand = game.values.back();
    if (!(grand > 0.0)) {
        std::ostringstream msg;
        msg << "max_feasible_delta: undefined for v(N) = " << grand << " <= 0";
        throw std::domain_error(msg.str());
    }
    double singleton_sum = 0.0;
    for (int i = 0; i < game.n; ++i) singleton_sum += game.value(Coalition::single(i));
    return 1.0 - singleton_sum / grand;
}

PropertyReport check_properties(const Game& game, double tolerance) {
    PropertyReport report;
    report.tolerance = tolerance;
    const std::size_t count = game.values.size();
    const auto& v = game.values;

    // Monotonicity over nonempty coalitions: dropping one member never raises
    // the worth. Checked by single-member removal, which covers all nested pairs.
    for (std::size_t mask = 1; mask < count && report.monotonic; ++mask) {
        for (int i = 0; i < game.n; ++i) {
            if (!((mask >> i) & 1u)) continue;
            const std::size_t smaller = mask ^ (std::size_t{1} << i);
            if (smaller == 0) continue;
            if (v[smaller] > v[mask] + tolerance) {
                report.monotonic = false;
                report.monotonic_witness = {Coalition{static_cast<std::uint32_t>(smaller)},
                                            Coalition{static_cast<std::uint32_t>(mask)}};
                break;
            }
        }
    }

    // Superadditivity: every disjoint pair (M, K) satisfies v(M) + v(K) <= v(M u K).
    for (std::size_t sum = 1; sum < count && report.superadditive; ++sum) {
        // Proper nonempty submasks of `sum`, each counted once per unordered pair.
        for (std::size_t m = (sum - 1) & sum; m != 0; m = (m - 1) & sum) {
            const std::size_t k = sum ^ m;
            if (m > k) continue;
            if (v[m] + v[k] > v[sum] + tolerance) {
                report.superadditive = false;
                report.superadditive_witness = {Coalition{static_cast<std::uint32_t>(m)},
                                                Coalition{static_cast<std::uint32_t>(k)}};
                break;
            }
        }
    }

    // Convexity: i's marginal contribution may not shrink when the coalition
    // grows. The pairwise form v(B+i+j) + v(B) >= v(B+i) + v(B+j) is equivalent.
    for (std::size_t base = 0; base < count && report.convex; ++base) {
        for (int i = 0; i < game.n && report.convex; ++i) {
            if ((base >> i) & 1u) continue;
            for (int j = i + 1; j < game.n; ++j) {
                if ((base >> j) & 1u) continue;
                const std::size_t with_i = base | (std::size_t{1} << i);
                const std::size_t with_j = base | (std::size_t{1} << j);
                const std::size_t with_both = with_i | with_j;
                if (v[with_both] + v[base] < v[with_i] + v[with_j] - tolerance) {
                    report.convex = false;
                    report.convex_witness = PropertyReport::ConvexWitness{
                        Coalition{static_cast<std::uint32_t>(base)},
                        Coalition{static_cast<std::uint32_t>(with_j)}, i};
                    break;
                }
            }
        }
    }
    return report;
}

}  // namespace tc
