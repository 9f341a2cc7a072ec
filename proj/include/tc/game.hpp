#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tc/coalition.hpp"
#include "tc/model.hpp"

namespace tc {

enum class GameKind { Plain, DeltaScaled };

// Cooperative game over the operators of a Situation: one worth per coalition,
// stored densely and indexed by Coalition::bits.
struct Game {
    int n = 0;
    GameKind kind = GameKind::Plain;
    double delta = 0.0;                 // payback fraction; meaningful for DeltaScaled only
    std::vector<double> values;         // 2^n entries, values[m.bits] = v(m)
    std::optional<Situation> source;    // generating situation, when built from one

    Coalition grand() const { return Coalition::all(n); }
    double value(Coalition m) const;    // bounds-checked lookup
    std::size_t num_coalitions() const { return values.size(); }
};

// Worth of a nonempty coalition m: the best joint profit its members reach by
// repricing while their combined share stays fixed and outsiders keep theta's
// prices. Closed form D^m(p) / (beta*(D^N(p)+1)) * ln(D^m(c) / D^m(p)).
// Throws std::invalid_argument for the empty coalition.
double coalition_value(const Situation& theta, Coalition m);

// Evaluates coalition_value for all 2^n coalitions (empty set worth 0).
// Throws std::invalid_argument when n exceeds 24.
Game build_game(const Situation& theta);

// Society-payback variant: coalitions of size >= 2 keep (1-delta) of their
// worth, singletons and the empty set are unchanged. Requires a plain game
// and delta in (0,1).
Game build_delta_game(const Game& game, double delta);

// Largest payback fraction that leaves any reason to collaborate:
// 1 - sum_i v({i}) / v(N). Throws std::domain_error when v(N) <= 0.
double max_feasible_delta(const Game& game);

struct PropertyReport {
    bool monotonic = true;
    bool superadditive = true;
    bool convex = true;
    double tolerance = 0.0;
    // First violating pair (subset, superset) over nonempty coalitions.
    std::optional<std::pair<Coalition, Coalition>> monotonic_witness;
    // First disjoint pair with v(M) + v(K) > v(M u K).
    std::optional<std::pair<Coalition, Coalition>> superadditive_witness;
    struct ConvexWitness {
        Coalition smaller;   // M
        Coalition larger;    // K, with M subset of K
        int player;          // i whose marginal contribution shrinks from M to K
    };
    std::optional<ConvexWitness> convex_witness;
};

// Checks monotonicity, superadditivity, and convexity with an additive
// tolerance, reporting the first violation found for each failed property.
PropertyReport check_properties(const Game& game, double tolerance = 1e-9);

}  // namespace tc
