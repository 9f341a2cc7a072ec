#include <cmath>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "tc/experiment.hpp"
#include "tc/game.hpp"

using tc::Coalition;

namespace {

// Mask-indexed worths of the demo instance, all eight coalitions.
constexpr double kDemoValues[] = {0.0,
                                  -0.43958615873859529,
                                  0.25955819004376339,
                                  0.23017136882570094,
                                  0.19868961531430569,
                                  1.485205767525017,
                                  0.75565308382455963,
                                  1.7873124050309173};

// Same for the low-beta instance (not monotonic, not convex).
constexpr double kLowBetaValues[] = {0.0,
                                     0.0,
                                     -0.24603886172913268,
                                     -0.24437193382974614,
                                     0.12844354868478129,
                                     0.12976699886175297,
                                     -0.10907065516137199,
                                     -0.10891560532085456};

tc::Game synthetic_game(int n, std::vector<double> values) {
    tc::Game game;
    game.n = n;
    game.values = std::move(values);
    return game;
}

}  // namespace

TEST_CASE("coalition_value on the demo instance") {
    const tc::Situation theta = fixtures::demo3();
    CHECK(tc::coalition_value(theta, Coalition{0b101}) ==
          doctest::Approx(1.485205767525017).epsilon(1e-13));
    // A singleton cannot reprice without losing share, so it keeps its profit.
    const double single = tc::coalition_value(theta, Coalition{0b010});
    CHECK(single == doctest::Approx(0.25955819004376339).epsilon(1e-13));
    CHECK(std::abs(single - tc::market_state(theta).profits[1]) <= 1e-12);

    CHECK_THROWS_AS(tc::coalition_value(theta, Coalition::empty()), std::invalid_argument);
    CHECK_THROWS_AS(tc::coalition_value(theta, Coalition{0b1000}), std::invalid_argument);
}

TEST_CASE("build_game reproduces both reference games") {
    const tc::Game demo = tc::build_game(fixtures::demo3());
    REQUIRE(demo.values.size() == 8);
    CHECK(demo.values[0] == 0.0);
    for (std::size_t mask = 0; mask < 8; ++mask) {
        CHECK(demo.values[mask] == doctest::Approx(kDemoValues[mask]).epsilon(1e-13));
    }

    const tc::Game low = tc::build_game(fixtures::lowbeta3());
    for (std::size_t mask = 0; mask < 8; ++mask) {
        CHECK(low.values[mask] == doctest::Approx(kLowBetaValues[mask]).epsilon(1e-12));
    }

    // Dense table agrees with the direct per-coalition evaluation bit for bit.
    const tc::Situation theta = fixtures::demo3();
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
        CHECK(demo.values[mask] == tc::coalition_value(theta, Coalition{mask}));
    }
}

TEST_CASE("build_game refuses oversized player sets") {
    tc::Situation theta;
    theta.prices.assign(25, 1.0);
    theta.costs.assign(25, 0.5);
    theta.alphas.assign(25, 1.0);
    theta.beta = 0.5;
    CHECK_THROWS_AS(tc::build_game(theta), std::invalid_argument);
}

TEST_CASE("singleton and grand-coalition worths stay consistent") {
    std::mt19937_64 seeder(41);
    for (int trial = 0; trial < 200; ++trial) {
        tc::TrialRng rng(seeder());
        const int n = 2 + trial % 4;
        const tc::Situation theta = tc::random_situation(rng, n, tc::GridSpec::standard());
        const tc::Game game = tc::build_game(theta);
        const tc::MarketState market = tc::market_state(theta);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(game.value(Coalition::single(i)) - market.profits[i]) <= 1e-10);
        }
        CHECK(std::abs(game.values.back() - tc::optimal_prices(theta).joint_profit) <= 1e-12);
    }
}

TEST_CASE("games from equilibrium draws are superadditive") {
    std::mt19937_64 seeder(43);
    for (int trial = 0; trial < 1000; ++trial) {
        tc::TrialRng rng(seeder());
        const tc::Situation theta =
            tc::random_situation(rng, 3 + trial % 3, tc::GridSpec::standard());
        const tc::PropertyReport report = tc::check_properties(tc::build_game(theta));
        CHECK(report.superadditive);
    }
}

TEST_CASE("build_delta_game scales only the multi-member coalitions") {
    const tc::Game game = tc::build_game(fixtures::demo3());
    const tc::Game scaled = tc::build_delta_game(game, 0.08);

    CHECK(scaled.kind == tc::GameKind::DeltaScaled);
    CHECK(scaled.delta == 0.08);
    for (std::uint32_t mask : {0b001u, 0b010u, 0b100u, 0u}) {
        CHECK(scaled.values[mask] == game.values[mask]);   // exactly unchanged
    }
    CHECK(scaled.values[0b011] == doctest::Approx(0.21175765931964486).epsilon(1e-13));
    CHECK(scaled.values[0b101] == doctest::Approx(1.3663893061230157).epsilon(1e-13));
    CHECK(scaled.values[0b110] == doctest::Approx(0.69520083711859486).epsilon(1e-13));
    CHECK(scaled.values[0b111] == doctest::Approx(1.6443274126284439).epsilon(1e-13));

    SUBCASE("halving a doubled grand coalition lands exactly on the singleton sum") {
        const tc::Game toy = synthetic_game(2, {0.0, 1.0, 1.0, 4.0});
        CHECK(tc::build_delta_game(toy, 0.5).values[3] == 2.0);
    }
    SUBCASE("rejects out-of-range delta and double scaling") {
        CHECK_THROWS_AS(tc::build_delta_game(game, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(tc::build_delta_game(game, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(tc::build_delta_game(game, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(tc::build_delta_game(scaled, 0.1), std::invalid_argument);
    }
}

TEST_CASE("max_feasible_delta") {
    const tc::Game game = tc::build_game(fixtures::demo3());
    const double threshold = tc::max_feasible_delta(game);
    CHECK(threshold == doctest::Approx(0.98955882219194301).epsilon(1e-12));
    // Sanity against the rounded singleton sum 0.019 and grand worth 1.787.
    CHECK(std::abs(threshold - (1.0 - 0.019 / 1.787)) <= 1e-3);

    SUBCASE("boundary: singletons already exhaust the grand coalition") {
        CHECK(tc::max_feasible_delta(synthetic_game(2, {0.0, 0.5, 1.5, 2.0})) == 0.0);
    }
    SUBCASE("boundary: worthless singletons leave everything to pay back") {
        CHECK(tc::max_feasible_delta(synthetic_game(2, {0.0, 0.0, 0.0, 3.0})) == 1.0);
    }
    SUBCASE("undefined for an unprofitable grand coalition") {
        CHECK_THROWS_AS(tc::max_feasible_delta(tc::build_game(fixtures::lowbeta3())),
                        std::domain_error);
    }
}

TEST_CASE("check_properties classifies the reference games") {
    SUBCASE("demo instance: superadditive") {
        const tc::PropertyReport report = tc::check_properties(tc::build_game(fixtures::demo3()));
        CHECK(report.superadditive);
        CHECK(!report.superadditive_witness.has_value());
    }
    SUBCASE("low-beta instance: superadditive but neither monotonic nor convex") {
        const tc::PropertyReport report =
            tc::check_properties(tc::build_game(fixtures::lowbeta3()));
        CHECK(report.superadditive);

        CHECK(!report.monotonic);
        REQUIRE(report.monotonic_witness.has_value());
        CHECK(report.monotonic_witness->first == Coalition{0b001});
        CHECK(report.monotonic_witness->second == Coalition{0b011});

        CHECK(!report.convex);
        REQUIRE(report.convex_witness.has_value());
        CHECK(report.convex_witness->smaller == Coalition{0b010});
        CHECK(report.convex_witness->larger == Coalition{0b110});
        CHECK(report.convex_witness->player == 0);
    }
    SUBCASE("a convex synthetic game passes everything") {
        // v(M) = |M|^2 is monotone, superadditive, and convex.
        std::vector<double> values(8);
        for (std::uint32_t mask = 0; mask < 8; ++mask) {
            const double size = Coalition{mask}.size();
            values[mask] = size * size;
        }
        const tc::PropertyReport report = tc::check_properties(synthetic_game(3, values));
        CHECK(report.monotonic);
        CHECK(report.superadditive);
        CHECK(report.convex);
    }
    SUBCASE("a subadditive synthetic game is flagged with a witness") {
        const tc::PropertyReport report =
            tc::check_properties(synthetic_game(2, {0.0, 2.0, 2.0, 1.0}));
        CHECK(!report.superadditive);
        REQUIRE(report.superadditive_witness.has_value());
        const auto [m, k] = *report.superadditive_witness;
        CHECK(m.disjoint_from(k));
        CHECK((m.bits | k.bits) == 0b11u);
    }
}
