#include <cmath>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "tc/model.hpp"
#include "tc/numerics.hpp"

using tc::lambert_w0;

namespace {

// Independent root finder for w*e^w = x, bracketing the principal branch on
// [lower, upper]. Used as the oracle the Halley implementation is checked against.
double bisect_lambert(double x, double lower, double upper) {
    auto f = [x](double w) { return w * std::exp(w) - x; };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lower + upper);
        if (f(mid) <= 0.0) {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    return 0.5 * (lower + upper);
}

}  // namespace

TEST_CASE("lambert_w0 fixed values") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambert_w0(-std::exp(-1.0)) == -1.0);

    const double w = lambert_w0(2.5);
    CHECK(std::abs(w * std::exp(w) - 2.5) < 1e-12);
    CHECK(w == doctest::Approx(bisect_lambert(2.5, 0.0, std::log1p(2.5))).epsilon(1e-12));
    CHECK(w == doctest::Approx(0.95858635672870291).epsilon(1e-12));
}

TEST_CASE("lambert_w0 rejects arguments below the branch point") {
    CHECK_THROWS_AS(lambert_w0(-std::exp(-1.0) - 1e-3), std::domain_error);
    CHECK_THROWS_AS(lambert_w0(-1.0), std::domain_error);
}

TEST_CASE("lambert_w0 residual bound over the whole working range") {
    auto residual_ok = [](double x) {
        const double w = lambert_w0(x);
        return std::abs(w * std::exp(w) - x) <= 1e-10 * std::max(1.0, std::abs(x));
    };
    for (double x : {-std::exp(-1.0), -std::exp(-1.0) + 1e-12, -0.367, -0.25, -0.18, -0.1,
                     -1e-3, -1e-9, 0.0, 1e-9, 1e-3, 0.1, 1.0, 2.7182818, 10.0, 1e3, 1e6}) {
        CAPTURE(x);
        CHECK(residual_ok(x));
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_range(std::log(1e-8), std::log(1e6));
    std::uniform_real_distribution<double> neg_range(-std::exp(-1.0), 0.0);
    for (int i = 0; i < 2000; ++i) {
        CHECK(residual_ok(std::exp(log_range(rng))));
    }
    for (int i = 0; i < 500; ++i) {
        CHECK(residual_ok(neg_range(rng)));
    }
}

TEST_CASE("lambert_w0 is monotone increasing") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> range(-std::exp(-1.0), 50.0);
    std::vector<double> xs(1000);
    for (double& x : xs) x = range(rng);
    std::sort(xs.begin(), xs.end());
    double previous = lambert_w0(xs.front());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double w = lambert_w0(xs[i]);
        CHECK(w >= previous - 1e-12);
        previous = w;
    }
}

TEST_CASE("exponential inequality A >= B*(ln(A/B)+1) on positive reals") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> range(1e-12, 1e3);
    for (int i = 0; i < 10'000; ++i) {
        const double a = range(rng);
        const double b = range(rng);
        CHECK(a - b * (std::log(a / b) + 1.0) >= -1e-9 * std::max(1.0, a));
    }
}

TEST_CASE("SolverConfig validation") {
    CHECK_THROWS_AS((tc::SolverConfig{-1.0, 10, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((tc::SolverConfig{1e-10, 0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((tc::SolverConfig{1e-10, 10, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((tc::SolverConfig{1e-10, 10, 1.5}.validate()), std::invalid_argument);
    CHECK_NOTHROW(tc::SolverConfig{}.validate());
}

TEST_CASE("fixed_point on the identity map returns the start after one evaluation") {
    int calls = 0;
    auto identity = [&calls](const std::vector<double>& v) {
        ++calls;
        return v;
    };
    const std::vector<double> start{1.5, -2.0, 0.25};
    CHECK(tc::fixed_point(identity, start) == start);
    CHECK(calls == 1);
}

TEST_CASE("fixed_point finds the cosine fixed point") {
    auto map = [](const std::vector<double>& v) { return std::vector<double>{std::cos(v[0])}; };
    const auto result = tc::fixed_point(map, {1.0}, {1e-12, 10'000, 1.0});
    CHECK(std::abs(std::cos(result[0]) - result[0]) < 1e-10);
    // Oracle: bisection on cos(x) - x over [0, 1].
    CHECK(result[0] == doctest::Approx(0.73908513321516064).epsilon(1e-10));
}

TEST_CASE("fixed_point solves the simultaneous best-response system") {
    const tc::Situation theta{{0, 0, 0}, {1.0, 2.0, 3.0}, {2.0, 1.0, 3.0}, 0.5, false};
    auto response = [&](const std::vector<double>& p) {
        std::vector<double> next(3);
        for (int i = 0; i < 3; ++i) {
            double rivals = 1.0;
            for (int j = 0; j < 3; ++j) {
                if (j != i) rivals += std::exp(theta.alphas[j] - theta.beta * p[j]);
            }
            const double arg =
                std::exp(theta.alphas[i] - 1.0 - theta.beta * theta.costs[i]) / rivals;
            next[i] = theta.costs[i] + (1.0 + lambert_w0(arg)) / theta.beta;
        }
        return next;
    };
    const auto prices = tc::fixed_point(response, {5.0, 6.0, 7.0}, {1e-10, 10'000, 1.0});
    const auto echo = response(prices);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(echo[i] - prices[i]) < 1e-10);
    }
}

TEST_CASE("fixed_point reports non-convergence with the final residual") {
    auto drift = [](const std::vector<double>& v) { return std::vector<double>{v[0] + 1.0}; };
    try {
        tc::fixed_point(drift, {0.0}, {1e-10, 25, 1.0});
        FAIL("expected ConvergenceError");
    } catch (const tc::ConvergenceError& err) {
        CHECK(err.iterations == 25);
        CHECK(err.residual == doctest::Approx(1.0));
    }
}

TEST_CASE("oracle_optimize pins the single-member point") {
    const double budget = 0.75;
    const double alpha = 1.2;
    const double beta = 0.4;
    auto objective = [&](std::span<const double> x) { return -(x[0] - 3.0) * (x[0] - 3.0); };
    const auto result = tc::oracle_optimize(objective, budget, std::vector{alpha}, beta, 100);
    CHECK(result.x.size() == 1);
    CHECK(result.x[0] == doctest::Approx((alpha - std::log(budget)) / beta).epsilon(1e-14));
    CHECK(std::exp(alpha - beta * result.x[0]) == doctest::Approx(budget).epsilon(1e-14));
}

TEST_CASE("oracle_optimize input validation") {
    auto objective = [](std::span<const double>) { return 0.0; };
    CHECK_THROWS_AS(tc::oracle_optimize(objective, -1.0, std::vector{1.0}, 0.5, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(tc::oracle_optimize(objective, 1.0, std::vector<double>{}, 0.5, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(tc::oracle_optimize(objective, 1.0, std::vector{1.0}, 0.5, 1),
                    std::invalid_argument);
}

namespace {

// Joint profit of coalition `members` when outsiders keep theta's prices.
auto coalition_objective(const tc::Situation& theta, const std::vector<int>& members) {
    double outside = 1.0;
    for (int j = 0; j < theta.size(); ++j) {
        if (std::find(members.begin(), members.end(), j) == members.end()) {
            outside += std::exp(theta.alphas[j] - theta.beta * theta.prices[j]);
        }
    }
    return [theta, members, outside](std::span<const double> x) {
        double weighted = 0.0;
        double own = 0.0;
        for (std::size_t k = 0; k < members.size(); ++k) {
            const int i = members[k];
            const double w = std::exp(theta.alphas[i] - theta.beta * x[k]);
            weighted += (x[k] - theta.costs[i]) * w;
            own += w;
        }
        return weighted / (outside + own);
    };
}

double members_budget(const tc::Situation& theta, const std::vector<int>& members) {
    double budget = 0.0;
    for (int i : members) budget += std::exp(theta.alphas[i] - theta.beta * theta.prices[i]);
    return budget;
}

std::vector<double> member_alphas(const tc::Situation& theta, const std::vector<int>& members) {
    std::vector<double> out;
    for (int i : members) out.push_back(theta.alphas[i]);
    return out;
}

}  // namespace

TEST_CASE("oracle_optimize reproduces the collaborative optimum on the demo instance") {
    const tc::Situation theta = fixtures::demo3();

    SUBCASE("grand coalition") {
        const std::vector<int> members{0, 1, 2};
        const auto result =
            tc::oracle_optimize(coalition_objective(theta, members), members_budget(theta, members),
                                member_alphas(theta, members), theta.beta, 200);
        CHECK(std::abs(result.value - 1.7873124050309173) <= 1e-3);
        CHECK(result.value <= 1.7873124050309173 + 1e-9);
    }
    SUBCASE("two-member coalition") {
        const std::vector<int> members{0, 2};
        const auto result =
            tc::oracle_optimize(coalition_objective(theta, members), members_budget(theta, members),
                                member_alphas(theta, members), theta.beta, 200);
        CHECK(std::abs(result.value - 1.485205767525017) <= 1e-3);
        CHECK(result.value <= 1.485205767525017 + 1e-9);
    }
}

TEST_CASE("oracle_optimize never beats the closed-form optimum") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> price(0.5, 15.0);
    std::uniform_real_distribution<double> beta_range(0.1, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        tc::Situation theta;
        const int n = 2 + static_cast<int>(trial % 2);
        for (int i = 0; i < n; ++i) {
            theta.prices.push_back(price(rng));
            theta.costs.push_back(price(rng));
            theta.alphas.push_back(price(rng));
        }
        theta.beta = beta_range(rng);
        std::vector<int> members(n);
        for (int i = 0; i < n; ++i) members[i] = i;

        const double closed_form = tc::optimal_prices(theta).joint_profit;
        const auto result =
            tc::oracle_optimize(coalition_objective(theta, members), members_budget(theta, members),
                                member_alphas(theta, members), theta.beta, 200);
        CHECK(result.value <= closed_form + 1e-9);
        CHECK(std::abs(result.value - closed_form) <= 1e-3);
    }
}
