#include "tc/allocation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tc {

std::string_view rule_name(Rule rule) {
    switch (rule) {
        case Rule::IProp: return "I-PROP";
        case Rule::MProp: return "M-PROP";
        case Rule::Shapley: return "SHAPLEY";
        case Rule::Mse: return "MSE";
        case Rule::MseDelta: return "MSE-DELTA";
        case Rule::Custom: return "CUSTOM";
    }
    return "CUSTOM";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "i-prop" || lowered == "iprop") return Rule::IProp;
    if (lowered == "m-prop" || lowered == "mprop") return Rule::MProp;
    if (lowered == "shapley" || lowered == "sv") return Rule::Shapley;
    if (lowered == "mse") return Rule::Mse;
    if (lowered == "mse-delta" || lowered == "msedelta") return Rule::MseDelta;
    if (lowered == "custom") return Rule::Custom;
    return std::nullopt;
}

namespace {

void require_same_players(const Situation& theta, const Game& game, const char* where) {
    if (theta.size() != game.n) {
        throw std::invalid_argument(std::string(where) + ": situation and game disagree on n");
    }
}

double singleton_sum(const Game& game) {
    double total = 0.0;
    for (int i = 0; i < game.n; ++i) total += game.value(Coalition::single(i));
    return total;
}

}  // namespace

Allocation iprop(const Game& game) {
    const double denom = singleton_sum(game);
    if (std::abs(denom) < 1e-12) {
        std::ostringstream msg;
        msg << "I-PROP undefined: singleton worths sum to " << denom;
        throw UndefinedAllocationError(msg.str());
    }
    Allocation out;
    out.rule = Rule::IProp;
    out.payoffs.resize(game.n);
    const double grand = game.values.back();
    for (int i = 0; i < game.n; ++i) {
        out.payoffs[i] = game.value(Coalition::single(i)) / denom * grand;
    }
    return out;
}

Allocation mprop(const Situation& theta, const Game& game) {
    require_same_players(theta, game, "mprop");
    const MarketState market = market_state(theta);
    double share_sum = 0.0;
    for (double s : market.shares) share_sum += s;   // always positive under the logit model

    Allocation out;
    out.rule = Rule::MProp;
    out.payoffs.resize(game.n);
    const double grand = game.values.back();
    for (int i = 0; i < game.n; ++i) out.payoffs[i] = market.shares[i] / share_sum * grand;
    return out;
}

Allocation shapley(const Game& game) {
    const int n = game.n;
    if (n > 24) throw std::invalid_argument("shapley: n exceeds the 24-player enumeration bound");

    // weight(s) = s!(n-1-s)!/n! = 1 / (n * C(n-1, s)); binomials up to n=24 are
    // exactly representable.
    std::vector<double> weight(n);
    double binomial = 1.0;
    for (int s = 0; s < n; ++s) {
        weight[s] = 1.0 / (n * binomial);
        binomial = binomial * (n - 1 - s) / (s + 1);
    }

    Allocation out;
    out.rule = Rule::Shapley;
    out.payoffs.assign(n, 0.0);
    const std::size_t count = game.values.size();
    for (int i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        double payoff = 0.0;
        for (std::size_t mask = 0; mask < count; ++mask) {
            if (mask & bit) continue;
            const int s = std::popcount(mask);
            payoff += weight[s] * (game.values[mask | bit] - game.values[mask]);
        }
        out.payoffs[i] = payoff;
    }
    return out;
}

double mse_exchange_price(const Situation& theta) {
    const Coalition everyone = Coalition::all(theta.size());
    const double d_p = d_aggregate(theta, everyone, theta.prices);
    const double d_c = d_aggregate(theta, everyone, theta.costs);
    return (std::log(d_c / d_p) - 1.0) / theta.beta;
}

double mse_exchange_price_definitional(const Situation& theta) {
    const int n = theta.size();
    // Zero-gain benchmark: identical prices and total share, but every operator
    // priced at a constant margin of 1/beta, so collaborating buys nothing.
    Situation benchmark = theta;
    benchmark.equilibrium = false;
    for (int i = 0; i < n; ++i) benchmark.costs[i] = theta.prices[i] - 1.0 / theta.beta;

    const double gain =
        optimal_prices(theta).joint_profit - optimal_prices(benchmark).joint_profit;
    const double d_p = d_aggregate(theta, Coalition::all(n), theta.prices);
    const double total_share = d_p / (d_p + 1.0);
    return gain / total_share;
}

Allocation mse(const Situation& theta, const Game& game) {
    require_same_players(theta, game, "mse");
    if (game.kind != GameKind::Plain) {
        throw std::invalid_argument("mse: expects the plain game built from theta");
    }

    const double phi = mse_exchange_price(theta);
    const double phi_check = mse_exchange_price_definitional(theta);
    if (!(std::abs(phi - phi_check) <= 1e-10 * std::max(1.0, std::abs(phi)))) {
        std::ostringstream msg;
        msg << "mse: exchange-price routes disagree (" << phi << " vs " << phi_check << ")";
        throw std::logic_error(msg.str());
    }

    const CollaborativeOptimum optimum = optimal_prices(theta);
    Situation collaborative = theta;
    collaborative.equilibrium = false;
    collaborative.prices = optimum.prices;

    const MarketState before = market_state(theta);
    const MarketState after = market_state(collaborative);

    Allocation out;
    out.rule = Rule::Mse;
    out.phi = phi;
    out.payoffs.resize(game.n);
    for (int i = 0; i < game.n; ++i) {
        out.payoffs[i] = after.profits[i] - phi * (after.shares[i] - before.shares[i]);
    }
    return out;
}

Allocation mse_delta(const Situation& theta, const Game& game, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        std::ostringstream msg;
        msg << "mse_delta: delta " << delta << " outside (0, 1)";
        throw std::invalid_argument(msg.str());
    }
    Allocation out = mse(theta, game);
    out.rule = Rule::MseDelta;
    out.delta = delta;
    out.threshold = mse_delta_threshold(theta, game);
    for (double& payoff : out.payoffs) payoff *= 1.0 - delta;
    return out;
}

double mse_delta_threshold(const Situation& theta, const Game& game) {
    const Allocation base = mse(theta, game);
    double worst_ratio = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < game.n; ++i) {
        if (base.payoffs[i] == 0.0) {
            throw std::domain_error("mse_delta_threshold: MSE payoff of player " +
                                    std::to_string(i + 1) + " is zero");
        }
        worst_ratio = std::max(worst_ratio, game.value(Coalition::single(i)) / base.payoffs[i]);
    }
    return 1.0 - worst_ratio;
}

namespace {

double coalition_payoff(const std::vector<double>& payoffs, std::size_t mask) {
    double total = 0.0;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
        if (mask & 1u) total += payoffs[i];
    }
    return total;
}

}  // namespace

CoreReport core_check(const Game& game, const Allocation& allocation, double tolerance) {
    if (allocation.payoffs.size() != static_cast<std::size_t>(game.n)) {
        throw std::invalid_argument("core_check: allocation dimension does not match the game");
    }
    CoreReport report;
    report.tolerance = tolerance;

    double total = 0.0;
    for (double x : allocation.payoffs) total += x;
    const bool efficient = std::abs(total - game.values.back()) <= tolerance;

    report.worst_deficit = -std::numeric_limits<double>::infinity();
    const std::size_t count = game.values.size();
    for (std::size_t mask = 1; mask < count; ++mask) {
        const double deficit = game.values[mask] - coalition_payoff(allocation.payoffs, mask);
        if (deficit > report.worst_deficit) {
            report.worst_deficit = deficit;
            report.worst_coalition = Coalition{static_cast<std::uint32_t>(mask)};
        }
    }
    report.in_core = efficient && report.worst_deficit <= tolerance;
    return report;
}

std::vector<CoreViolation> core_violations(const Game& game, const Allocation& allocation,
                                           double tolerance) {
    if (allocation.payoffs.size() != static_cast<std::size_t>(game.n)) {
        throw std::invalid_argument("core_violations: allocation dimension does not match the game");
    }
    std::vector<CoreViolation> out;
    const std::size_t count = game.values.size();
    for (std::size_t mask = 1; mask < count; ++mask) {
        const double deficit = game.values[mask] - coalition_payoff(allocation.payoffs, mask);
        if (deficit > tolerance) {
            out.push_back({Coalition{static_cast<std::uint32_t>(mask)}, deficit});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const CoreViolation& a, const CoreViolation& b) { return a.deficit > b.deficit; });
    return out;
}

}  // namespace tc
