#include "dynprice/rate_tests.hpp"

#include "dynprice/ols.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynprice {

double sup_error(const StepFunction& f, const NoiseModel& noise, double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("sup_error: empty interval");
    const auto u = f.breakpoints();
    const auto level = f.levels();
    const std::size_t m = level.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double a = j == 0 ? -std::numeric_limits<double>::infinity() : u[j];
        const double b = j + 1 == m ? std::numeric_limits<double>::infinity() : u[j + 1];
        const double left = std::max(a, lo);
        const double right = std::min(b, hi);
        if (left > right) continue;
        // S0 is continuous and monotone, so the gap peaks at an end of the piece.
        worst = std::max({worst, std::abs(level[j] - noise.survival(left)),
                          std::abs(level[j] - noise.survival(right))});
    }
    return worst;
}

namespace {

std::uint64_t rate_stream(std::size_t n, std::size_t rep) {
    return (static_cast<std::uint64_t>(n) << 24) ^ static_cast<std::uint64_t>(rep);
}

void check_n_values(std::span<const std::size_t> n_values, std::size_t minimum) {
    if (n_values.size() < 2) throw std::invalid_argument("rate test needs at least two sample sizes");
    for (std::size_t n : n_values) {
        if (n < minimum) throw std::invalid_argument("rate test sample size too small");
    }
}

}  // namespace

SurvivalRateTable rate_test_s(const MarketSpec& market, std::span<const std::size_t> n_values,
                              std::size_t replications, std::uint64_t seed, unsigned threads) {
    check_n_values(n_values, 2);
    if (replications < 1) throw std::invalid_argument("rate test needs at least one replication");
    const NoiseModel& noise = market.noise();
    const double alpha = noise.holder_exponent();

    SurvivalRateTable table;
    table.alpha = alpha;
    table.target_exponent = alpha / (2.0 * alpha + 1.0);

    for (std::size_t n : n_values) {
        SurvivalRateRow row;
        row.n = n;
        row.rho = std::log(static_cast<double>(n)) / static_cast<double>(n);
        row.delta = std::pow(row.rho, 1.0 / (2.0 * alpha + 1.0));
        const double lo = noise.lo() + row.delta;
        const double hi = noise.hi() - row.delta;
        if (!(lo < hi)) throw std::invalid_argument("rate test: interior set is empty for n=" + std::to_string(n));

        std::vector<double> errors(replications);
        detail::parallel_for(replications, threads, [&](std::size_t rep) {
            Rng rng(seed, rate_stream(n, rep));
            std::vector<BinaryObservation> obs(n);
            for (auto& o : obs) {
                const MarketRound round = market.sample_round(rng);
                const double w = rng.uniform(noise.lo(), noise.hi());
                const double price = w + market.base_value(round.x);
                o = {w, price <= round.valuation ? 1 : 0};
            }
            errors[rep] = sup_error(fit_pava(aggregate(obs)), noise, lo, hi);
        });
        row.median_error = median(errors);
        table.rows.push_back(row);
    }

    std::vector<double> lx, ly;
    for (const auto& row : table.rows) {
        lx.push_back(std::log(row.rho));
        ly.push_back(std::log(row.median_error));
    }
    table.fit = fit_line(lx, ly);
    return table;
}

ThetaRateTable rate_test_theta(const MarketSpec& market, std::span<const std::size_t> n_values,
                               std::size_t replications, std::uint64_t seed, unsigned threads) {
    check_n_values(n_values, market.dim());
    if (replications < 1) throw std::invalid_argument("rate test needs at least one replication");
    const double p_min = market.p_min(), p_max = market.p_max();
    const double d = static_cast<double>(market.dim());

    ThetaRateTable table;
    for (std::size_t n : n_values) {
        std::vector<double> errors(replications);
        detail::parallel_for(replications, threads, [&](std::size_t rep) {
            Rng rng(seed, rate_stream(n, rep) ^ 0x5A5A5A5AULL);
            Design design(market.dim());
            std::vector<double> responses;
            responses.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const MarketRound round = market.sample_round(rng);
                const double price = rng.uniform(p_min, p_max);
                design.add_row(round.x);
                responses.push_back((p_max - p_min) * (price <= round.valuation ? 1.0 : 0.0));
            }
            const OlsFit fit = intercept_correction(fit_ols(design, responses), p_min);
            double ss = 0.0;
            for (std::size_t i = 0; i < fit.theta.size(); ++i) {
                const double diff = fit.theta[i] - market.theta0()[i];
                ss += diff * diff;
            }
            errors[rep] = std::sqrt(ss);
        });
        const double nn = static_cast<double>(n);
        table.rows.push_back({n, median(errors), std::sqrt(d * std::log(nn) / nn)});
    }

    std::vector<double> lx, ly;
    for (const auto& row : table.rows) {
        const double nn = static_cast<double>(row.n);
        lx.push_back(std::log(std::log(nn) / nn));
        ly.push_back(std::log(row.median_error));
    }
    table.fit = fit_line(lx, ly);
    return table;
}

}  // namespace dynprice
