#include "dynprice/market.hpp"
#include "dynprice/policy.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace dynprice;

namespace {

PricingConfig standard_config(std::size_t tau1 = 100) {
    PricingConfig cfg;
    cfg.tau1 = tau1;
    return cfg;
}

struct Run {
    std::vector<double> prices;
    std::vector<Phase> phases;
};

// Drives the policy against the market; `garbage_until` rounds get coin-flip feedback.
Run drive(SemiParametricPolicy& policy, const MarketSpec& market, std::uint64_t market_stream,
          std::size_t garbage_until = 0) {
    Rng env(77, market_stream);
    Rng coin(78, market_stream);
    Run run;
    while (!policy.exhausted()) {
        const std::size_t t = policy.rounds_completed();
        const auto round = market.sample_round(env);
        const auto quote = policy.next_price(round.x);
        const bool flip = coin.uniform01() < 0.5;
        const bool sold = t < garbage_until ? flip : quote.price <= round.valuation;
        policy.observe(round.x, quote.price, sold);
        run.prices.push_back(quote.price);
        run.phases.push_back(quote.phase);
    }
    return run;
}

}  // namespace

TEST_CASE("nu exponent") {
    CHECK(nu(1.0) == doctest::Approx(0.75));
    CHECK(nu(1.0 / 3.0) == doctest::Approx(6.0 / 7.0));
    CHECK(nu(0.5) == doctest::Approx(0.8));
    CHECK(std::abs(nu(0.5 - 1e-12) - nu(0.5)) < 1e-9);
    CHECK_THROWS_AS(nu(0.0), std::domain_error);
    CHECK_THROWS_AS(nu(1.1), std::domain_error);
}

TEST_CASE("schedule for the standard setting") {
    const auto s = build_schedule(standard_config(), 25500);
    REQUIRE(s.size() == 8);
    CHECK(s.episodes[0].explore_length == 26);
    CHECK(s.horizon == 25500);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(s.episodes[k].index == k + 1);
        CHECK(s.episodes[k].nominal_length == (100u << k));
        CHECK(s.episodes[k].rounds.size() == (100u << k));
    }
}

TEST_CASE("smallest schedule") {
    PricingConfig cfg;
    cfg.tau1 = 4;
    cfg.dim = 1;
    const auto s = build_schedule(cfg, 4);
    REQUIRE(s.size() == 1);
    CHECK(s.episodes[0].rounds.size() == 4);
    CHECK(s.episodes[0].explore_length == 2);
    CHECK(s.episodes[0].exploit_phase.size() == 0);
}

TEST_CASE("schedule rejects tau1 too small") {
    PricingConfig cfg;
    cfg.tau1 = 2;
    cfg.dim = 4;
    CHECK_THROWS_WITH(build_schedule(cfg, 100), "tau1 too small for given d, alpha");
    CHECK_THROWS(build_schedule(standard_config(), 50));
}

TEST_CASE("schedule tiles the horizon") {
    Rng rng(31, 0);
    int built = 0;
    for (int trial = 0; trial < 500; ++trial) {
        PricingConfig cfg;
        cfg.tau1 = 2 + rng.index(300);
        cfg.dim = 1 + rng.index(6);
        cfg.alpha = 0.05 + 0.95 * rng.uniform01();
        const std::size_t horizon = cfg.tau1 + rng.index(20000);
        EpochSchedule s;
        try {
            s = build_schedule(cfg, horizon);
        } catch (const std::invalid_argument&) {
            continue;
        }
        ++built;
        std::size_t cursor = 0;
        for (const auto& ep : s.episodes) {
            REQUIRE(ep.rounds.begin == cursor);
            REQUIRE(ep.ols_phase.begin == ep.rounds.begin);
            REQUIRE(ep.antitonic_phase.begin == ep.ols_phase.end);
            REQUIRE(ep.exploit_phase.begin == ep.antitonic_phase.end);
            REQUIRE(ep.exploit_phase.end == ep.rounds.end);
            REQUIRE(2 * ep.explore_length <= ep.nominal_length);
            REQUIRE(ep.explore_length == exploration_length(cfg.dim, cfg.alpha, ep.nominal_length));
            cursor = ep.rounds.end;
        }
        REQUIRE(cursor == horizon);
        REQUIRE(s.size() == static_cast<std::size_t>(std::ceil(
                                std::log2(static_cast<double>(horizon) / static_cast<double>(cfg.tau1) + 1.0) - 1e-12)));
        for (std::size_t t = 0; t < horizon; t += 1 + rng.index(50)) {
            const auto& ep = s.episodes[s.episode_of(t)];
            REQUIRE(ep.rounds.contains(t));
        }
    }
    CHECK(built > 100);
}

TEST_CASE("maximize_step_revenue on hand examples") {
    CHECK(maximize_step_revenue(StepFunction::constant(1.0), 0.0, 0.0, 5.0).price == 5.0);
    CHECK(maximize_step_revenue(StepFunction::constant(0.4), 2.0, 1.0, 5.0).price == 5.0);
    CHECK(maximize_step_revenue(StepFunction::constant(0.0), 0.0, 1.0, 5.0).price == 1.0);

    const StepFunction unit({0.0, 1.0}, {1.0, 0.0});
    const auto drop = maximize_step_revenue(unit, 0.0, 0.0, 5.0);
    CHECK(drop.price == 1.0);
    CHECK(drop.revenue == 1.0);

    const StepFunction three({-0.3, -0.2, 0.1}, {1.0, 0.5, 0.0});
    const auto choice = maximize_step_revenue(three, 3.0, 0.0, 5.0);
    CHECK(choice.price == doctest::Approx(2.8));
    CHECK(choice.revenue == doctest::Approx(2.8));
    CHECK(testing::grid_step_revenue(three, 3.0, 0.0, 5.0, 100001) <= choice.revenue + 1e-12);
    CHECK(testing::grid_step_revenue(three, 3.0, 0.0, 5.0, 100001) >= choice.revenue - 1e-4);
}

TEST_CASE("maximize_step_revenue against grid search") {
    Rng rng(41, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = testing::random_step(rng, 1 + rng.index(30));
        const double offset = rng.uniform(0.0, 5.0);
        const auto choice = maximize_step_revenue(s, offset, 0.0, 5.0);
        const double grid = testing::grid_step_revenue(s, offset, 0.0, 5.0, 100000);
        REQUIRE(choice.revenue >= grid - 1e-12);
        REQUIRE(choice.revenue - grid < 5.0 * 1e-4);
        REQUIRE(choice.price >= 0.0);
        REQUIRE(choice.price <= 5.0);
    }
}

TEST_CASE("policy phases, buffers and estimates in the standard setting") {
    const auto market = MarketSpec::standard(NoiseModel::trunc_gaussian(0.0, 1.0));
    SemiParametricPolicy policy(standard_config(), 25500, 1);
    const auto& schedule = policy.schedule();
    Rng env(5, 0);
    while (!policy.exhausted()) {
        const std::size_t t = policy.rounds_completed();
        const auto& ep = schedule.episodes[schedule.episode_of(t)];
        const auto round = market.sample_round(env);
        const auto quote = policy.next_price(round.x);
        REQUIRE(quote.phase == schedule.phase_of(t));
        if (quote.phase == Phase::explore_ols) {
            REQUIRE(quote.price >= 0.0);
            REQUIRE(quote.price <= 5.0);
        }
        if (quote.phase == Phase::exploit) REQUIRE(policy.s_hat().has_value());
        policy.observe(round.x, quote.price, quote.price <= round.valuation);
        if (t + 1 == ep.ols_phase.end) {
            REQUIRE(policy.ols_buffer_size() == ep.explore_length);
            REQUIRE(policy.theta_hat().has_value());
            REQUIRE(policy.theta_episode() == ep.index);
        }
        if (t + 1 == ep.antitonic_phase.end) {
            REQUIRE(policy.antitonic_buffer_size() == ep.explore_length);
            REQUIRE(policy.s_hat().has_value());
        }
        if (t + 1 == ep.rounds.end) {
            REQUIRE(policy.ols_buffer_size() == 0);
            REQUIRE(policy.antitonic_buffer_size() == 0);
        }
    }
    for (const auto& ep : schedule.episodes)
        CHECK(ep.exploit_phase.size() == ep.nominal_length - 2 * ep.explore_length);
    const auto& theta = policy.theta_hat()->theta;
    double err = 0.0;
    for (std::size_t j = 0; j < 4; ++j) err += std::pow(theta[j] - market.theta0()[j], 2);
    CHECK(std::sqrt(err) < 0.3);
    CHECK_THROWS_AS(policy.next_price(std::vector<double>{1, 0, 0, 0}), std::out_of_range);
}

TEST_CASE("tiny episode with all sales") {
    PricingConfig cfg;
    cfg.tau1 = 4;
    cfg.dim = 1;
    SemiParametricPolicy policy(cfg, 12, 0);
    const std::vector<double> x{1.0};
    for (int t = 0; t < 4; ++t) {
        const auto q = policy.next_price(x);
        policy.observe(x, q.price, true);
    }
    // After 2 a_1 = 4 rounds both estimates were fitted, then cleared at the episode end.
    CHECK(policy.theta_hat().has_value());
    CHECK(!policy.s_hat().has_value());
    // Episode 2 (tau 8, a 3): always sell, so S hat is identically 1 and exploitation posts p_max.
    std::vector<Quote> quotes;
    while (!policy.exhausted()) {
        const auto q = policy.next_price(x);
        quotes.push_back(q);
        policy.observe(x, q.price, true);
        if (policy.rounds_completed() == 10) {
            REQUIRE(policy.s_hat().has_value());
            for (double level : policy.s_hat()->levels()) CHECK(level == 1.0);
        }
    }
    REQUIRE(quotes.size() == 8);
    CHECK(quotes[6].phase == Phase::exploit);
    CHECK(quotes[6].price == 5.0);
    CHECK(quotes[7].price == 5.0);
}

TEST_CASE("protocol errors") {
    SemiParametricPolicy policy(standard_config(), 1000, 0);
    const std::vector<double> x{1.0, 0.1, 0.2, 0.3};
    CHECK_THROWS_AS(policy.observe(x, 1.0, true), std::logic_error);
    const auto q = policy.next_price(x);
    CHECK_THROWS_AS(policy.next_price(x), std::logic_error);
    CHECK_THROWS_AS(policy.observe(x, q.price + 1.0, true), std::logic_error);
    CHECK_THROWS_AS(policy.observe(std::vector<double>{1.0, 0.0, 0.0, 0.0}, q.price, true), std::logic_error);
    policy.observe(x, q.price, false);
    CHECK(policy.rounds_completed() == 1);
    CHECK_THROWS(policy.next_price(std::vector<double>{1.0, 0.0}));
    CHECK_THROWS(policy.next_price(std::vector<double>{0.0, 0.0, 0.0, 0.0}));
}

TEST_CASE("identical seeds give identical prices") {
    const auto market = MarketSpec::standard(NoiseModel::holder(1.0 / 3.0));
    SemiParametricPolicy a(standard_config(), 6300, 9), b(standard_config(), 6300, 9), c(standard_config(), 6300, 10);
    const auto ra = drive(a, market, 3), rb = drive(b, market, 3), rc = drive(c, market, 3);
    CHECK(ra.prices == rb.prices);
    CHECK(ra.prices != rc.prices);
}

TEST_CASE("estimates depend only on the current episode") {
    const auto market = MarketSpec::standard(NoiseModel::fan_quadratic());
    SemiParametricPolicy clean(standard_config(), 700, 4), noisy(standard_config(), 700, 4);
    const auto rc = drive(clean, market, 2);
    // Coin-flip feedback throughout episodes 1 and 2.
    const auto rn = drive(noisy, market, 2, 300);
    const auto last = clean.schedule().episodes.back();
    CHECK(std::vector<double>(rc.prices.begin(), rc.prices.begin() + 300) !=
          std::vector<double>(rn.prices.begin(), rn.prices.begin() + 300));
    CHECK(std::vector<double>(rc.prices.begin() + static_cast<long>(last.rounds.begin), rc.prices.end()) ==
          std::vector<double>(rn.prices.begin() + static_cast<long>(last.rounds.begin), rn.prices.end()));
    CHECK(clean.theta_hat()->theta == noisy.theta_hat()->theta);
}
