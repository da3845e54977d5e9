#include "dynprice/market.hpp"
#include "dynprice/ols.hpp"
#include "dynprice/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace dynprice;

namespace {

Design design_of(std::size_t dim, const std::vector<std::vector<double>>& rows) {
    Design d(dim);
    for (const auto& r : rows) d.add_row(r);
    return d;
}

}  // namespace

TEST_CASE("exact linear data is recovered") {
    const auto d = design_of(2, {{1, 0}, {1, 1}, {1, 2}});
    const std::vector<double> y{1, 3, 5};
    const auto fit = fit_ols(d, y);
    CHECK(fit.n == 3);
    CHECK(fit.theta[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.theta[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single intercept column gives the mean") {
    const auto fit = fit_ols(design_of(1, {{1}, {1}}), std::vector<double>{2, 4});
    CHECK(std::abs(fit.theta[0] - 3.0) < 1e-12);
}

TEST_CASE("square system solved by hand") {
    // [1 0; 1 1] theta = [0; 1] gives theta = (0, 1).
    const auto fit = fit_ols(design_of(2, {{1, 0}, {1, 1}}), std::vector<double>{0, 1});
    CHECK(std::abs(fit.theta[0]) < 1e-12);
    CHECK(std::abs(fit.theta[1] - 1.0) < 1e-12);
}

TEST_CASE("residuals are orthogonal to design columns") {
    Rng rng(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 1 + rng.index(5);
        const std::size_t n = dim + 5 + rng.index(200);
        Design d(dim);
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(dim, 1.0);
            for (std::size_t j = 1; j < dim; ++j) x[j] = rng.uniform(-3.0, 3.0);
            d.add_row(x);
            y.push_back(rng.uniform01() < 0.5 ? 5.0 : 0.0);
        }
        const auto fit = fit_ols(d, y);
        for (std::size_t j = 0; j < dim; ++j) {
            double dot = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = y[i] - fit.predict(d.row(i));
                dot += r * d.row(i)[j];
                scale += std::abs(y[i] * d.row(i)[j]);
            }
            REQUIRE(std::abs(dot) <= 1e-8 * std::max(scale, 1.0));
        }
        CHECK(fit.condition_hint > kSingularThreshold);
    }
}

TEST_CASE("noiseless responses are recovered to 1e-9") {
    Rng rng(6, 0);
    const std::vector<double> theta{3.0, -1.0, 0.5, 2.0};
    Design d(4);
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> x{1.0, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double v = 0.0;
        for (std::size_t j = 0; j < 4; ++j) v += theta[j] * x[j];
        d.add_row(x);
        y.push_back(v);
    }
    const auto fit = fit_ols(d, y);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(fit.theta[j] - theta[j]) < 1e-9);
}

TEST_CASE("rank deficiency is reported") {
    CHECK_THROWS_AS(fit_ols(design_of(2, {{1, 2}, {1, 2}, {1, 2}}), std::vector<double>{1, 2, 3}),
                    SingularDesign);
    CHECK_THROWS_WITH(fit_ols(design_of(2, {{1, 0}, {2, 0}}), std::vector<double>{1, 2}), "singular design");
    CHECK_THROWS(fit_ols(design_of(2, {{1, 0}}), std::vector<double>{1}));
    CHECK_THROWS(fit_ols(design_of(2, {{1, 0}, {1, 1}}), std::vector<double>{1}));
}

TEST_CASE("intercept correction shifts only the intercept") {
    OlsFit fit;
    fit.theta = {1.0, 2.0};
    fit.n = 2;
    CHECK(intercept_correction(fit, 0.0).theta == std::vector<double>{1.0, 2.0});
    CHECK(intercept_correction(fit, 0.5).theta == std::vector<double>{1.5, 2.0});
}

TEST_CASE("corrected exploration fit recovers theta0 for p_min > 0") {
    // v lies in (1.5, 5.5), inside the price window.
    const std::vector<double> theta0{3.5, 0.5, 0.5, 0.5};
    const std::vector<Interval> bounds(3, Interval{-1.0, 1.0});
    const MarketSpec spec(theta0, bounds, NoiseModel::holder(1.0), 1.0, 6.0);
    Rng rng(21, 0);
    const double p_min = 1.0, p_max = 6.0;
    Design d(4);
    std::vector<double> y;
    for (int i = 0; i < 100000; ++i) {
        const auto round = spec.sample_round(rng);
        const double price = rng.uniform(p_min, p_max);
        d.add_row(round.x);
        y.push_back(price <= round.valuation ? p_max - p_min : 0.0);
    }
    const auto fit = intercept_correction(fit_ols(d, y), p_min);
    double err = 0.0;
    for (std::size_t j = 0; j < 4; ++j) err += (fit.theta[j] - theta0[j]) * (fit.theta[j] - theta0[j]);
    CHECK(std::sqrt(err) < 0.05);
}
