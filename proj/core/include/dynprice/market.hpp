#pragma once

#include "dynprice/rng.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dynprice {

enum class NoiseKind { holder, fan_quadratic, trunc_gaussian, trunc_laplace, trunc_cauchy };

// Mean-zero noise distribution on a bounded support (lo, hi).
//
// holder(a):      F(z) = 1/2 + (1/2)^(1-a) sign(z) |z|^a on (-1/2, 1/2)
// fan_quadratic:  density 6 (1/4 - z^2) on (-1/2, 1/2)
// trunc_*:        location/scale family truncated to (lo, hi)
class NoiseModel {
public:
    static NoiseModel holder(double alpha);
    static NoiseModel fan_quadratic();
    static NoiseModel trunc_gaussian(double mu, double sigma, double lo = -0.5, double hi = 0.5);
    static NoiseModel trunc_laplace(double loc, double scale, double lo = -0.5, double hi = 0.5);
    static NoiseModel trunc_cauchy(double loc, double scale, double lo = -0.5, double hi = 0.5);

    // Parses "holder:0.333", "fan_quadratic", "trunc_gaussian", "trunc_gaussian:0.3",
    // "trunc_laplace[:scale]", "trunc_cauchy[:scale]". Defaults follow the
    // standard simulation settings (sigma 1, scale 0.2, support (-1/2, 1/2)).
    static NoiseModel from_name(const std::string& name);

    NoiseKind kind() const { return kind_; }
    std::string name() const;

    double cdf(double z) const;
    double survival(double z) const { return 1.0 - cdf(z); }
    double quantile(double q) const;
    double sample(Rng& rng) const { return quantile(rng.uniform01()); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }

    // Hoelder exponent and a constant C1 with |F(u) - F(v)| <= C1 |u - v|^alpha.
    double holder_exponent() const;
    double holder_constant() const;

    // Location and scale parameters (alpha for the holder family).
    double location() const { return location_; }
    double scale() const { return scale_; }

    // E[z] by quadrature of the survival function.
    double mean() const;

private:
    NoiseModel(NoiseKind kind, double location, double scale, double lo, double hi);
    double base_cdf(double z) const;
    double base_quantile(double q) const;
    double bisect_quantile(double q) const;

    NoiseKind kind_;
    double location_;
    double scale_;
    double lo_;
    double hi_;
    double base_lo_ = 0.0;  // base cdf at lo
    double base_mass_ = 1.0;  // base cdf mass on (lo, hi)
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct MarketRound {
    std::vector<double> x;
    double valuation = 0.0;
};

// Linear valuation market v = theta0' x + z with x = (1, x_2, ..., x_d),
// x_i independent uniform on the given bounds.
class MarketSpec {
public:
    MarketSpec(std::vector<double> theta0, std::vector<Interval> feature_bounds,
               NoiseModel noise, double p_min, double p_max);

    // Standard simulation market: theta0 = (3, 2/3, 2/3, 2/3), features
    // uniform on (-sqrt(2/3), sqrt(2/3)), prices in [0, 5].
    static MarketSpec standard(NoiseModel noise);

    std::size_t dim() const { return theta0_.size(); }
    const std::vector<double>& theta0() const { return theta0_; }
    const std::vector<Interval>& feature_bounds() const { return bounds_; }
    const NoiseModel& noise() const { return noise_; }
    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }

    double base_value(std::span<const double> x) const;
    std::vector<double> sample_context(Rng& rng) const;
    MarketRound sample_round(Rng& rng) const;

    // Range of theta0' x + z over the context box and noise support.
    Interval valuation_range() const;
    bool valuations_within_price_window() const;
    // max ||x||_2 over the context box.
    double context_radius() const;

private:
    std::vector<double> theta0_;
    std::vector<Interval> bounds_;
    NoiseModel noise_;
    double p_min_;
    double p_max_;
};

struct PriceChoice {
    double price = 0.0;
    double revenue = 0.0;
};

inline constexpr int kOracleGridPoints = 4096;

// p * S0(p - offset)
double expected_revenue(const NoiseModel& noise, double offset, double price);

// argmax over [p_min, p_max] of p * S0(p - offset): dense grid on the
// window where S0 is strictly between 0 and 1, then golden-section
// refinement around the best cell.
PriceChoice oracle_price(const NoiseModel& noise, double offset, double p_min, double p_max);
PriceChoice oracle_price(const MarketSpec& spec, std::span<const double> x);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// S_theta(u) = E_x[ S0(u + (theta - theta0)' x) ] estimated from mc_n fresh contexts.
MonteCarloEstimate s_theta_oracle(const MarketSpec& spec, std::span<const double> theta, double u,
                                  std::size_t mc_n, Rng& rng);

}  // namespace dynprice
