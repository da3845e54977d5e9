#include "dynprice/market.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynprice {

namespace {

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double parse_number(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric parameter in noise name '" + context + "'");
    }
    if (used != text.size()) throw std::invalid_argument("bad numeric parameter in noise name '" + context + "'");
    return value;
}

}  // namespace

NoiseModel::NoiseModel(NoiseKind kind, double location, double scale, double lo, double hi)
    : kind_(kind), location_(location), scale_(scale), lo_(lo), hi_(hi) {
    if (!(lo_ < hi_) || !std::isfinite(lo_) || !std::isfinite(hi_))
        throw std::invalid_argument("noise support must be a bounded interval lo < hi");
    switch (kind_) {
        case NoiseKind::holder:
            if (!(scale_ > 0.0 && scale_ <= 1.0)) throw std::domain_error("holder exponent must lie in (0, 1]");
            break;
        case NoiseKind::fan_quadratic:
            break;
        case NoiseKind::trunc_gaussian:
        case NoiseKind::trunc_laplace:
        case NoiseKind::trunc_cauchy:
            if (!(scale_ > 0.0) || !std::isfinite(scale_) || !std::isfinite(location_))
                throw std::invalid_argument("noise scale must be positive");
            base_lo_ = base_cdf(lo_);
            base_mass_ = base_cdf(hi_) - base_lo_;
            if (!(base_mass_ > 0.0)) throw std::invalid_argument("truncation interval has no mass");
            break;
    }
    const double m = mean();
    if (std::abs(m) > 1e-6 * width())
        throw std::invalid_argument("noise distribution must have mean zero (got " + std::to_string(m) + ")");
}

NoiseModel NoiseModel::holder(double alpha) {
    return NoiseModel(NoiseKind::holder, 0.0, alpha, -0.5, 0.5);
}

NoiseModel NoiseModel::fan_quadratic() {
    return NoiseModel(NoiseKind::fan_quadratic, 0.0, 1.0, -0.5, 0.5);
}

NoiseModel NoiseModel::trunc_gaussian(double mu, double sigma, double lo, double hi) {
    return NoiseModel(NoiseKind::trunc_gaussian, mu, sigma, lo, hi);
}

NoiseModel NoiseModel::trunc_laplace(double loc, double scale, double lo, double hi) {
    return NoiseModel(NoiseKind::trunc_laplace, loc, scale, lo, hi);
}

NoiseModel NoiseModel::trunc_cauchy(double loc, double scale, double lo, double hi) {
    return NoiseModel(NoiseKind::trunc_cauchy, loc, scale, lo, hi);
}

NoiseModel NoiseModel::from_name(const std::string& name) {
    const auto colon = name.find(':');
    const std::string family = name.substr(0, colon);
    const bool has_param = colon != std::string::npos;
    const double param = has_param ? parse_number(name.substr(colon + 1), name) : 0.0;

    if (family == "holder") {
        if (!has_param) throw std::invalid_argument("holder noise needs an exponent, e.g. holder:0.5");
        return holder(param);
    }
    if (family == "fan_quadratic") {
        if (has_param) throw std::invalid_argument("fan_quadratic takes no parameter");
        return fan_quadratic();
    }
    if (family == "trunc_gaussian") return trunc_gaussian(0.0, has_param ? param : 1.0);
    if (family == "trunc_laplace") return trunc_laplace(0.0, has_param ? param : 0.2);
    if (family == "trunc_cauchy") return trunc_cauchy(0.0, has_param ? param : 0.2);
    throw std::invalid_argument("unknown noise family '" + family + "'");
}

std::string NoiseModel::name() const {
    switch (kind_) {
        case NoiseKind::holder: return "holder";
        case NoiseKind::fan_quadratic: return "fan_quadratic";
        case NoiseKind::trunc_gaussian: return "trunc_gaussian";
        case NoiseKind::trunc_laplace: return "trunc_laplace";
        case NoiseKind::trunc_cauchy: return "trunc_cauchy";
    }
    return "unknown";
}

double NoiseModel::base_cdf(double z) const {
    const double t = (z - location_) / scale_;
    switch (kind_) {
        case NoiseKind::trunc_gaussian: return normal_cdf(t);
        case NoiseKind::trunc_laplace: return t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
        case NoiseKind::trunc_cauchy: return 0.5 + std::atan(t) / std::numbers::pi;
        default: break;
    }
    throw std::logic_error("base_cdf is only defined for truncated families");
}

double NoiseModel::base_quantile(double q) const {
    switch (kind_) {
        case NoiseKind::trunc_laplace:
            return q < 0.5 ? location_ + scale_ * std::log(2.0 * q)
                           : location_ - scale_ * std::log(2.0 * (1.0 - q));
        case NoiseKind::trunc_cauchy:
            return location_ + scale_ * std::tan(std::numbers::pi * (q - 0.5));
        default: break;
    }
    throw std::logic_error("no closed-form base quantile");
}

double NoiseModel::cdf(double z) const {
    if (z <= lo_) return 0.0;
    if (z >= hi_) return 1.0;
    switch (kind_) {
        case NoiseKind::holder: {
            const double alpha = scale_;
            const double mag = std::pow(0.5, 1.0 - alpha) * std::pow(std::abs(z), alpha);
            return z < 0.0 ? 0.5 - mag : 0.5 + mag;
        }
        case NoiseKind::fan_quadratic:
            return 0.5 + 1.5 * z - 2.0 * z * z * z;
        default:
            return std::clamp((base_cdf(z) - base_lo_) / base_mass_, 0.0, 1.0);
    }
}

double NoiseModel::bisect_quantile(double q) const {
    double a = lo_, b = hi_;
    while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        if (cdf(mid) < q) a = mid;
        else b = mid;
    }
    return 0.5 * (a + b);
}

double NoiseModel::quantile(double q) const {
    if (q <= 0.0) return lo_;
    if (q >= 1.0) return hi_;
    switch (kind_) {
        case NoiseKind::holder: {
            const double alpha = scale_;
            const double offset = q - 0.5;
            const double mag = std::pow(std::abs(offset) / std::pow(0.5, 1.0 - alpha), 1.0 / alpha);
            return std::clamp(offset < 0.0 ? -mag : mag, lo_, hi_);
        }
        case NoiseKind::trunc_laplace:
        case NoiseKind::trunc_cauchy:
            return std::clamp(base_quantile(base_lo_ + q * base_mass_), lo_, hi_);
        case NoiseKind::fan_quadratic:
        case NoiseKind::trunc_gaussian:
            return bisect_quantile(q);
    }
    return bisect_quantile(q);
}

double NoiseModel::holder_exponent() const {
    return kind_ == NoiseKind::holder ? scale_ : 1.0;
}

double NoiseModel::holder_constant() const {
    // Maximum density for the Lipschitz families, attained at the support
    // point closest to the location.
    const double peak = std::clamp(location_, lo_, hi_);
    const double t = (peak - location_) / scale_;
    switch (kind_) {
        case NoiseKind::holder: return std::pow(2.0, 1.0 - scale_);
        case NoiseKind::fan_quadratic: return 1.5;
        case NoiseKind::trunc_gaussian:
            return std::exp(-0.5 * t * t) / (std::sqrt(2.0 * std::numbers::pi) * scale_ * base_mass_);
        case NoiseKind::trunc_laplace:
            return std::exp(-std::abs(t)) / (2.0 * scale_ * base_mass_);
        case NoiseKind::trunc_cauchy:
            return 1.0 / (std::numbers::pi * scale_ * (1.0 + t * t) * base_mass_);
    }
    return 1.0;
}

double NoiseModel::mean() const {
    // E[z] = lo + int_lo^hi S(z) dz, composite Simpson.
    constexpr int n = 20000;
    const double h = width() / n;
    double acc = survival(lo_) + survival(hi_);
    for (int i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * survival(lo_ + i * h);
    return lo_ + acc * h / 3.0;
}

MarketSpec::MarketSpec(std::vector<double> theta0, std::vector<Interval> feature_bounds,
                       NoiseModel noise, double p_min, double p_max)
    : theta0_(std::move(theta0)), bounds_(std::move(feature_bounds)), noise_(std::move(noise)),
      p_min_(p_min), p_max_(p_max) {
    if (theta0_.empty()) throw std::invalid_argument("theta0 must contain an intercept");
    if (bounds_.size() + 1 != theta0_.size())
        throw std::invalid_argument("need one feature bound per non-intercept coordinate of theta0");
    for (const auto& b : bounds_) {
        if (!(b.lo <= b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
            throw std::invalid_argument("feature bounds must satisfy lo <= hi");
    }
    if (!(p_min_ < p_max_)) throw std::invalid_argument("p_min must be below p_max");
}

MarketSpec MarketSpec::standard(NoiseModel noise) {
    const double b = std::sqrt(2.0 / 3.0);
    return MarketSpec({3.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0}, {{-b, b}, {-b, b}, {-b, b}}, std::move(noise),
                      0.0, 5.0);
}

double MarketSpec::base_value(std::span<const double> x) const {
    if (x.size() != theta0_.size()) throw std::invalid_argument("context has wrong dimension");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += theta0_[i] * x[i];
    return acc;
}

std::vector<double> MarketSpec::sample_context(Rng& rng) const {
    std::vector<double> x(theta0_.size());
    x[0] = 1.0;
    for (std::size_t i = 0; i < bounds_.size(); ++i) x[i + 1] = rng.uniform(bounds_[i].lo, bounds_[i].hi);
    return x;
}

MarketRound MarketSpec::sample_round(Rng& rng) const {
    MarketRound round;
    round.x = sample_context(rng);
    round.valuation = base_value(round.x) + noise_.sample(rng);
    return round;
}

Interval MarketSpec::valuation_range() const {
    double lo = theta0_[0], hi = theta0_[0];
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
        const double a = theta0_[i + 1] * bounds_[i].lo;
        const double b = theta0_[i + 1] * bounds_[i].hi;
        lo += std::min(a, b);
        hi += std::max(a, b);
    }
    return {lo + noise_.lo(), hi + noise_.hi()};
}

bool MarketSpec::valuations_within_price_window() const {
    const Interval r = valuation_range();
    return r.lo >= p_min_ && r.hi <= p_max_;
}

double MarketSpec::context_radius() const {
    double acc = 1.0;
    for (const auto& b : bounds_) acc += std::max(b.lo * b.lo, b.hi * b.hi);
    return std::sqrt(acc);
}

double expected_revenue(const NoiseModel& noise, double offset, double price) {
    return price * noise.survival(price - offset);
}

PriceChoice oracle_price(const NoiseModel& noise, double offset, double p_min, double p_max) {
    if (!(p_min < p_max)) throw std::invalid_argument("p_min must be below p_max");
    // Below offset + lo the sale is certain and revenue is p itself; above
    // offset + hi revenue is zero. Only the window in between needs a search.
    const double window_lo = std::max(p_min, offset + noise.lo());
    const double window_hi = std::min(p_max, offset + noise.hi());
    if (window_lo >= p_max) return {p_max, expected_revenue(noise, offset, p_max)};
    if (window_hi <= p_min) return {p_min, expected_revenue(noise, offset, p_min)};

    auto revenue = [&](double p) { return expected_revenue(noise, offset, p); };

    const int n = kOracleGridPoints;
    const double step = (window_hi - window_lo) / (n - 1);
    int best = 0;
    double best_rev = revenue(window_lo);
    for (int i = 1; i < n; ++i) {
        const double r = revenue(window_lo + i * step);
        if (r > best_rev) {
            best_rev = r;
            best = i;
        }
    }
    PriceChoice choice{window_lo + best * step, best_rev};

    double a = window_lo + std::max(0, best - 1) * step;
    double b = window_lo + std::min(n - 1, best + 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double rc = revenue(c), rd = revenue(d);
    for (int iter = 0; iter < 80 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++iter) {
        if (rc >= rd) {
            b = d;
            d = c;
            rd = rc;
            c = b - inv_phi * (b - a);
            rc = revenue(c);
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + inv_phi * (b - a);
            rd = revenue(d);
        }
    }
    for (double p : {c, d}) {
        const double r = revenue(p);
        if (r > choice.revenue) choice = {p, r};
    }
    return choice;
}

PriceChoice oracle_price(const MarketSpec& spec, std::span<const double> x) {
    return oracle_price(spec.noise(), spec.base_value(x), spec.p_min(), spec.p_max());
}

MonteCarloEstimate s_theta_oracle(const MarketSpec& spec, std::span<const double> theta, double u,
                                  std::size_t mc_n, Rng& rng) {
    if (theta.size() != spec.dim()) throw std::invalid_argument("theta has wrong dimension");
    if (mc_n < 2) throw std::invalid_argument("need at least two Monte Carlo draws");
    std::vector<double> delta(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) delta[i] = theta[i] - spec.theta0()[i];

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < mc_n; ++k) {
        const auto x = spec.sample_context(rng);
        double shift = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) shift += delta[i] * x[i];
        const double s = spec.noise().survival(u + shift);
        sum += s;
        sum_sq += s * s;
    }
    const double n = static_cast<double>(mc_n);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

}  // namespace dynprice
