#include "dynprice/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynprice {

void PricingConfig::validate() const {
    if (!(p_min < p_max) || !std::isfinite(p_min) || !std::isfinite(p_max))
        throw std::invalid_argument("pricing config: p_min must be below p_max");
    if (!(u_lo < u_hi) || !std::isfinite(u_lo) || !std::isfinite(u_hi))
        throw std::invalid_argument("pricing config: noise support needs u_lo < u_hi");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("pricing config: alpha must lie in (0, 1]");
    if (tau1 < 2) throw std::invalid_argument("pricing config: tau1 must be at least 2");
    if (dim < 1) throw std::invalid_argument("pricing config: context dimension must be positive");
}

double nu(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("nu: alpha must lie in (0, 1]");
    if (alpha < 0.5) return 2.0 / (2.0 + alpha);
    return (2.0 * alpha + 1.0) / (3.0 * alpha + 1.0);
}

std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::explore_ols: return "explore_ols";
        case Phase::explore_antitonic: return "explore_antitonic";
        case Phase::exploit: return "exploit";
    }
    return "unknown";
}

std::size_t EpochSchedule::episode_of(std::size_t t) const {
    if (t >= horizon) throw std::out_of_range("round outside the schedule");
    auto it = std::upper_bound(episodes.begin(), episodes.end(), t,
                               [](std::size_t v, const Episode& ep) { return v < ep.rounds.begin; });
    return static_cast<std::size_t>(it - episodes.begin()) - 1;
}

Phase EpochSchedule::phase_of(std::size_t t) const {
    const Episode& ep = episodes[episode_of(t)];
    if (ep.ols_phase.contains(t)) return Phase::explore_ols;
    if (ep.antitonic_phase.contains(t)) return Phase::explore_antitonic;
    return Phase::exploit;
}

std::size_t exploration_length(std::size_t dim, double alpha, std::size_t tau) {
    const double raw = std::pow(static_cast<double>(dim), alpha / (2.0 + alpha)) *
                       std::pow(static_cast<double>(tau), nu(alpha)) / 2.0;
    // Guard against values like 2.0000000000004 that are integers in exact arithmetic.
    return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

EpochSchedule build_schedule(const PricingConfig& cfg, std::size_t horizon) {
    cfg.validate();
    if (horizon < cfg.tau1) throw std::invalid_argument("horizon must be at least tau1");

    EpochSchedule schedule;
    schedule.horizon = horizon;
    std::size_t start = 0;
    std::size_t tau = cfg.tau1;
    for (std::size_t k = 1; start < horizon; ++k, tau *= 2) {
        Episode ep;
        ep.index = k;
        ep.nominal_length = tau;
        ep.explore_length = exploration_length(cfg.dim, cfg.alpha, tau);
        if (2 * ep.explore_length > tau) {
            if (k == 1) throw std::invalid_argument("tau1 too small for given d, alpha");
            throw std::invalid_argument("exploration does not fit in episode " + std::to_string(k));
        }
        const std::size_t end = std::min(start + tau, horizon);
        auto clip = [&](std::size_t a, std::size_t b) {
            return RoundRange{std::min(a, end), std::min(b, end)};
        };
        ep.rounds = {start, end};
        ep.ols_phase = clip(start, start + ep.explore_length);
        ep.antitonic_phase = clip(start + ep.explore_length, start + 2 * ep.explore_length);
        ep.exploit_phase = clip(start + 2 * ep.explore_length, start + tau);
        schedule.episodes.push_back(ep);
        start = end;
    }
    return schedule;
}

PriceChoice maximize_step_revenue(const StepFunction& s, double offset, double p_min, double p_max) {
    if (!(p_min < p_max)) throw std::invalid_argument("p_min must be below p_max");
    const auto u = s.breakpoints();
    const auto level = s.levels();
    const std::size_t m = level.size();

    PriceChoice best{p_min, p_min * s(p_min - offset)};
    auto consider = [&](double p, double revenue) {
        if (revenue > best.revenue) best = {p, revenue};
    };

    // Piece j covers prices [u_j + offset, u_{j+1} + offset); the first piece
    // extends to -inf and the last to +inf.
    for (std::size_t j = 0; j < m; ++j) {
        const double left = j == 0 ? -std::numeric_limits<double>::infinity() : u[j] + offset;
        const double right = j + 1 == m ? std::numeric_limits<double>::infinity() : u[j + 1] + offset;
        if (right <= p_min || left > p_max) continue;
        const double lo = std::max(left, p_min);
        const double hi = std::min(right, p_max);
        if (level[j] >= 0.0) consider(hi, hi * level[j]);
        else consider(lo, lo * level[j]);
    }
    return best;
}

SemiParametricPolicy::SemiParametricPolicy(PricingConfig cfg, std::size_t horizon, std::uint64_t stream)
    : cfg_(cfg), schedule_(build_schedule(cfg, horizon)), rng_(cfg.seed, stream), ols_x_(cfg.dim) {}

Quote SemiParametricPolicy::next_price(std::span<const double> x) {
    if (exhausted()) throw std::out_of_range("policy horizon exhausted");
    if (pending_) throw std::logic_error("next_price called twice without observe");
    if (x.size() != cfg_.dim) throw std::invalid_argument("context has wrong dimension");
    if (x[0] != 1.0) throw std::invalid_argument("context must start with an intercept 1");

    Pending p;
    p.x.assign(x.begin(), x.end());
    p.phase = schedule_.phase_of(t_);
    switch (p.phase) {
        case Phase::explore_ols:
            p.price = rng_.uniform(cfg_.p_min, cfg_.p_max);
            break;
        case Phase::explore_antitonic:
            p.w = rng_.uniform(cfg_.u_lo, cfg_.u_hi);
            if (theta_hat_) {
                p.price = p.w + theta_hat_->predict(x);
            } else {
                // No usable theta yet: map the same draw onto the price range.
                p.price = cfg_.p_min + cfg_.price_range() * (p.w - cfg_.u_lo) / (cfg_.u_hi - cfg_.u_lo);
            }
            break;
        case Phase::exploit:
            if (theta_hat_ && s_hat_) {
                p.price = maximize_step_revenue(*s_hat_, theta_hat_->predict(x), cfg_.p_min, cfg_.p_max).price;
            } else {
                p.price = rng_.uniform(cfg_.p_min, cfg_.p_max);
            }
            break;
    }
    pending_ = std::move(p);
    return {pending_->price, pending_->phase};
}

void SemiParametricPolicy::observe(std::span<const double> x, double price, bool sold) {
    if (!pending_) throw std::logic_error("observe called without a pending quote");
    if (price != pending_->price || !std::equal(x.begin(), x.end(), pending_->x.begin(), pending_->x.end()))
        throw std::logic_error("observation does not match the last quote");

    const double y = sold ? 1.0 : 0.0;
    switch (pending_->phase) {
        case Phase::explore_ols:
            ols_x_.add_row(x);
            ols_y_.push_back(cfg_.price_range() * y);
            break;
        case Phase::explore_antitonic:
            if (theta_hat_) antitonic_obs_.push_back({pending_->w, sold ? 1 : 0});
            break;
        case Phase::exploit:
            break;
    }
    pending_.reset();
    finish_round();
}

void SemiParametricPolicy::finish_round() {
    const Episode& ep = schedule_.episodes[schedule_.episode_of(t_)];
    ++t_;
    if (ep.ols_phase.size() == ep.explore_length && t_ == ep.ols_phase.end) fit_theta(ep);
    if (ep.antitonic_phase.size() == ep.explore_length && t_ == ep.antitonic_phase.end) fit_survival();
    if (t_ == ep.rounds.end) {
        ols_x_.clear();
        ols_y_.clear();
        antitonic_obs_.clear();
        s_hat_.reset();
    }
}

void SemiParametricPolicy::fit_theta(const Episode& ep) {
    try {
        theta_hat_ = intercept_correction(fit_ols(ols_x_, ols_y_), cfg_.p_min);
        theta_episode_ = ep.index;
    } catch (const SingularDesign&) {
        // Keep the previous episode's estimate, if any.
    }
}

void SemiParametricPolicy::fit_survival() {
    if (antitonic_obs_.empty()) return;
    s_hat_ = fit_pava(aggregate(antitonic_obs_));
}

}  // namespace dynprice
