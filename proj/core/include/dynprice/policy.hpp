#pragma once

#include "dynprice/antitonic.hpp"
#include "dynprice/market.hpp"
#include "dynprice/ols.hpp"
#include "dynprice/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dynprice {

struct PricingConfig {
    double p_min = 0.0;
    double p_max = 5.0;
    double u_lo = -0.5;  // noise support
    double u_hi = 0.5;
    double alpha = 1.0;  // Hoelder exponent of the survival function
    std::size_t tau1 = 100;
    std::size_t dim = 4;  // context dimension, intercept included
    std::uint64_t seed = 1;

    double price_range() const { return p_max - p_min; }
    void validate() const;
};

// Regret-rate exponent nu(alpha); also sets the growth of exploration phases.
double nu(double alpha);

enum class Phase { explore_ols, explore_antitonic, exploit };

std::string_view phase_name(Phase phase);

// Half-open round range [begin, end).
struct RoundRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
    bool contains(std::size_t t) const { return t >= begin && t < end; }
};

struct Episode {
    std::size_t index = 1;          // k, 1-based
    std::size_t nominal_length = 0;  // tau_k = tau1 * 2^(k-1)
    std::size_t explore_length = 0;  // a_k
    RoundRange rounds;               // J_k, truncated at the horizon
    RoundRange ols_phase;            // I_k
    RoundRange antitonic_phase;      // tilde I_k
    RoundRange exploit_phase;        // E'_k
};

struct EpochSchedule {
    std::size_t horizon = 0;
    std::vector<Episode> episodes;

    std::size_t size() const { return episodes.size(); }
    // Episode position (0-based) of round t (0-based).
    std::size_t episode_of(std::size_t t) const;
    Phase phase_of(std::size_t t) const;
};

// a_k = ceil(d^(alpha/(2+alpha)) * tau^nu(alpha) / 2)
std::size_t exploration_length(std::size_t dim, double alpha, std::size_t tau);

EpochSchedule build_schedule(const PricingConfig& cfg, std::size_t horizon);

struct Quote {
    double price = 0.0;
    Phase phase = Phase::explore_ols;
};

// Supremum of p * s(p - offset) over [p_min, p_max]. On each constant piece
// p * level grows toward the right end, so candidates are p_min, p_max and
// the shifted breakpoints; a breakpoint candidate carries the level of the
// piece to its left. Ties go to the smallest price.
PriceChoice maximize_step_revenue(const StepFunction& s, double offset, double p_min, double p_max);

// Sequential posted-price policy driven by the harness: next_price, then
// observe with the sale outcome.
class PricingPolicy {
public:
    virtual ~PricingPolicy() = default;
    virtual Quote next_price(std::span<const double> x) = 0;
    virtual void observe(std::span<const double> x, double price, bool sold) = 0;
};

// Epoch-doubling explore/exploit policy: OLS on uniform-price rounds,
// antitonic regression on offset-sampling rounds, then plug-in pricing.
class SemiParametricPolicy final : public PricingPolicy {
public:
    SemiParametricPolicy(PricingConfig cfg, std::size_t horizon, std::uint64_t stream = 0);

    Quote next_price(std::span<const double> x) override;
    void observe(std::span<const double> x, double price, bool sold) override;

    const PricingConfig& config() const { return cfg_; }
    const EpochSchedule& schedule() const { return schedule_; }
    std::size_t rounds_completed() const { return t_; }
    bool exhausted() const { return t_ >= schedule_.horizon; }

    const std::optional<OlsFit>& theta_hat() const { return theta_hat_; }
    const std::optional<StepFunction>& s_hat() const { return s_hat_; }
    // Episode (1-based) whose data produced theta_hat; differs from the
    // current episode when a singular design forced a carry-over.
    std::size_t theta_episode() const { return theta_episode_; }

    std::size_t ols_buffer_size() const { return ols_x_.rows(); }
    std::size_t antitonic_buffer_size() const { return antitonic_obs_.size(); }

private:
    struct Pending {
        std::vector<double> x;
        double price = 0.0;
        double w = 0.0;
        Phase phase = Phase::explore_ols;
    };

    void finish_round();
    void fit_theta(const Episode& ep);
    void fit_survival();

    PricingConfig cfg_;
    EpochSchedule schedule_;
    Rng rng_;
    std::size_t t_ = 0;
    std::optional<Pending> pending_;

    std::optional<OlsFit> theta_hat_;
    std::size_t theta_episode_ = 0;
    std::optional<StepFunction> s_hat_;

    Design ols_x_;
    std::vector<double> ols_y_;
    std::vector<BinaryObservation> antitonic_obs_;
};

}  // namespace dynprice
