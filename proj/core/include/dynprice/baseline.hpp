#pragma once

#include "dynprice/market.hpp"
#include "dynprice/policy.hpp"
#include "dynprice/rng.hpp"

#include <optional>
#include <string>

namespace dynprice {

enum class BaselineKind { uniform_random, clairvoyant };

BaselineKind parse_baseline_kind(const std::string& name);
std::string baseline_name(BaselineKind kind);

// uniform_random: unif(p_min, p_max). clairvoyant: oracle_price under the
// true market, so it needs a spec and is unavailable when replaying data.
double baseline_price(BaselineKind kind, const MarketSpec* spec, double p_min, double p_max,
                      std::span<const double> x, Rng& rng);

class BaselinePolicy final : public PricingPolicy {
public:
    // spec may be null for uniform_random.
    BaselinePolicy(BaselineKind kind, const MarketSpec* spec, double p_min, double p_max, Rng rng);

    Quote next_price(std::span<const double> x) override;
    void observe(std::span<const double>, double, bool) override {}

    BaselineKind kind() const { return kind_; }

private:
    BaselineKind kind_;
    const MarketSpec* spec_;
    double p_min_;
    double p_max_;
    Rng rng_;
};

}  // namespace dynprice
