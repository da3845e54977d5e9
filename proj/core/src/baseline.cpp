#include "dynprice/baseline.hpp"

#include <stdexcept>

namespace dynprice {

BaselineKind parse_baseline_kind(const std::string& name) {
    if (name == "uniform_random") return BaselineKind::uniform_random;
    if (name == "clairvoyant") return BaselineKind::clairvoyant;
    throw std::invalid_argument("unknown baseline '" + name + "'");
}

std::string baseline_name(BaselineKind kind) {
    return kind == BaselineKind::uniform_random ? "uniform_random" : "clairvoyant";
}

double baseline_price(BaselineKind kind, const MarketSpec* spec, double p_min, double p_max,
                      std::span<const double> x, Rng& rng) {
    switch (kind) {
        case BaselineKind::uniform_random:
            return rng.uniform(p_min, p_max);
        case BaselineKind::clairvoyant:
            if (spec == nullptr)
                throw std::invalid_argument("clairvoyant pricing needs the true market (simulate mode only)");
            return oracle_price(*spec, x).price;
    }
    throw std::logic_error("unhandled baseline kind");
}

BaselinePolicy::BaselinePolicy(BaselineKind kind, const MarketSpec* spec, double p_min, double p_max, Rng rng)
    : kind_(kind), spec_(spec), p_min_(p_min), p_max_(p_max), rng_(rng) {
    if (!(p_min_ <= p_max_)) throw std::invalid_argument("p_min must not exceed p_max");
    if (kind_ == BaselineKind::clairvoyant && spec_ == nullptr)
        throw std::invalid_argument("clairvoyant pricing needs the true market (simulate mode only)");
}

Quote BaselinePolicy::next_price(std::span<const double> x) {
    return {baseline_price(kind_, spec_, p_min_, p_max_, x, rng_), Phase::exploit};
}

}  // namespace dynprice
