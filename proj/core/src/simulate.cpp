#include "dynprice/simulate.hpp"

#include "dynprice/baseline.hpp"
#include "parallel.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace dynprice {

std::uint64_t context_digest(std::span<const double> x) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (double v : x) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::unique_ptr<PricingPolicy> make_policy(const ExperimentConfig& cfg, const MarketSpec* market,
                                           std::size_t rep) {
    const std::uint64_t stream = 2 * static_cast<std::uint64_t>(rep) + 1;
    switch (cfg.policy) {
        case PolicyKind::antitonic: {
            PricingConfig pc = cfg.pricing;
            pc.seed = cfg.seed;
            return std::make_unique<SemiParametricPolicy>(pc, cfg.horizon, stream);
        }
        case PolicyKind::uniform_random:
            return std::make_unique<BaselinePolicy>(BaselineKind::uniform_random, market, cfg.pricing.p_min,
                                                    cfg.pricing.p_max, Rng(cfg.seed, stream));
        case PolicyKind::clairvoyant:
            return std::make_unique<BaselinePolicy>(BaselineKind::clairvoyant, market, cfg.pricing.p_min,
                                                    cfg.pricing.p_max, Rng(cfg.seed, stream));
    }
    throw std::logic_error("unhandled policy kind");
}

std::vector<std::size_t> checkpoint_rounds(const EpochSchedule& schedule, std::size_t every) {
    std::vector<std::size_t> rounds;
    if (every == 0) {
        for (const auto& ep : schedule.episodes) rounds.push_back(ep.rounds.end);
        return rounds;
    }
    for (std::size_t t = every; t <= schedule.horizon; t += every) rounds.push_back(t);
    if (rounds.empty() || rounds.back() != schedule.horizon) rounds.push_back(schedule.horizon);
    return rounds;
}

std::vector<CheckpointStat> summarize(const std::vector<RegretTrace>& traces,
                                      const std::vector<std::size_t>& rounds,
                                      double RoundRecord::*column) {
    std::vector<CheckpointStat> out;
    std::vector<double> values(traces.size());
    for (std::size_t t : rounds) {
        for (std::size_t r = 0; r < traces.size(); ++r) values[r] = traces[r].rounds.at(t - 1).*column;
        const MeanInterval ci = normal_interval(values);
        out.push_back({t, ci.mean, ci.lo, ci.hi});
    }
    return out;
}

SlopeEstimate episode_slope(const std::vector<CheckpointStat>& episode_ends, std::size_t first,
                            std::size_t last) {
    if (last == 0 || last > episode_ends.size()) last = episode_ends.size();
    if (first < 1) first = 1;
    std::vector<CurvePoint> points;
    for (std::size_t k = first; k <= last; ++k) {
        const auto& c = episode_ends[k - 1];
        points.push_back({static_cast<double>(c.t), c.mean});
    }
    return estimate_slope(points);
}

RegretTrace simulate_replication(const ExperimentConfig& cfg, const EpochSchedule& schedule, std::size_t rep) {
    const MarketSpec& market = cfg.market;
    Rng market_rng(cfg.seed, 2 * static_cast<std::uint64_t>(rep));
    auto policy = make_policy(cfg, &market, rep);

    RegretTrace trace;
    trace.rounds.reserve(cfg.horizon);
    double cum = 0.0;
    double cum_revenue = 0.0;
    std::size_t episode = 0;
    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        while (!schedule.episodes[episode].rounds.contains(t)) ++episode;
        const MarketRound round = market.sample_round(market_rng);
        const Quote quote = policy->next_price(round.x);
        const bool sold = quote.price <= round.valuation;
        policy->observe(round.x, quote.price, sold);

        const double offset = market.base_value(round.x);
        const PriceChoice best = oracle_price(market.noise(), offset, market.p_min(), market.p_max());
        const double inst = best.revenue - expected_revenue(market.noise(), offset, quote.price);
        cum += inst;

        RoundRecord rec;
        rec.t = t + 1;
        rec.episode = schedule.episodes[episode].index;
        rec.phase = cfg.policy == PolicyKind::antitonic ? quote.phase : schedule.phase_of(t);
        rec.context_digest = context_digest(round.x);
        rec.price = quote.price;
        rec.sold = sold;
        rec.revenue = sold ? quote.price : 0.0;
        rec.oracle_price = best.price;
        rec.inst_regret = inst;
        rec.cum_regret = cum;
        cum_revenue += rec.revenue;
        rec.cum_revenue = cum_revenue;
        trace.rounds.push_back(rec);
    }
    return trace;
}

SimulationResult run_simulation(const ExperimentConfig& cfg) {
    SimulationResult result;
    result.schedule = build_schedule(cfg.pricing, cfg.horizon);
    if (!cfg.market.valuations_within_price_window())
        result.warnings.push_back("valuation range exceeds [p_min, p_max]; the OLS intercept identity is approximate");

    result.traces.resize(cfg.replications);
    detail::parallel_for(cfg.replications, cfg.threads, [&](std::size_t rep) {
        result.traces[rep] = simulate_replication(cfg, result.schedule, rep);
    });

    result.checkpoints = summarize(result.traces, checkpoint_rounds(result.schedule, cfg.checkpoint_every),
                                   &RoundRecord::cum_regret);
    result.episode_ends = summarize(result.traces, checkpoint_rounds(result.schedule, 0), &RoundRecord::cum_regret);
    try {
        result.slope = episode_slope(result.episode_ends, cfg.slope_first_episode, cfg.slope_last_episode);
        for (const auto& w : result.slope->warnings) result.warnings.push_back(w);
    } catch (const std::invalid_argument& e) {
        result.warnings.push_back(std::string("slope not estimated: ") + e.what());
    }
    return result;
}

}  // namespace dynprice
