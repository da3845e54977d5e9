#pragma once

#include "dynprice/experiment.hpp"
#include "dynprice/policy.hpp"
#include "dynprice/slope.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dynprice {

struct RoundRecord {
    std::size_t t = 0;        // 1-based round number
    std::size_t episode = 0;  // 1-based
    Phase phase = Phase::explore_ols;
    std::uint64_t context_digest = 0;
    double price = 0.0;
    bool sold = false;
    double revenue = 0.0;
    double oracle_price = 0.0;
    double inst_regret = 0.0;  // r(p*) - r(p), conditional expectations
    double cum_regret = 0.0;
    double cum_revenue = 0.0;
};

struct RegretTrace {
    std::vector<RoundRecord> rounds;
};

struct CheckpointStat {
    std::size_t t = 0;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct SimulationResult {
    EpochSchedule schedule;
    std::vector<RegretTrace> traces;
    std::vector<CheckpointStat> checkpoints;   // per cfg.checkpoint_every
    std::vector<CheckpointStat> episode_ends;  // one per episode
    std::optional<SlopeEstimate> slope;        // over the configured episode window
    std::vector<std::string> warnings;
};

std::uint64_t context_digest(std::span<const double> x);

// Policy for replication `rep` under the configured kind. The market is
// required for clairvoyant pricing.
std::unique_ptr<PricingPolicy> make_policy(const ExperimentConfig& cfg, const MarketSpec* market,
                                           std::size_t rep);

// Round indices t (1-based) for the summary table.
std::vector<std::size_t> checkpoint_rounds(const EpochSchedule& schedule, std::size_t every);

// Mean and 95% interval of a per-round column across replications.
std::vector<CheckpointStat> summarize(const std::vector<RegretTrace>& traces,
                                      const std::vector<std::size_t>& rounds,
                                      double RoundRecord::*column);

// Slope of mean cumulative regret at the ends of episodes [first, last]
// (1-based, last = 0 means the final episode).
SlopeEstimate episode_slope(const std::vector<CheckpointStat>& episode_ends, std::size_t first,
                            std::size_t last);

RegretTrace simulate_replication(const ExperimentConfig& cfg, const EpochSchedule& schedule, std::size_t rep);

SimulationResult run_simulation(const ExperimentConfig& cfg);

}  // namespace dynprice
