#pragma once

#include "dynprice/experiment.hpp"
#include "dynprice/simulate.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dynprice {

// Transaction table with columns mkt_rate_d, sqft, med_home, unit_type,
// act_rate_d. unit_type is one of "1 bed" (reference level), "2 bed",
// "other", "studio".
struct ReplayData {
    std::vector<std::string> feature_names;     // intercept first
    std::vector<std::vector<double>> contexts;  // one row per record, x[0] = 1
    std::vector<double> valuations;             // act_rate_d
    bool standardized = false;

    std::size_t rows() const { return valuations.size(); }
    std::size_t dim() const { return feature_names.size(); }
};

ReplayData parse_replay_csv(std::istream& in, bool standardize);
ReplayData load_replay_csv(const std::filesystem::path& path, bool standardize);

// Synthetic table with the replay schema: features drawn with magnitudes
// similar to the rental data, valuations from a fixed linear model plus
// mean-zero noise on (-17, 12).
void write_synthetic_replay_csv(std::ostream& out, std::size_t rows, std::uint64_t seed);

struct ReplayResult {
    double p_min = 0.0;
    double p_max = 0.0;
    std::vector<RegretTrace> traces;          // oracle_price = v, inst_regret = v - revenue
    std::vector<CheckpointStat> checkpoints;  // cumulative revenue
    std::vector<CheckpointStat> episode_ends; // cumulative revenue
    double mean_revenue = 0.0;                // mean Rev(T) across shuffles
};

ReplayResult run_replay(const ExperimentConfig& cfg, const ReplayData& data);

}  // namespace dynprice
