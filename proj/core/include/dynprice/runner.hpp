#pragma once

#include "dynprice/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dynprice {

struct RunReport {
    std::vector<std::filesystem::path> files;
    std::string summary_json;
    std::vector<std::string> warnings;
};

// Runs the configured mode and writes its outputs under cfg.output_dir:
//   simulate / replay:  trace_repNNN.csv, summary.csv, summary.json
//   rate_test_s:        rate_test_s.csv, summary.json
//   rate_test_theta:    rate_test_theta.csv, summary.json
//   gen_replay_data:    replay_synthetic.csv, summary.json
// cfg must already be finalized.
RunReport run_experiment(const ExperimentConfig& cfg);

std::vector<std::size_t> default_n_values(Mode mode);

}  // namespace dynprice
