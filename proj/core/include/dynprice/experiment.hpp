#pragma once

#include "dynprice/market.hpp"
#include "dynprice/policy.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dynprice {

enum class Mode { simulate, rate_test_s, rate_test_theta, replay, gen_replay_data };
enum class PolicyKind { antitonic, uniform_random, clairvoyant };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);
PolicyKind parse_policy_kind(const std::string& name);
std::string policy_name(PolicyKind kind);

struct ReplayConfig {
    std::filesystem::path data_path;
    // Standardize numeric regressors before they reach the policy. OLS is
    // affine-equivariant, so this only affects conditioning.
    bool standardize = true;
};

struct GeneratorConfig {
    std::size_t rows = 5000;
};

struct ExperimentConfig {
    Mode mode = Mode::simulate;
    PolicyKind policy = PolicyKind::antitonic;
    MarketSpec market = MarketSpec::standard(NoiseModel::trunc_gaussian(0.0, 1.0));
    PricingConfig pricing;
    std::size_t horizon = 25500;
    std::size_t replications = 12;
    std::uint64_t seed = 1;
    // Summary checkpoint spacing in rounds; 0 means one checkpoint per episode end.
    std::size_t checkpoint_every = 0;
    // Episodes (1-based, inclusive) whose end points enter the slope fit; 0 = last.
    std::size_t slope_first_episode = 3;
    std::size_t slope_last_episode = 0;
    unsigned threads = 0;
    std::filesystem::path output_dir = "out";
    bool record_runtime = false;
    bool write_traces = true;

    // Support assumed by the policy; defaults to the market noise support
    // (simulate) or (-17, 12) (replay).
    std::optional<Interval> policy_support;

    std::vector<std::size_t> n_values;  // rate tests
    ReplayConfig replay;
    GeneratorConfig generator;

    // Aligns pricing bounds, noise support and dimension with the market
    // (simulate and rate modes) and checks invariants.
    void finalize();
};

// Parses the JSON configuration format. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace dynprice
