// dynprice: simulate, rate-test and replay driver for the antitonic pricing policy.
#include "dynprice/experiment.hpp"
#include "dynprice/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> tau1;
    std::optional<double> alpha;
    std::optional<std::string> noise;
    std::optional<std::string> out;
    std::optional<std::size_t> checkpoint_every;
    std::optional<std::string> policy;
    std::optional<std::string> data;
    std::optional<std::size_t> rows;
    std::optional<unsigned> threads;
    bool timing = false;
    bool no_traces = false;
};

dynprice::ExperimentConfig defaults_for(dynprice::Mode mode) {
    dynprice::ExperimentConfig cfg;
    cfg.mode = mode;
    switch (mode) {
        case dynprice::Mode::replay:
            cfg.horizon = 2250;
            cfg.pricing.tau1 = 150;
            cfg.replay.data_path = "data/replay_synthetic.csv";
            break;
        case dynprice::Mode::rate_test_s:
            cfg.replications = 20;
            break;
        case dynprice::Mode::rate_test_theta:
            cfg.market = dynprice::MarketSpec::standard(dynprice::NoiseModel::holder(1.0));
            cfg.replications = 50;
            break;
        default:
            break;
    }
    return cfg;
}

dynprice::ExperimentConfig build_config(dynprice::Mode mode, const Overrides& o) {
    dynprice::ExperimentConfig cfg = o.config.empty() ? defaults_for(mode) : dynprice::load_config(o.config);
    cfg.mode = mode;
    if (o.seed) cfg.seed = *o.seed;
    if (o.reps) cfg.replications = *o.reps;
    if (o.horizon) cfg.horizon = *o.horizon;
    if (o.tau1) cfg.pricing.tau1 = *o.tau1;
    if (o.noise) {
        const auto noise = dynprice::NoiseModel::from_name(*o.noise);
        cfg.market = dynprice::MarketSpec(cfg.market.theta0(), cfg.market.feature_bounds(), noise,
                                          cfg.market.p_min(), cfg.market.p_max());
        if (!o.alpha && noise.kind() == dynprice::NoiseKind::holder) cfg.pricing.alpha = noise.holder_exponent();
    }
    if (o.alpha) cfg.pricing.alpha = *o.alpha;
    if (o.out) cfg.output_dir = *o.out;
    if (o.checkpoint_every) cfg.checkpoint_every = *o.checkpoint_every;
    if (o.policy) cfg.policy = dynprice::parse_policy_kind(*o.policy);
    if (o.data) cfg.replay.data_path = *o.data;
    if (o.rows) cfg.generator.rows = *o.rows;
    if (o.threads) cfg.threads = *o.threads;
    if (o.timing) cfg.record_runtime = true;
    if (o.no_traces) cfg.write_traces = false;
    cfg.finalize();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shape-constrained contextual dynamic pricing: simulation, rate tests and data replay"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config, "JSON experiment configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Master random seed");
    app.add_option("--reps", o.reps, "Number of replications");
    app.add_option("--horizon", o.horizon, "Number of rounds T");
    app.add_option("--tau1", o.tau1, "First episode length");
    app.add_option("--alpha", o.alpha, "Hoelder exponent assumed by the policy (rate-test-s: of the noise)");
    app.add_option("--noise", o.noise,
                   "Noise family: holder:A, fan_quadratic, trunc_gaussian[:sigma], trunc_laplace[:scale], "
                   "trunc_cauchy[:scale]");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--checkpoint-every", o.checkpoint_every, "Summary checkpoint spacing (0 = episode ends)");
    app.add_option("--policy", o.policy, "antitonic | uniform_random | clairvoyant");
    app.add_option("--data", o.data, "Replay CSV path");
    app.add_option("--rows", o.rows, "Rows to generate (gen-replay-data)");
    app.add_option("--threads", o.threads, "Worker threads for replications (0 = all cores)");
    app.add_flag("--timing", o.timing, "Record wall-clock runtime in summary.json");
    app.add_flag("--no-traces", o.no_traces, "Skip per-replication trace files");

    struct Sub {
        const char* name;
        const char* help;
        dynprice::Mode mode;
    };
    const Sub subs[] = {
        {"simulate", "Run the policy against the synthetic market and record regret", dynprice::Mode::simulate},
        {"rate-test-s", "Uniform error rate of the antitonic survival estimate", dynprice::Mode::rate_test_s},
        {"rate-test-theta", "Error scaling of the OLS valuation estimate", dynprice::Mode::rate_test_theta},
        {"replay", "Revenue emulation on a transaction-price CSV", dynprice::Mode::replay},
        {"gen-replay-data", "Write a synthetic CSV with the replay schema", dynprice::Mode::gen_replay_data},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& s : subs) {
            if (!app.got_subcommand(s.name)) continue;
            const auto cfg = build_config(s.mode, o);
            const auto report = dynprice::run_experiment(cfg);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << report.summary_json;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
