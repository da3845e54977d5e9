#include "dynprice/runner.hpp"

#include "dynprice/rate_tests.hpp"
#include "dynprice/replay.hpp"
#include "dynprice/simulate.hpp"
#include "dynprice/trace_io.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dynprice {

using nlohmann::ordered_json;

std::vector<std::size_t> default_n_values(Mode mode) {
    if (mode == Mode::rate_test_theta) return {1000, 2000, 4000, 8000, 16000};
    std::vector<std::size_t> n;
    for (std::size_t v = 256; v <= 16384; v *= 2) n.push_back(v);
    return n;
}

namespace {

std::string trace_name(std::size_t rep) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "trace_rep%03zu.csv", rep);
    return buffer;
}

ordered_json common_header(const ExperimentConfig& cfg) {
    ordered_json j;
    j["mode"] = mode_name(cfg.mode);
    j["seed"] = cfg.seed;
    j["replications"] = cfg.replications;
    return j;
}

ordered_json checkpoints_json(const std::vector<CheckpointStat>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) arr.push_back({{"t", r.t}, {"mean", r.mean}, {"ci_lo", r.ci_lo}, {"ci_hi", r.ci_hi}});
    return arr;
}

void write_traces(const ExperimentConfig& cfg, const std::vector<RegretTrace>& traces, bool with_revenue,
                  RunReport& report) {
    if (!cfg.write_traces) return;
    for (std::size_t r = 0; r < traces.size(); ++r) {
        const auto path = cfg.output_dir / trace_name(r);
        write_trace_csv(path, traces[r], with_revenue);
        report.files.push_back(path);
    }
}

ordered_json run_simulate(const ExperimentConfig& cfg, RunReport& report) {
    const SimulationResult sim = run_simulation(cfg);
    write_traces(cfg, sim.traces, false, report);
    const auto summary_csv = cfg.output_dir / "summary.csv";
    write_checkpoints_csv(summary_csv, sim.checkpoints);
    report.files.push_back(summary_csv);
    report.warnings.insert(report.warnings.end(), sim.warnings.begin(), sim.warnings.end());

    ordered_json j = common_header(cfg);
    j["policy"] = policy_name(cfg.policy);
    j["noise"] = cfg.market.noise().name();
    j["horizon"] = cfg.horizon;
    j["tau1"] = cfg.pricing.tau1;
    j["alpha"] = cfg.pricing.alpha;
    j["episodes"] = sim.schedule.size();
    j["theory_rate"] = nu(cfg.pricing.alpha);
    j["final_mean_regret"] = sim.episode_ends.back().mean;
    if (sim.slope) {
        j["slope"] = sim.slope->slope;
        j["stderr"] = sim.slope->std_error;
        j["slope_points"] = sim.slope->points_used;
    } else {
        j["slope"] = nullptr;
        j["stderr"] = nullptr;
    }
    j["slope_window"] = {cfg.slope_first_episode,
                         cfg.slope_last_episode == 0 ? sim.schedule.size() : cfg.slope_last_episode};
    j["episode_ends"] = checkpoints_json(sim.episode_ends);
    return j;
}

ordered_json run_replay_mode(const ExperimentConfig& cfg, RunReport& report) {
    const ReplayData data = load_replay_csv(cfg.replay.data_path, cfg.replay.standardize);
    const ReplayResult res = run_replay(cfg, data);
    write_traces(cfg, res.traces, true, report);
    const auto summary_csv = cfg.output_dir / "summary.csv";
    write_checkpoints_csv(summary_csv, res.checkpoints);
    report.files.push_back(summary_csv);

    ordered_json j = common_header(cfg);
    j["policy"] = policy_name(cfg.policy);
    j["rows"] = data.rows();
    j["horizon"] = cfg.horizon;
    j["tau1"] = cfg.pricing.tau1;
    j["alpha"] = cfg.pricing.alpha;
    j["standardized"] = data.standardized;
    j["p_min"] = res.p_min;
    j["p_max"] = res.p_max;
    j["u_lo"] = cfg.pricing.u_lo;
    j["u_hi"] = cfg.pricing.u_hi;
    j["mean_revenue"] = res.mean_revenue;
    j["episode_ends"] = checkpoints_json(res.episode_ends);
    return j;
}

ordered_json run_rate_s(const ExperimentConfig& cfg, RunReport& report) {
    const auto n_values = cfg.n_values.empty() ? default_n_values(cfg.mode) : cfg.n_values;
    const MarketSpec market(cfg.market.theta0(), cfg.market.feature_bounds(), NoiseModel::holder(cfg.pricing.alpha),
                            cfg.market.p_min(), cfg.market.p_max());
    const SurvivalRateTable table = rate_test_s(market, n_values, cfg.replications, cfg.seed, cfg.threads);

    std::ostringstream csv;
    csv << "n,rho,delta,median_sup_error\n";
    for (const auto& r : table.rows)
        csv << r.n << ',' << format_double(r.rho) << ',' << format_double(r.delta) << ','
            << format_double(r.median_error) << '\n';
    const auto path = cfg.output_dir / "rate_test_s.csv";
    write_text_file(path, csv.str());
    report.files.push_back(path);

    ordered_json j = common_header(cfg);
    j["alpha"] = table.alpha;
    j["target_exponent"] = table.target_exponent;
    j["slope"] = table.fit.slope;
    j["stderr"] = table.fit.std_error;
    return j;
}

ordered_json run_rate_theta(const ExperimentConfig& cfg, RunReport& report) {
    const auto n_values = cfg.n_values.empty() ? default_n_values(cfg.mode) : cfg.n_values;
    const ThetaRateTable table = rate_test_theta(cfg.market, n_values, cfg.replications, cfg.seed, cfg.threads);

    std::ostringstream csv;
    csv << "n,median_error,reference_rate\n";
    for (const auto& r : table.rows)
        csv << r.n << ',' << format_double(r.median_error) << ',' << format_double(r.reference_rate) << '\n';
    const auto path = cfg.output_dir / "rate_test_theta.csv";
    write_text_file(path, csv.str());
    report.files.push_back(path);

    ordered_json j = common_header(cfg);
    j["noise"] = cfg.market.noise().name();
    j["target_exponent"] = 0.5;
    j["slope"] = table.fit.slope;
    j["stderr"] = table.fit.std_error;
    j["ratio_last_first"] = table.rows.back().median_error / table.rows.front().median_error;
    return j;
}

ordered_json run_generate(const ExperimentConfig& cfg, RunReport& report) {
    std::ostringstream csv;
    write_synthetic_replay_csv(csv, cfg.generator.rows, cfg.seed);
    const auto path = cfg.output_dir / "replay_synthetic.csv";
    write_text_file(path, csv.str());
    report.files.push_back(path);

    ordered_json j;
    j["mode"] = mode_name(cfg.mode);
    j["seed"] = cfg.seed;
    j["rows"] = cfg.generator.rows;
    return j;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
    RunReport report;
    const auto start = std::chrono::steady_clock::now();
    ordered_json summary;
    switch (cfg.mode) {
        case Mode::simulate: summary = run_simulate(cfg, report); break;
        case Mode::replay: summary = run_replay_mode(cfg, report); break;
        case Mode::rate_test_s: summary = run_rate_s(cfg, report); break;
        case Mode::rate_test_theta: summary = run_rate_theta(cfg, report); break;
        case Mode::gen_replay_data: summary = run_generate(cfg, report); break;
    }
    if (cfg.record_runtime) {
        summary["runtime_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    summary["warnings"] = report.warnings;
    report.summary_json = summary.dump(2) + "\n";
    const auto path = cfg.output_dir / "summary.json";
    write_text_file(path, report.summary_json);
    report.files.push_back(path);
    return report;
}

}  // namespace dynprice
