#include "dynprice/experiment.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace dynprice {

using nlohmann::json;

Mode parse_mode(const std::string& name) {
    if (name == "simulate") return Mode::simulate;
    if (name == "rate_test_s" || name == "rate-test-s") return Mode::rate_test_s;
    if (name == "rate_test_theta" || name == "rate-test-theta") return Mode::rate_test_theta;
    if (name == "replay") return Mode::replay;
    if (name == "gen_replay_data" || name == "gen-replay-data") return Mode::gen_replay_data;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::simulate: return "simulate";
        case Mode::rate_test_s: return "rate_test_s";
        case Mode::rate_test_theta: return "rate_test_theta";
        case Mode::replay: return "replay";
        case Mode::gen_replay_data: return "gen_replay_data";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
    if (name == "antitonic") return PolicyKind::antitonic;
    if (name == "uniform_random") return PolicyKind::uniform_random;
    if (name == "clairvoyant") return PolicyKind::clairvoyant;
    throw std::invalid_argument("unknown policy '" + name + "'");
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::antitonic: return "antitonic";
        case PolicyKind::uniform_random: return "uniform_random";
        case PolicyKind::clairvoyant: return "clairvoyant";
    }
    return "unknown";
}

void ExperimentConfig::finalize() {
    if (replications < 1) throw std::invalid_argument("config: replications must be at least 1");
    if (mode == Mode::replay) {
        const Interval support = policy_support.value_or(Interval{-17.0, 12.0});
        pricing.u_lo = support.lo;
        pricing.u_hi = support.hi;
        if (policy == PolicyKind::clairvoyant)
            throw std::invalid_argument("config: clairvoyant pricing is unavailable in replay mode");
        if (replay.data_path.empty()) throw std::invalid_argument("config: replay mode needs a data path");
    } else {
        pricing.p_min = market.p_min();
        pricing.p_max = market.p_max();
        pricing.dim = market.dim();
        const Interval support = policy_support.value_or(Interval{market.noise().lo(), market.noise().hi()});
        pricing.u_lo = support.lo;
        pricing.u_hi = support.hi;
        pricing.validate();
    }
    if (mode == Mode::simulate || mode == Mode::replay) {
        if (horizon < pricing.tau1) throw std::invalid_argument("config: horizon must be at least tau1");
    }
    if (mode == Mode::gen_replay_data && generator.rows < 1)
        throw std::invalid_argument("config: generator needs at least one row");
}

namespace {

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw std::invalid_argument("config: '" + std::string(where) + "' must be an object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (auto key : allowed) ok = ok || item.key() == key;
        if (!ok) throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + std::string(where));
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

NoiseModel parse_noise(const json& j) {
    if (j.is_string()) return NoiseModel::from_name(j.get<std::string>());
    check_keys(j, "market.noise", {"kind", "alpha", "location", "scale", "lo", "hi"});
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "holder") return NoiseModel::holder(j.at("alpha").get<double>());
    if (kind == "fan_quadratic") return NoiseModel::fan_quadratic();
    const double loc = j.value("location", 0.0);
    const double lo = j.value("lo", -0.5);
    const double hi = j.value("hi", 0.5);
    if (kind == "trunc_gaussian") return NoiseModel::trunc_gaussian(loc, j.value("scale", 1.0), lo, hi);
    if (kind == "trunc_laplace") return NoiseModel::trunc_laplace(loc, j.value("scale", 0.2), lo, hi);
    if (kind == "trunc_cauchy") return NoiseModel::trunc_cauchy(loc, j.value("scale", 0.2), lo, hi);
    throw std::invalid_argument("config: unknown noise kind '" + kind + "'");
}

MarketSpec parse_market(const json& j, const MarketSpec& defaults) {
    check_keys(j, "market", {"theta0", "feature_bounds", "noise", "p_min", "p_max"});
    std::vector<double> theta0 = defaults.theta0();
    std::vector<Interval> bounds = defaults.feature_bounds();
    read(j, "theta0", theta0);
    if (j.contains("feature_bounds")) {
        bounds.clear();
        for (const auto& b : j.at("feature_bounds")) {
            const auto pair = b.get<std::vector<double>>();
            if (pair.size() != 2) throw std::invalid_argument("config: feature bound must be [lo, hi]");
            bounds.push_back({pair[0], pair[1]});
        }
    } else if (bounds.size() + 1 != theta0.size()) {
        const Interval fill = bounds.empty() ? Interval{-1.0, 1.0} : bounds.front();
        bounds.assign(theta0.size() - 1, fill);
    }
    double p_min = defaults.p_min(), p_max = defaults.p_max();
    read(j, "p_min", p_min);
    read(j, "p_max", p_max);
    NoiseModel noise = j.contains("noise") ? parse_noise(j.at("noise")) : defaults.noise();
    return MarketSpec(std::move(theta0), std::move(bounds), std::move(noise), p_min, p_max);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(root, "config",
               {"mode", "policy", "seed", "replications", "horizon", "checkpoint_every", "slope_window",
                "threads", "output_dir", "record_runtime", "write_traces", "market", "pricing", "replay",
                "rate_test", "generator"});

    ExperimentConfig cfg;
    try {
        if (root.contains("mode")) cfg.mode = parse_mode(root.at("mode").get<std::string>());
        if (root.contains("policy")) cfg.policy = parse_policy_kind(root.at("policy").get<std::string>());
        read(root, "seed", cfg.seed);
        read(root, "replications", cfg.replications);
        read(root, "horizon", cfg.horizon);
        read(root, "checkpoint_every", cfg.checkpoint_every);
        read(root, "threads", cfg.threads);
        read(root, "record_runtime", cfg.record_runtime);
        read(root, "write_traces", cfg.write_traces);
        if (root.contains("output_dir")) cfg.output_dir = root.at("output_dir").get<std::string>();
        if (root.contains("slope_window")) {
            const auto w = root.at("slope_window").get<std::vector<std::size_t>>();
            if (w.size() != 2) throw std::invalid_argument("config: slope_window must be [first, last]");
            cfg.slope_first_episode = w[0];
            cfg.slope_last_episode = w[1];
        }
        if (root.contains("market")) cfg.market = parse_market(root.at("market"), cfg.market);
        if (root.contains("pricing")) {
            const json& p = root.at("pricing");
            check_keys(p, "pricing", {"tau1", "alpha", "u_lo", "u_hi"});
            read(p, "tau1", cfg.pricing.tau1);
            read(p, "alpha", cfg.pricing.alpha);
            if (p.contains("u_lo") != p.contains("u_hi"))
                throw std::invalid_argument("config: pricing.u_lo and pricing.u_hi go together");
            if (p.contains("u_lo")) cfg.policy_support = Interval{p.at("u_lo").get<double>(), p.at("u_hi").get<double>()};
        }
        const bool alpha_given = root.contains("pricing") && root.at("pricing").contains("alpha");
        if (!alpha_given && cfg.market.noise().kind() == NoiseKind::holder)
            cfg.pricing.alpha = cfg.market.noise().holder_exponent();
        if (root.contains("replay")) {
            const json& r = root.at("replay");
            check_keys(r, "replay", {"data", "standardize"});
            if (r.contains("data")) cfg.replay.data_path = r.at("data").get<std::string>();
            read(r, "standardize", cfg.replay.standardize);
        }
        if (root.contains("rate_test")) {
            const json& r = root.at("rate_test");
            check_keys(r, "rate_test", {"n_values"});
            read(r, "n_values", cfg.n_values);
        }
        if (root.contains("generator")) {
            const json& g = root.at("generator");
            check_keys(g, "generator", {"rows"});
            read(g, "rows", cfg.generator.rows);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace dynprice
