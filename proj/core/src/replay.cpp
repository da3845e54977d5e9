#include "dynprice/replay.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dynprice {

namespace {

const char* const kNumericColumns[] = {"mkt_rate_d", "sqft", "med_home"};
const char* const kUnitLevels[] = {"2 bed", "other", "studio"};  // "1 bed" is the reference

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(trim(current));
    return fields;
}

double parse_field(const std::string& text, const std::string& column, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
        throw std::invalid_argument("replay data: non-numeric value '" + text + "' in column " + column +
                                    " at line " + std::to_string(line));
    return value;
}

double normal_draw(Rng& rng) {
    const double u1 = 1.0 - rng.uniform01();  // (0, 1]
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

ReplayData parse_replay_csv(std::istream& in, bool standardize) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("replay data: empty file");
    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
    auto column = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("replay data: missing column " + name);
        return it->second;
    };
    std::size_t numeric_idx[3];
    for (int i = 0; i < 3; ++i) numeric_idx[i] = column(kNumericColumns[i]);
    const std::size_t unit_idx = column("unit_type");
    const std::size_t value_idx = column("act_rate_d");

    ReplayData data;
    data.feature_names = {"intercept", "mkt_rate_d", "sqft", "med_home"};
    for (const char* level : kUnitLevels) data.feature_names.push_back(std::string("unit_type_") + level);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::invalid_argument("replay data: wrong field count at line " + std::to_string(line_no));
        std::vector<double> x{1.0};
        for (int i = 0; i < 3; ++i) x.push_back(parse_field(fields[numeric_idx[i]], kNumericColumns[i], line_no));
        const std::string& unit = fields[unit_idx];
        if (unit != "1 bed" && std::none_of(std::begin(kUnitLevels), std::end(kUnitLevels),
                                            [&](const char* l) { return unit == l; }))
            throw std::invalid_argument("replay data: unknown unit_type '" + unit + "' at line " +
                                        std::to_string(line_no));
        for (const char* level : kUnitLevels) x.push_back(unit == level ? 1.0 : 0.0);
        data.contexts.push_back(std::move(x));
        data.valuations.push_back(parse_field(fields[value_idx], "act_rate_d", line_no));
    }
    if (data.valuations.empty()) throw std::invalid_argument("replay data: no records");

    if (standardize) {
        const double n = static_cast<double>(data.rows());
        for (std::size_t c = 1; c <= 3; ++c) {
            double mean = 0.0, ss = 0.0;
            for (const auto& x : data.contexts) mean += x[c];
            mean /= n;
            for (const auto& x : data.contexts) ss += (x[c] - mean) * (x[c] - mean);
            const double sd = std::sqrt(ss / n);
            for (auto& x : data.contexts) x[c] = sd > 0.0 ? (x[c] - mean) / sd : x[c] - mean;
        }
        data.standardized = true;
    }
    return data;
}

ReplayData load_replay_csv(const std::filesystem::path& path, bool standardize) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("replay data: cannot open " + path.string());
    return parse_replay_csv(in, standardize);
}

void write_synthetic_replay_csv(std::ostream& out, std::size_t rows, std::uint64_t seed) {
    Rng rng(seed, 0x7E9A7ULL);
    out << "mkt_rate_d,sqft,med_home,unit_type,act_rate_d\n";
    char buffer[160];
    for (std::size_t i = 0; i < rows; ++i) {
        const double mkt = std::round(std::clamp(std::exp(7.9 + 0.4 * normal_draw(rng)), 800.0, 8000.0) * 100.0) / 100.0;
        const double sqft = std::round(std::clamp(465.0 + 150.0 * normal_draw(rng), 150.0, 1800.0));
        const double home =
            std::round(std::clamp(std::exp(std::log(480000.0) + 0.4 * normal_draw(rng)), 130000.0, 1650000.0) * 100.0) / 100.0;
        const double u = rng.uniform01();
        const char* unit = u < 0.5 ? "1 bed" : u < 0.7 ? "2 bed" : u < 0.9 ? "studio" : "other";
        const double unit_effect = u < 0.5 ? 0.0 : u < 0.7 ? 12.0 : u < 0.9 ? -8.0 : 5.0;
        // Two-piece uniform noise on (-17, 12) with mean zero.
        const double z = rng.uniform01() < 12.0 / 29.0 ? rng.uniform(-17.0, 0.0) : rng.uniform(0.0, 12.0);
        const double value = 200.0 + 0.03 * (mkt - 3000.0) - 0.04 * (sqft - 465.0) + 5e-5 * (home - 560000.0) +
                             unit_effect + z;
        std::snprintf(buffer, sizeof buffer, "%.2f,%.0f,%.2f,%s,%.2f\n", mkt, sqft, home, unit, value);
        out << buffer;
    }
}

ReplayResult run_replay(const ExperimentConfig& cfg, const ReplayData& data) {
    if (cfg.policy == PolicyKind::clairvoyant)
        throw std::invalid_argument("clairvoyant pricing needs the true market (simulate mode only)");
    if (data.rows() < cfg.horizon)
        throw std::invalid_argument("replay data: fewer rows (" + std::to_string(data.rows()) + ") than horizon (" +
                                    std::to_string(cfg.horizon) + ")");

    ReplayResult result;
    const auto [lo_it, hi_it] = std::minmax_element(data.valuations.begin(), data.valuations.end());
    result.p_min = *lo_it;
    result.p_max = *hi_it;
    const bool degenerate = !(result.p_min < result.p_max);

    ExperimentConfig local = cfg;
    local.pricing.p_min = result.p_min;
    local.pricing.p_max = degenerate ? result.p_min + 1.0 : result.p_max;
    local.pricing.dim = data.dim();
    const EpochSchedule schedule = build_schedule(local.pricing, cfg.horizon);

    result.traces.resize(cfg.replications);
    detail::parallel_for(cfg.replications, cfg.threads, [&](std::size_t rep) {
        Rng shuffle_rng(cfg.seed, 2 * static_cast<std::uint64_t>(rep));
        std::vector<std::size_t> order(data.rows());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.index(i)]);

        // A single admissible price leaves nothing to learn.
        std::unique_ptr<PricingPolicy> policy = degenerate ? nullptr : make_policy(local, nullptr, rep);

        RegretTrace& trace = result.traces[rep];
        trace.rounds.reserve(cfg.horizon);
        double cum_regret = 0.0, cum_revenue = 0.0;
        std::size_t episode = 0;
        for (std::size_t t = 0; t < cfg.horizon; ++t) {
            while (!schedule.episodes[episode].rounds.contains(t)) ++episode;
            const auto& x = data.contexts[order[t]];
            const double v = data.valuations[order[t]];
            Quote quote{result.p_min, Phase::exploit};
            if (policy) quote = policy->next_price(x);
            const bool sold = v >= quote.price;
            if (policy) policy->observe(x, quote.price, sold);

            RoundRecord rec;
            rec.t = t + 1;
            rec.episode = schedule.episodes[episode].index;
            rec.phase = cfg.policy == PolicyKind::antitonic && policy ? quote.phase : schedule.phase_of(t);
            rec.context_digest = context_digest(x);
            rec.price = quote.price;
            rec.sold = sold;
            rec.revenue = sold ? quote.price : 0.0;
            rec.oracle_price = v;
            rec.inst_regret = v - rec.revenue;
            cum_regret += rec.inst_regret;
            cum_revenue += rec.revenue;
            rec.cum_regret = cum_regret;
            rec.cum_revenue = cum_revenue;
            trace.rounds.push_back(rec);
        }
    });

    result.checkpoints =
        summarize(result.traces, checkpoint_rounds(schedule, cfg.checkpoint_every), &RoundRecord::cum_revenue);
    result.episode_ends = summarize(result.traces, checkpoint_rounds(schedule, 0), &RoundRecord::cum_revenue);
    result.mean_revenue = result.episode_ends.back().mean;
    return result;
}

}  // namespace dynprice
