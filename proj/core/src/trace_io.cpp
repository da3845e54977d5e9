#include "dynprice/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace dynprice {

std::string format_double(double value) {
    if (value == 0.0) return "0";  // also folds -0
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buffer, ptr);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const RegretTrace& trace, bool with_revenue_total) {
    auto out = open_output(path);
    out << "t,episode,phase,price,sold,revenue,oracle_price,inst_regret,cum_regret";
    if (with_revenue_total) out << ",cum_revenue";
    out << '\n';
    for (const auto& r : trace.rounds) {
        out << r.t << ',' << r.episode << ',' << phase_name(r.phase) << ',' << format_double(r.price) << ','
            << (r.sold ? 1 : 0) << ',' << format_double(r.revenue) << ',' << format_double(r.oracle_price) << ','
            << format_double(r.inst_regret) << ',' << format_double(r.cum_regret);
        if (with_revenue_total) out << ',' << format_double(r.cum_revenue);
        out << '\n';
    }
}

void write_checkpoints_csv(const std::filesystem::path& path, const std::vector<CheckpointStat>& rows) {
    auto out = open_output(path);
    out << "t,mean,ci_lo,ci_hi\n";
    for (const auto& r : rows) {
        out << r.t << ',' << format_double(r.mean) << ',' << format_double(r.ci_lo) << ',' << format_double(r.ci_hi)
            << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    auto out = open_output(path);
    out << content;
}

}  // namespace dynprice
