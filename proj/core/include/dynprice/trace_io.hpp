#pragma once

#include "dynprice/simulate.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dynprice {

// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

void write_trace_csv(const std::filesystem::path& path, const RegretTrace& trace, bool with_revenue_total);
void write_checkpoints_csv(const std::filesystem::path& path, const std::vector<CheckpointStat>& rows);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dynprice
