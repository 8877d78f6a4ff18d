/// @file csv.hpp
/// @brief CSV output: comma separated, header row, LF line endings, 17
///        significant digits so doubles round-trip exactly.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relaxlbm/benchmarks.hpp"
#include "relaxlbm/trs.hpp"

namespace relaxlbm {

std::string format_double(double v);

void write_samples_csv(std::ostream& os, std::span<const ErrorSample> samples);
void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records);
void write_rs_limit_csv(std::ostream& os, std::span<const RsLimitRow> rows);

/// Parses the output of write_sweep_csv. Throws std::invalid_argument on a
/// malformed header or row.
std::vector<SweepRecord> read_sweep_csv(std::istream& is);

std::vector<std::string> split(const std::string& line, char sep);

}  // namespace relaxlbm
