#pragma once

#include "gspde/experiments.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace gspde {

/// report.json text: sorted keys, deterministic double formatting; contains
/// no timestamps so replays can compare byte-for-byte.
std::string report_json_text(const ExperimentReport& rep);

/// One row per cell, 17 significant digits (round-trip decimals).
std::string tables_csv_text(const ExperimentReport& rep);

/// Aligned-column human summary.
void print_summary(std::ostream& os, const ExperimentReport& rep);

/// t, m0..m_max rows for a trajectory.
std::string norms_csv_text(const TrajectoryRecord& rec);

/// Write-to-temp-then-rename; the only file-write primitive used for outputs.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Path of the first differing JSON field between two report texts, for
/// replay drift messages; std::nullopt when equal as parsed JSON.
std::optional<std::string> first_json_difference(const std::string& a, const std::string& b);

} // namespace gspde
