#pragma once

#include "gspde/config.hpp"

#include <string>

namespace gspde {

// Exit codes: 0 PASS, 1 FAIL, 2 config error, 3 runtime failure.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Runs one experiment, writing report.json, tables.csv, the canonical
/// config and manifest.json under output_dir/<name>/<config-hash>/.
/// Expected failures map to exit codes, never stack traces.
int dispatch(const std::string& experiment_name, const RunConfig& cfg);

/// Re-runs from a manifest with the recorded seeds; exit 0 iff the
/// recomputed report.json is byte-identical, 1 on drift (first differing
/// field printed), 2 when the stored config no longer matches its hash.
int replay(const std::string& manifest_path);

/// Full command-line entry point (flags documented in the README).
int run_cli(int argc, char** argv);

} // namespace gspde
