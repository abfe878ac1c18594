#pragma once

#include "gspde/experiments.hpp"

#include <string>

namespace gspde {

/// A parsed run configuration plus the experiment selected inside the file
/// (the CLI --experiment flag can override it before dispatch).
struct RunConfig {
    ExperimentConfig experiment;
    std::string experiment_name; ///< may be empty when only set via the CLI
};

/// Parses the documented key-value format (TOML-compatible subset: sections,
/// scalars, flat arrays, # comments). Unknown keys and sections are errors;
/// every violated invariant reports its key path with expected and found
/// values. Defaults are filled (dt = 1e-3, noise.n_modes = 16, n_paths = 32).
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical serialization: every key in fixed order, floats with 17
/// significant digits. parse(canonical(c)) == c, and the config hash is the
/// digest of exactly this text.
std::string canonical_toml(const RunConfig& cfg);

/// FNV-1a 64-bit hex digest of the canonical text.
std::string config_hash_hex(const std::string& canonical_text);

} // namespace gspde
