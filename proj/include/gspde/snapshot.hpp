#pragma once

#include "gspde/field.hpp"

#include <string>

namespace gspde {

/// Binary field snapshot, little-endian:
///   magic "GSPF", version u32, dim u32, cutoff u32, mode_count u64,
///   then per mode: dim x i32 wavevector, dim x (f64 re, f64 im).
/// Only nonzero modes are written, in flat-index order; both members of a
/// conjugate pair appear explicitly and are re-validated on read.
void write_snapshot(const FourierField& f, const std::string& path);

FourierField read_snapshot(const std::string& path);

} // namespace gspde
