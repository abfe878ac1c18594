#pragma once

#include "gspde/field.hpp"

#include <cstdint>
#include <string>

namespace gspde {

/// Deterministic initial-condition builders for the run configs.
struct InitialFieldSpec {
    std::string type = "zero"; ///< zero | taylor_green | single_mode | spectrum
    double amplitude = 1.0;
    // spectrum parameters
    double alpha = 3.5; ///< |f_k| ~ |k|^-alpha
    int kmax = 8;
    std::uint64_t seed = 0; ///< sub-seed for the spectrum draw (split from master)
    // single_mode parameters
    Wave wave{1, 0, 0};
};

/// Builds the field at the given cutoff. Every builder returns a
/// divergence-free, zero-mean, conjugate-symmetric field.
FourierField build_initial_field(const InitialFieldSpec& spec, int dim, int cutoff);

/// u = A(sin x cos y, -cos x sin y) in 2D, the standard analytic vortex;
/// in 3D the z-independent variant with a zero third component.
FourierField taylor_green(int dim, int cutoff, double amplitude);

/// One shear mode pair at `wave` with a deterministic direction orthogonal
/// to the wavevector.
FourierField single_shear_mode(int dim, int cutoff, const Wave& wave, double amplitude);

/// Random divergence-free field with |f_k| ~ amplitude * |k|^-alpha up to
/// |k|_inf <= kmax, rescaled so the L2 norm equals `amplitude`; deterministic
/// in `seed`.
FourierField random_spectrum_field(int dim, int cutoff, double alpha, int kmax, double amplitude,
                                   std::uint64_t seed);

} // namespace gspde
