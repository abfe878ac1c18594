#pragma once

#include "gspde/field.hpp"
#include "gspde/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gspde {

/// One element of the divergence-free shear basis, enumerated in |k|_inf
/// shell order: shells ascending, wavevectors lexicographic within a shell
/// (canonical half-space only), then transverse directions, then cos/sin.
struct ShearBasisElement {
    Wave wave{};
    std::array<double, 3> dir{};
    bool sine = false;
};

ShearBasisElement additive_basis_element(int dim, int index); // 1-based

/// Unit-L2 realization of a basis element at the given cutoff; zero field
/// when the element's wavevector lies outside the cutoff.
FourierField shear_basis_field(int dim, int cutoff, const ShearBasisElement& e);

/// Truncated cylindrical Brownian motion and the Lipschitz noise family.
/// Coefficients follow c_i = c0 * i^{-q} with q > 1/2 (square-summable).
struct NoiseModel {
    enum class Kind { additive, linear_multiplicative };

    Kind kind = Kind::linear_multiplicative;
    int n_modes = 16;        ///< truncation level J
    double c0 = 0.1;
    double decay_q = 1.0;
    int smoothing_order = 1; ///< multiplicative damping exponent s

    std::vector<double> coefficients; // c_1..c_J

    static NoiseModel make(Kind kind, int n_modes, double c0, double decay_q,
                           int smoothing_order);

    double sum_c_sq() const;
    /// Integral upper bound for the truncated tail sum_{i>J} c_i^2.
    double tail_bound() const;
};

struct WienerIncrement {
    double dt = 0.0;
    std::vector<double> values; // one N(0,dt) draw per noise mode
};

/// G_i applied to u. Additive: c_i * phi_i, independent of u. Multiplicative:
/// c_i * S_s u with mode damping (1+|k|^2)^{-s/2}. Output is Leray-projected.
FourierField apply_noise(const NoiseModel& model, const FourierField& u, int i);

/// J independent Gaussians with variance dt; bitwise-deterministic in rng.
WienerIncrement sample_increment(const NoiseModel& model, double dt, Rng& rng);

/// Empirical sup over random field pairs of
///   sum_i |G_i(u)-G_i(v)|_k^2 / |u-v|_k^2,
/// which must stay within sum_i c_i^2 (1+1e-10).
double lipschitz_check(const NoiseModel& model, SobolevIndex k, int trials, Rng& rng);

} // namespace gspde
