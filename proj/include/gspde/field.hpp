#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gspde {

using Complex = std::complex<double>;

/// Integer wavevector; components beyond the field dimension are zero.
using Wave = std::array<int, 3>;

/// Complex amplitude vector of one mode; components beyond dim are zero.
using ModeVec = std::array<Complex, 3>;

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Order m of the Sobolev space W^{m,2} on divergence-free, zero-mean fields.
struct SobolevIndex {
    int m = 0;
};

inline double wave_norm_sq(const Wave& k) {
    return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
}

inline int wave_inf_norm(const Wave& k) {
    int m = 0;
    for (int c : k) m = std::max(m, std::abs(c));
    return m;
}

inline bool wave_is_zero(const Wave& k) { return k[0] == 0 && k[1] == 0 && k[2] == 0; }

inline Wave wave_negate(const Wave& k) { return Wave{-k[0], -k[1], -k[2]}; }

/// Lexicographic half-space selector: k precedes -k iff its first nonzero
/// component is positive. Used for conjugate-pair enumeration.
inline bool wave_in_half_space(const Wave& k) {
    for (int c : k) {
        if (c > 0) return true;
        if (c < 0) return false;
    }
    return false; // k == 0
}

/// Divergence-free vector field on the N-torus (N = 2 or 3) stored as dense
/// Fourier coefficients over the cube |k|_inf <= cutoff. Zero-mean (the k=0
/// coefficient is identically zero) and conjugate-symmetric for real fields.
class FourierField {
public:
    FourierField() = default;

    FourierField(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
        if (dim != 2 && dim != 3) throw FieldError("FourierField: dim must be 2 or 3");
        if (cutoff < 1) throw FieldError("FourierField: cutoff must be >= 1");
        extent_ = 2 * cutoff + 1;
        points_ = 1;
        for (int a = 0; a < dim_; ++a) points_ *= static_cast<std::size_t>(extent_);
        coeffs_.assign(points_ * static_cast<std::size_t>(dim_), Complex{0.0, 0.0});
    }

    int dim() const { return dim_; }
    int cutoff() const { return cutoff_; }
    std::size_t point_count() const { return points_; }

    bool in_range(const Wave& k) const {
        for (int a = 0; a < dim_; ++a)
            if (std::abs(k[a]) > cutoff_) return false;
        for (int a = dim_; a < 3; ++a)
            if (k[a] != 0) return false;
        return true;
    }

    std::size_t flat_index(const Wave& k) const {
        std::size_t idx = 0;
        for (int a = 0; a < dim_; ++a)
            idx = idx * static_cast<std::size_t>(extent_) + static_cast<std::size_t>(k[a] + cutoff_);
        return idx;
    }

    Wave wave_at(std::size_t flat) const {
        Wave k{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            k[a] = static_cast<int>(flat % static_cast<std::size_t>(extent_)) - cutoff_;
            flat /= static_cast<std::size_t>(extent_);
        }
        return k;
    }

    ModeVec get(const Wave& k) const {
        if (!in_range(k)) return ModeVec{};
        const std::size_t base = flat_index(k) * static_cast<std::size_t>(dim_);
        ModeVec v{};
        for (int c = 0; c < dim_; ++c) v[c] = coeffs_[base + c];
        return v;
    }

    /// Sets f_k and the conjugate mirror f_{-k}; rejects k = 0 and out-of-range k.
    void set(const Wave& k, const ModeVec& v);

    /// Raw single-sided write; breaks invariants on purpose (tests, kernels).
    void set_unchecked(const Wave& k, const ModeVec& v) {
        const std::size_t base = flat_index(k) * static_cast<std::size_t>(dim_);
        for (int c = 0; c < dim_; ++c) coeffs_[base + c] = v[c];
    }

    Complex& at(std::size_t flat, int comp) { return coeffs_[flat * dim_ + comp]; }
    const Complex& at(std::size_t flat, int comp) const { return coeffs_[flat * dim_ + comp]; }

    std::span<Complex> raw() { return coeffs_; }
    std::span<const Complex> raw() const { return coeffs_; }

    bool operator==(const FourierField& other) const = default;

private:
    int dim_ = 0;
    int cutoff_ = 0;
    int extent_ = 0;
    std::size_t points_ = 0;
    std::vector<Complex> coeffs_;
};

/// Constructs a field from explicit modes. Missing conjugate mirrors are
/// filled; supplying both k and -k with conj(f_k) != f_{-k} is an error,
/// as are k = 0 entries, duplicates and |k|_inf > cutoff.
FourierField make_field(int dim, int cutoff,
                        const std::vector<std::pair<Wave, ModeVec>>& modes);

/// Mode-wise orthogonal projection f_k -> f_k - k (k.f_k)/|k|^2; idempotent,
/// kills pure gradients, zeroes the mean mode.
FourierField leray_project(const FourierField& f);

/// Sum_k |k|^{2m} |f_k|^2 over all stored modes, Euclidean |k|, fixed
/// summation order (flat index ascending) for bitwise reproducibility.
double sobolev_norm_sq(const FourierField& f, SobolevIndex m);

/// Re sum_k |k|^{2m} conj(a_k).b_k (same fixed order).
double sobolev_inner(const FourierField& a, const FourierField& b, SobolevIndex m);

/// Mode-wise nu * (Laplacian): -nu |k|^2 f_k. Requires nu > 0.
FourierField stokes_term(const FourierField& f, double nu);

/// Sharp Fourier cutoff: zeroes every mode with |k|_inf > n_cutoff. The
/// removed tail obeys |tail|^2_{m-1} <= (n_cutoff+1)^{-2} |f|^2_m.
FourierField galerkin_project(const FourierField& f, int n_cutoff);

/// Copies into a container with a different cutoff (modes outside the new
/// cube are dropped). Container plumbing, not a projection result per se.
FourierField restricted(const FourierField& f, int new_cutoff);

/// Real samples of sum_k f_k e^{ik.x} on the uniform grid, layout
/// [point row-major][component]. Requires grid_size >= 2*cutoff+1; throws if
/// the imaginary residue exceeds 1e-10 (broken reality invariant).
std::vector<double> evaluate_physical(const FourierField& f, int grid_size);

/// Validates reality, zero-mean and cutoff support; `div_tol` additionally
/// checks |k.f_k| <= div_tol*|f_k| when non-negative.
void validate_field(const FourierField& f, double reality_tol = 1e-12, double div_tol = -1.0);

/// Enforces exact conjugate symmetry by averaging mirror pairs; zeroes k=0.
void symmetrize(FourierField& f);

// In-place arithmetic used by the integrator kernels. Shapes must match.
void field_axpy(FourierField& y, double a, const FourierField& x); // y += a*x
void field_scale(FourierField& y, double a);
void field_add(FourierField& y, const FourierField& x);

bool field_is_finite(const FourierField& f);
double max_divergence_ratio(const FourierField& f);

/// Sum over modes of |a_k - b_k|^2 |k|^{2m}; the fields may have different
/// cutoffs (missing modes count as zero).
double difference_norm_sq(const FourierField& a, const FourierField& b, SobolevIndex m);

} // namespace gspde
