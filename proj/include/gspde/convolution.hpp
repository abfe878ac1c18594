#pragma once

#include "gspde/fft.hpp"
#include "gspde/field.hpp"

#include <memory>

namespace gspde {

/// Brute-force (L_u v)_k = sum_{p+q=k} i (u_p . q) v_q over all stored mode
/// pairs. Serial reference implementation, quadratic cost, no FFT and no
/// dealiasing shortcuts; the mean mode is forced to zero. `out_cutoff`
/// defaults to 2*cutoff (full product support).
FourierField convolve_direct(const FourierField& u, const FourierField& v, int out_cutoff = -1);

enum class ConvolutionPath {
    automatic, ///< direct at small cutoffs, padded FFT otherwise
    direct,    ///< gather-form convolution, OpenMP over output modes
    fft        ///< pseudo-spectral on a grid >= 3*cutoff+1 (alias-free)
};

/// Computes P L_u u truncated to the input cutoff: exact convolution of the
/// truncated series, truncation, Leray projection, exact symmetrization.
/// Holds the FFT plan and grid buffers; one instance per worker, not shared
/// across threads.
class NonlinearEvaluator {
public:
    NonlinearEvaluator(int dim, int cutoff, ConvolutionPath path = ConvolutionPath::automatic);
    ~NonlinearEvaluator();

    NonlinearEvaluator(NonlinearEvaluator&&) noexcept;
    NonlinearEvaluator& operator=(NonlinearEvaluator&&) noexcept;

    FourierField apply(const FourierField& u);

    ConvolutionPath resolved_path() const;
    std::size_t grid_size() const; ///< padded FFT extent (0 on the direct path)

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around NonlinearEvaluator.
FourierField nonlinear_term(const FourierField& u,
                            ConvolutionPath path = ConvolutionPath::automatic);

} // namespace gspde
