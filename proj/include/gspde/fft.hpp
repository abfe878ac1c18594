#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gspde {

/// Iterative radix-2 complex FFT for power-of-two sizes, with precomputed
/// twiddles and bit-reversal table. Unscaled in both directions; callers
/// divide by N^dim after the forward pass.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* data) const { transform(data, twiddle_fwd_); }
    void inverse(std::complex<double>* data) const { transform(data, twiddle_inv_); }

    static std::size_t next_pow2(std::size_t n);

private:
    void transform(std::complex<double>* data, const std::vector<std::complex<double>>& tw) const;

    std::size_t n_ = 0;
    int log2n_ = 0;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_fwd_; // e^{-2 pi i j / n}, j < n/2
    std::vector<std::complex<double>> twiddle_inv_;
};

/// In-place FFT along one axis of a dense row-major array with the given
/// extents (extents.size() = rank). Lines are independent; parallelized.
void fft_axis(std::complex<double>* data, const std::vector<std::size_t>& extents, int axis,
              const Fft& fft, bool forward);

} // namespace gspde
