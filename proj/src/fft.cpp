#include "gspde/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace gspde {

std::size_t Fft::next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: size must be a power of two");
    while ((std::size_t{1} << log2n_) < n) ++log2n_;
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < log2n_; ++b) r |= ((i >> b) & 1u) << (log2n_ - 1 - b);
        bitrev_[i] = r;
    }
    twiddle_fwd_.resize(n / 2);
    twiddle_inv_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double angle = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        twiddle_fwd_[j] = {std::cos(angle), std::sin(angle)};
        twiddle_inv_[j] = std::conj(twiddle_fwd_[j]);
    }
}

void Fft::transform(std::complex<double>* data,
                    const std::vector<std::complex<double>>& tw) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (j > i) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            std::size_t tj = 0;
            for (std::size_t j = 0; j < half; ++j, tj += stride) {
                const std::complex<double> w = tw[tj];
                std::complex<double>& a = data[start + j];
                std::complex<double>& b = data[start + j + half];
                const std::complex<double> t = w * b;
                b = a - t;
                a += t;
            }
        }
    }
}

void fft_axis(std::complex<double>* data, const std::vector<std::size_t>& extents, int axis,
              const Fft& fft, bool forward) {
    const int rank = static_cast<int>(extents.size());
    const std::size_t n = extents[axis];
    std::size_t inner = 1; // stride of the transformed axis
    for (int a = axis + 1; a < rank; ++a) inner *= extents[a];
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= extents[a];
    const std::size_t lines = outer * inner;

#pragma omp parallel
    {
        std::vector<std::complex<double>> scratch(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t li = 0; li < static_cast<std::ptrdiff_t>(lines); ++li) {
            const std::size_t l = static_cast<std::size_t>(li);
            const std::size_t o = l / inner;
            const std::size_t i = l % inner;
            std::complex<double>* base = data + o * n * inner + i;
            if (inner == 1) {
                if (forward)
                    fft.forward(base);
                else
                    fft.inverse(base);
            } else {
                for (std::size_t j = 0; j < n; ++j) scratch[j] = base[j * inner];
                if (forward)
                    fft.forward(scratch.data());
                else
                    fft.inverse(scratch.data());
                for (std::size_t j = 0; j < n; ++j) base[j * inner] = scratch[j];
            }
        }
    }
}

} // namespace gspde
