#include "gspde/convolution.hpp"

#include <cmath>

namespace gspde {

FourierField convolve_direct(const FourierField& u, const FourierField& v, int out_cutoff) {
    if (u.dim() != v.dim()) throw FieldError("convolve_direct: dimension mismatch");
    if (u.cutoff() != v.cutoff()) throw FieldError("convolve_direct: cutoff mismatch");
    const int dim = u.dim();
    if (out_cutoff < 0) out_cutoff = 2 * u.cutoff();
    FourierField out(dim, out_cutoff);

    const std::size_t nu = u.point_count();
    const std::size_t nv = v.point_count();
    for (std::size_t pi = 0; pi < nu; ++pi) {
        ModeVec up{};
        bool up_zero = true;
        for (int c = 0; c < dim; ++c) {
            up[c] = u.at(pi, c);
            if (up[c] != Complex{0.0, 0.0}) up_zero = false;
        }
        if (up_zero) continue;
        const Wave p = u.wave_at(pi);
        for (std::size_t qi = 0; qi < nv; ++qi) {
            const Wave q = v.wave_at(qi);
            Wave k{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
            if (wave_inf_norm(k) > out_cutoff || wave_is_zero(k)) continue;
            Complex udotq{0.0, 0.0};
            for (int c = 0; c < dim; ++c) udotq += up[c] * double(q[c]);
            if (udotq == Complex{0.0, 0.0}) continue;
            const Complex factor = Complex{0.0, 1.0} * udotq;
            const std::size_t ki = out.flat_index(k);
            for (int c = 0; c < dim; ++c) out.at(ki, c) += factor * v.at(qi, c);
        }
    }
    return out;
}

namespace {

ConvolutionPath resolve(int dim, int cutoff, ConvolutionPath requested) {
    if (requested != ConvolutionPath::automatic) return requested;
    const int direct_max = dim == 2 ? 6 : 3;
    return cutoff <= direct_max ? ConvolutionPath::direct : ConvolutionPath::fft;
}

} // namespace

struct NonlinearEvaluator::Impl {
    int dim;
    int cutoff;
    ConvolutionPath path;
    std::size_t grid = 0;
    std::unique_ptr<Fft> fft;
    std::vector<std::size_t> extents;
    std::vector<std::vector<Complex>> buffers; // velocity components then vorticity

    Impl(int dim_, int cutoff_, ConvolutionPath requested)
        : dim(dim_), cutoff(cutoff_), path(resolve(dim_, cutoff_, requested)) {
        if (path == ConvolutionPath::fft) {
            grid = Fft::next_pow2(static_cast<std::size_t>(3 * cutoff + 1));
            fft = std::make_unique<Fft>(grid);
            extents.assign(static_cast<std::size_t>(dim), grid);
            std::size_t total = 1;
            for (std::size_t e : extents) total *= e;
            const int nbuf = dim == 2 ? 3 : 6; // (u1,u2,w) or (u1..u3,w1..w3)
            buffers.assign(nbuf, std::vector<Complex>(total));
        }
    }

    std::size_t grid_index(const Wave& k) const {
        std::size_t idx = 0;
        const auto g = static_cast<std::ptrdiff_t>(grid);
        for (int a = 0; a < dim; ++a) {
            std::ptrdiff_t m = (static_cast<std::ptrdiff_t>(k[a]) % g + g) % g;
            idx = idx * grid + static_cast<std::size_t>(m);
        }
        return idx;
    }

    void scatter_component(const FourierField& f, int comp, std::vector<Complex>& dst) const {
        std::fill(dst.begin(), dst.end(), Complex{0.0, 0.0});
        const std::size_t n = f.point_count();
        for (std::size_t p = 0; p < n; ++p) {
            const Complex v = f.at(p, comp);
            if (v != Complex{0.0, 0.0}) dst[grid_index(f.wave_at(p))] = v;
        }
    }

    /// Places i(k x u)_axis — the curl components — straight in spectral space.
    void scatter_curl(const FourierField& u, int axis, std::vector<Complex>& dst) const {
        std::fill(dst.begin(), dst.end(), Complex{0.0, 0.0});
        const std::size_t n = u.point_count();
        const Complex I{0.0, 1.0};
        for (std::size_t p = 0; p < n; ++p) {
            const Wave k = u.wave_at(p);
            Complex w;
            if (dim == 2) {
                // scalar vorticity: i(k1 u2 - k2 u1)
                w = I * (double(k[0]) * u.at(p, 1) - double(k[1]) * u.at(p, 0));
            } else {
                const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
                w = I * (double(k[a1]) * u.at(p, a2) - double(k[a2]) * u.at(p, a1));
            }
            if (w != Complex{0.0, 0.0}) dst[grid_index(k)] = w;
        }
    }

    void all_axes(std::vector<Complex>& buf, bool forward) {
        for (int a = 0; a < dim; ++a) fft_axis(buf.data(), extents, a, *fft, forward);
    }

    FourierField apply_fft(const FourierField& u) {
        // Rotational form: P[(u.grad)u] = P[(curl u) x u]; the gradient part
        // of the pointwise identity is annihilated by the projection, and the
        // padded grid (>= 3*cutoff+1) keeps every retained mode alias-free.
        for (int c = 0; c < dim; ++c) scatter_component(u, c, buffers[c]);
        const int nw = dim == 2 ? 1 : 3;
        for (int a = 0; a < nw; ++a) scatter_curl(u, a, buffers[dim + a]);
        for (auto& b : buffers) all_axes(b, false);

        std::size_t total = buffers[0].size();
        if (dim == 2) {
            auto& u1 = buffers[0];
            auto& u2 = buffers[1];
            auto& w = buffers[2];
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
                const Complex c = w[i];
                const Complex n1 = -c * u2[i];
                const Complex n2 = c * u1[i];
                u1[i] = n1;
                u2[i] = n2;
            }
        } else {
            auto& u1 = buffers[0];
            auto& u2 = buffers[1];
            auto& u3 = buffers[2];
            auto& w1 = buffers[3];
            auto& w2 = buffers[4];
            auto& w3 = buffers[5];
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
                const Complex a1 = w1[i], a2 = w2[i], a3 = w3[i];
                const Complex b1 = u1[i], b2 = u2[i], b3 = u3[i];
                u1[i] = a2 * b3 - a3 * b2;
                u2[i] = a3 * b1 - a1 * b3;
                u3[i] = a1 * b2 - a2 * b1;
            }
        }
        for (int c = 0; c < dim; ++c) all_axes(buffers[c], true);

        FourierField out(dim, cutoff);
        double scale = 1.0;
        for (int a = 0; a < dim; ++a) scale /= static_cast<double>(grid);
        const std::size_t n = out.point_count();
        for (std::size_t p = 0; p < n; ++p) {
            const Wave k = out.wave_at(p);
            if (wave_is_zero(k)) continue;
            const std::size_t g = grid_index(k);
            for (int c = 0; c < dim; ++c) out.at(p, c) = buffers[c][g] * scale;
        }
        return out;
    }

    FourierField apply_direct(const FourierField& u) {
        FourierField out(dim, cutoff);
        const std::size_t n = out.point_count();
        const std::size_t nu = u.point_count();
        const Complex I{0.0, 1.0};
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ki = 0; ki < static_cast<std::ptrdiff_t>(n); ++ki) {
            const Wave k = out.wave_at(static_cast<std::size_t>(ki));
            if (wave_is_zero(k)) continue;
            ModeVec acc{};
            for (std::size_t pi = 0; pi < nu; ++pi) {
                const Wave p = u.wave_at(pi);
                const Wave q{k[0] - p[0], k[1] - p[1], k[2] - p[2]};
                if (!u.in_range(q)) continue;
                Complex udotq{0.0, 0.0};
                for (int c = 0; c < dim; ++c) udotq += u.at(pi, c) * double(q[c]);
                if (udotq == Complex{0.0, 0.0}) continue;
                const Complex factor = I * udotq;
                const std::size_t qi = u.flat_index(q);
                for (int c = 0; c < dim; ++c) acc[c] += factor * u.at(qi, c);
            }
            for (int c = 0; c < dim; ++c) out.at(static_cast<std::size_t>(ki), c) = acc[c];
        }
        return out;
    }
};

NonlinearEvaluator::NonlinearEvaluator(int dim, int cutoff, ConvolutionPath path)
    : impl_(std::make_unique<Impl>(dim, cutoff, path)) {}

NonlinearEvaluator::~NonlinearEvaluator() = default;
NonlinearEvaluator::NonlinearEvaluator(NonlinearEvaluator&&) noexcept = default;
NonlinearEvaluator& NonlinearEvaluator::operator=(NonlinearEvaluator&&) noexcept = default;

ConvolutionPath NonlinearEvaluator::resolved_path() const { return impl_->path; }
std::size_t NonlinearEvaluator::grid_size() const { return impl_->grid; }

FourierField NonlinearEvaluator::apply(const FourierField& u) {
    if (u.dim() != impl_->dim) throw FieldError("nonlinear_term: dimension mismatch");
    if (u.cutoff() != impl_->cutoff) throw FieldError("nonlinear_term: cutoff mismatch");
    FourierField raw = impl_->path == ConvolutionPath::fft ? impl_->apply_fft(u)
                                                           : impl_->apply_direct(u);
    FourierField out = leray_project(raw);
    symmetrize(out);
    return out;
}

FourierField nonlinear_term(const FourierField& u, ConvolutionPath path) {
    NonlinearEvaluator eval(u.dim(), u.cutoff(), path);
    return eval.apply(u);
}

} // namespace gspde
