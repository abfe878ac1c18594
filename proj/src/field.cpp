#include "gspde/field.hpp"

#include <cmath>
#include <set>

namespace gspde {

namespace {

std::string wave_str(const Wave& k, int dim) {
    std::string s = "(";
    for (int a = 0; a < dim; ++a) {
        if (a) s += ",";
        s += std::to_string(k[a]);
    }
    return s + ")";
}

} // namespace

void FourierField::set(const Wave& k, const ModeVec& v) {
    if (wave_is_zero(k)) throw FieldError("set: k = 0 must stay zero (zero-mean space)");
    if (!in_range(k)) throw FieldError("set: wavevector " + wave_str(k, dim_) + " outside cutoff");
    set_unchecked(k, v);
    ModeVec conj{};
    for (int c = 0; c < dim_; ++c) conj[c] = std::conj(v[c]);
    set_unchecked(wave_negate(k), conj);
}

FourierField make_field(int dim, int cutoff,
                        const std::vector<std::pair<Wave, ModeVec>>& modes) {
    FourierField f(dim, cutoff);
    std::set<std::size_t> supplied;
    for (const auto& [k, v] : modes) {
        bool nonzero = false;
        for (int c = 0; c < dim; ++c)
            if (v[c] != Complex{0.0, 0.0}) nonzero = true;
        if (wave_is_zero(k)) {
            if (nonzero) throw FieldError("make_field: nonzero amplitude at k = 0");
            continue;
        }
        if (!f.in_range(k))
            throw FieldError("make_field: wavevector " + wave_str(k, dim) + " exceeds cutoff " +
                             std::to_string(cutoff));
        if (!supplied.insert(f.flat_index(k)).second)
            throw FieldError("make_field: duplicate wavevector " + wave_str(k, dim));
        f.set_unchecked(k, v);
    }
    // Mirror fill / reality check over the supplied set.
    for (const auto& [k, v] : modes) {
        if (wave_is_zero(k)) continue;
        const Wave nk = wave_negate(k);
        ModeVec conj{};
        for (int c = 0; c < dim; ++c) conj[c] = std::conj(v[c]);
        if (supplied.count(f.flat_index(nk))) {
            const ModeVec other = f.get(nk);
            for (int c = 0; c < dim; ++c)
                if (other[c] != conj[c])
                    throw FieldError("make_field: reality violated between " + wave_str(k, dim) +
                                     " and its mirror");
        } else {
            f.set_unchecked(nk, conj);
        }
    }
    return f;
}

FourierField leray_project(const FourierField& f) {
    FourierField out = f;
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = f.wave_at(p);
        if (wave_is_zero(k)) {
            for (int c = 0; c < dim; ++c) out.at(p, c) = Complex{0.0, 0.0};
            continue;
        }
        const double ksq = wave_norm_sq(k);
        Complex kdotf{0.0, 0.0};
        for (int c = 0; c < dim; ++c) kdotf += double(k[c]) * f.at(p, c);
        const Complex factor = kdotf / ksq;
        for (int c = 0; c < dim; ++c) out.at(p, c) = f.at(p, c) - double(k[c]) * factor;
    }
    return out;
}

double sobolev_norm_sq(const FourierField& f, SobolevIndex m) {
    if (m.m < 0) throw FieldError("sobolev_norm_sq: order must be >= 0");
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        double amp = 0.0;
        for (int c = 0; c < dim; ++c) amp += std::norm(f.at(p, c));
        if (amp == 0.0) continue;
        const double ksq = wave_norm_sq(f.wave_at(p));
        double w = 1.0;
        for (int i = 0; i < m.m; ++i) w *= ksq;
        total += w * amp;
    }
    return total;
}

double sobolev_inner(const FourierField& a, const FourierField& b, SobolevIndex m) {
    if (a.dim() != b.dim() || a.cutoff() != b.cutoff())
        throw FieldError("sobolev_inner: shape mismatch");
    const int dim = a.dim();
    const std::size_t n = a.point_count();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        double re = 0.0;
        for (int c = 0; c < dim; ++c) re += (std::conj(a.at(p, c)) * b.at(p, c)).real();
        if (re == 0.0) continue;
        const double ksq = wave_norm_sq(a.wave_at(p));
        double w = 1.0;
        for (int i = 0; i < m.m; ++i) w *= ksq;
        total += w * re;
    }
    return total;
}

FourierField stokes_term(const FourierField& f, double nu) {
    if (!(nu > 0.0)) throw FieldError("stokes_term: nu must be positive");
    FourierField out = f;
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        const double factor = -nu * wave_norm_sq(f.wave_at(p));
        for (int c = 0; c < dim; ++c) out.at(p, c) = factor * f.at(p, c);
    }
    return out;
}

FourierField galerkin_project(const FourierField& f, int n_cutoff) {
    if (n_cutoff < 1) throw FieldError("galerkin_project: n_cutoff must be >= 1");
    FourierField out = f;
    if (n_cutoff >= f.cutoff()) return out;
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        if (wave_inf_norm(f.wave_at(p)) > n_cutoff)
            for (int c = 0; c < dim; ++c) out.at(p, c) = Complex{0.0, 0.0};
    }
    return out;
}

FourierField restricted(const FourierField& f, int new_cutoff) {
    FourierField out(f.dim(), new_cutoff);
    const int dim = f.dim();
    const std::size_t n = out.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = out.wave_at(p);
        if (!f.in_range(k)) continue;
        const std::size_t q = f.flat_index(k);
        for (int c = 0; c < dim; ++c) out.at(p, c) = f.at(q, c);
    }
    return out;
}

std::vector<double> evaluate_physical(const FourierField& f, int grid_size) {
    const int dim = f.dim();
    if (grid_size < 2 * f.cutoff() + 1)
        throw FieldError("evaluate_physical: grid_size " + std::to_string(grid_size) +
                         " < 2*cutoff+1 = " + std::to_string(2 * f.cutoff() + 1));
    std::size_t grid_points = 1;
    for (int a = 0; a < dim; ++a) grid_points *= static_cast<std::size_t>(grid_size);
    std::vector<Complex> acc(grid_points * static_cast<std::size_t>(dim), Complex{0.0, 0.0});
    const double step = 2.0 * M_PI / grid_size;
    const std::size_t modes = f.point_count();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t gi = 0; gi < static_cast<std::ptrdiff_t>(grid_points); ++gi) {
        const std::size_t g = static_cast<std::size_t>(gi);
        // grid coordinates
        std::array<double, 3> x{0.0, 0.0, 0.0};
        std::size_t rem = g;
        for (int a = dim - 1; a >= 0; --a) {
            x[a] = step * static_cast<double>(rem % grid_size);
            rem /= grid_size;
        }
        for (std::size_t p = 0; p < modes; ++p) {
            const Wave k = f.wave_at(p);
            double phase = 0.0;
            for (int a = 0; a < dim; ++a) phase += k[a] * x[a];
            const Complex e{std::cos(phase), std::sin(phase)};
            for (int c = 0; c < dim; ++c) {
                const Complex v = f.at(p, c);
                if (v != Complex{0.0, 0.0}) acc[g * dim + c] += v * e;
            }
        }
    }

    double max_re = 0.0, max_im = 0.0;
    for (const Complex& v : acc) {
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
    }
    if (max_im > 1e-10 * std::max(1.0, max_re))
        throw FieldError("evaluate_physical: imaginary residue " + std::to_string(max_im) +
                         " exceeds tolerance (reality invariant broken)");
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].real();
    return out;
}

void validate_field(const FourierField& f, double reality_tol, double div_tol) {
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    double scale = 0.0;
    for (const Complex& v : f.raw()) scale = std::max(scale, std::abs(v));
    const double rtol = reality_tol * std::max(1.0, scale);
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = f.wave_at(p);
        if (wave_is_zero(k)) {
            for (int c = 0; c < dim; ++c)
                if (f.at(p, c) != Complex{0.0, 0.0})
                    throw FieldError("validate: nonzero mean mode");
            continue;
        }
        const ModeVec mirror = f.get(wave_negate(k));
        double amp_sq = 0.0;
        Complex kdotf{0.0, 0.0};
        for (int c = 0; c < dim; ++c) {
            if (std::abs(f.at(p, c) - std::conj(mirror[c])) > rtol)
                throw FieldError("validate: reality invariant broken at mode");
            amp_sq += std::norm(f.at(p, c));
            kdotf += double(k[c]) * f.at(p, c);
        }
        if (div_tol >= 0.0 && std::abs(kdotf) > div_tol * std::sqrt(amp_sq))
            throw FieldError("validate: divergence-free invariant broken");
    }
}

void symmetrize(FourierField& f) {
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = f.wave_at(p);
        if (wave_is_zero(k)) {
            for (int c = 0; c < dim; ++c) f.at(p, c) = Complex{0.0, 0.0};
            continue;
        }
        if (!wave_in_half_space(k)) continue;
        const std::size_t q = f.flat_index(wave_negate(k));
        for (int c = 0; c < dim; ++c) {
            const Complex avg = 0.5 * (f.at(p, c) + std::conj(f.at(q, c)));
            f.at(p, c) = avg;
            f.at(q, c) = std::conj(avg);
        }
    }
}

void field_axpy(FourierField& y, double a, const FourierField& x) {
    if (y.dim() != x.dim() || y.cutoff() != x.cutoff()) throw FieldError("axpy: shape mismatch");
    auto yr = y.raw();
    auto xr = x.raw();
    for (std::size_t i = 0; i < yr.size(); ++i) yr[i] += a * xr[i];
}

void field_scale(FourierField& y, double a) {
    for (Complex& v : y.raw()) v *= a;
}

void field_add(FourierField& y, const FourierField& x) { field_axpy(y, 1.0, x); }

bool field_is_finite(const FourierField& f) {
    for (const Complex& v : f.raw())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double max_divergence_ratio(const FourierField& f) {
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = f.wave_at(p);
        if (wave_is_zero(k)) continue;
        double amp_sq = 0.0;
        Complex kdotf{0.0, 0.0};
        for (int c = 0; c < dim; ++c) {
            amp_sq += std::norm(f.at(p, c));
            kdotf += double(k[c]) * f.at(p, c);
        }
        if (amp_sq > 0.0) worst = std::max(worst, std::abs(kdotf) / std::sqrt(amp_sq));
    }
    return worst;
}

double difference_norm_sq(const FourierField& a, const FourierField& b, SobolevIndex m) {
    if (a.dim() != b.dim()) throw FieldError("difference_norm_sq: dimension mismatch");
    const FourierField& hi = a.cutoff() >= b.cutoff() ? a : b;
    const FourierField& lo = a.cutoff() >= b.cutoff() ? b : a;
    const int dim = hi.dim();
    const std::size_t n = hi.point_count();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = hi.wave_at(p);
        const bool have_lo = lo.in_range(k);
        const std::size_t q = have_lo ? lo.flat_index(k) : 0;
        double amp = 0.0;
        for (int c = 0; c < dim; ++c) {
            const Complex d = hi.at(p, c) - (have_lo ? lo.at(q, c) : Complex{0.0, 0.0});
            amp += std::norm(d);
        }
        if (amp == 0.0) continue;
        const double ksq = wave_norm_sq(k);
        double w = 1.0;
        for (int i = 0; i < m.m; ++i) w *= ksq;
        total += w * amp;
    }
    return total;
}

} // namespace gspde
