#include "gspde/noise.hpp"

#include "gspde/initial_fields.hpp"

#include <cmath>

namespace gspde {

namespace {

std::vector<std::array<double, 3>> transverse_directions(const Wave& k, int dim) {
    if (dim == 2) {
        const double n = std::sqrt(wave_norm_sq(k));
        return {{-k[1] / n, k[0] / n, 0.0}};
    }
    std::array<double, 3> ref = (k[0] == 0 && k[1] == 0) ? std::array<double, 3>{1, 0, 0}
                                                         : std::array<double, 3>{0, 0, 1};
    std::array<double, 3> t1{k[1] * ref[2] - k[2] * ref[1], k[2] * ref[0] - k[0] * ref[2],
                             k[0] * ref[1] - k[1] * ref[0]};
    double n1 = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (double& x : t1) x /= n1;
    std::array<double, 3> t2{k[1] * t1[2] - k[2] * t1[1], k[2] * t1[0] - k[0] * t1[2],
                             k[0] * t1[1] - k[1] * t1[0]};
    double n2 = std::sqrt(t2[0] * t2[0] + t2[1] * t2[1] + t2[2] * t2[2]);
    for (double& x : t2) x /= n2;
    return {t1, t2};
}

/// Wavevectors of one |k|_inf shell, canonical half-space, lexicographic.
std::vector<Wave> shell_waves(int dim, int shell) {
    std::vector<Wave> out;
    const int c = shell;
    auto visit = [&](const Wave& k) {
        if (wave_inf_norm(k) == shell && wave_in_half_space(k)) out.push_back(k);
    };
    if (dim == 2) {
        for (int a = -c; a <= c; ++a)
            for (int b = -c; b <= c; ++b) visit(Wave{a, b, 0});
    } else {
        for (int a = -c; a <= c; ++a)
            for (int b = -c; b <= c; ++b)
                for (int d = -c; d <= c; ++d) visit(Wave{a, b, d});
    }
    return out;
}

} // namespace

ShearBasisElement additive_basis_element(int dim, int index) {
    if (index < 1) throw FieldError("additive_basis_element: index is 1-based");
    int remaining = index - 1;
    for (int shell = 1;; ++shell) {
        const auto waves = shell_waves(dim, shell);
        const int per_wave = (dim - 1) * 2;
        const int in_shell = static_cast<int>(waves.size()) * per_wave;
        if (remaining >= in_shell) {
            remaining -= in_shell;
            continue;
        }
        const Wave k = waves[static_cast<std::size_t>(remaining / per_wave)];
        const int sub = remaining % per_wave;
        const auto dirs = transverse_directions(k, dim);
        ShearBasisElement e;
        e.wave = k;
        e.dir = dirs[static_cast<std::size_t>(sub / 2)];
        e.sine = (sub % 2) == 1;
        return e;
    }
}

FourierField shear_basis_field(int dim, int cutoff, const ShearBasisElement& e) {
    FourierField f(dim, cutoff);
    if (!f.in_range(e.wave)) return f;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ModeVec v{};
    for (int c = 0; c < dim; ++c) {
        v[c] = e.sine ? Complex{0.0, -e.dir[c] * inv_sqrt2}
                      : Complex{e.dir[c] * inv_sqrt2, 0.0};
    }
    f.set(e.wave, v);
    return f;
}

NoiseModel NoiseModel::make(Kind kind, int n_modes, double c0, double decay_q,
                            int smoothing_order) {
    if (n_modes < 0) throw FieldError("NoiseModel: n_modes must be >= 0");
    if (c0 < 0.0) throw FieldError("NoiseModel: c0 must be >= 0");
    if (!(decay_q > 0.5)) throw FieldError("NoiseModel: decay_q must exceed 1/2 (square-summable)");
    if (smoothing_order < 0) throw FieldError("NoiseModel: smoothing_order must be >= 0");
    NoiseModel m;
    m.kind = kind;
    m.n_modes = n_modes;
    m.c0 = c0;
    m.decay_q = decay_q;
    m.smoothing_order = smoothing_order;
    m.coefficients.resize(static_cast<std::size_t>(n_modes));
    for (int i = 1; i <= n_modes; ++i)
        m.coefficients[static_cast<std::size_t>(i - 1)] =
            c0 * std::pow(static_cast<double>(i), -decay_q);
    return m;
}

double NoiseModel::sum_c_sq() const {
    double s = 0.0;
    for (double c : coefficients) s += c * c;
    return s;
}

double NoiseModel::tail_bound() const {
    // sum_{i>J} c0^2 i^{-2q} <= c0^2 J^{1-2q} / (2q-1)
    if (n_modes == 0) return c0 * c0 * 2.0 * decay_q / (2.0 * decay_q - 1.0);
    return c0 * c0 * std::pow(static_cast<double>(n_modes), 1.0 - 2.0 * decay_q) /
           (2.0 * decay_q - 1.0);
}

FourierField apply_noise(const NoiseModel& model, const FourierField& u, int i) {
    if (i < 1 || i > model.n_modes)
        throw FieldError("apply_noise: mode index " + std::to_string(i) + " out of range [1," +
                         std::to_string(model.n_modes) + "]");
    const double ci = model.coefficients[static_cast<std::size_t>(i - 1)];
    if (model.kind == NoiseModel::Kind::additive) {
        FourierField f = shear_basis_field(u.dim(), u.cutoff(), additive_basis_element(u.dim(), i));
        field_scale(f, ci);
        return f; // divergence-free by construction
    }
    FourierField out = u;
    const double s = model.smoothing_order;
    const std::size_t n = out.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        const double damp = ci * std::pow(1.0 + wave_norm_sq(out.wave_at(p)), -s / 2.0);
        for (int c = 0; c < out.dim(); ++c) out.at(p, c) *= damp;
    }
    return leray_project(out);
}

WienerIncrement sample_increment(const NoiseModel& model, double dt, Rng& rng) {
    if (!(dt > 0.0)) throw FieldError("sample_increment: dt must be positive");
    WienerIncrement w;
    w.dt = dt;
    w.values.resize(static_cast<std::size_t>(model.n_modes));
    const double sd = std::sqrt(dt);
    for (double& v : w.values) v = sd * rng.gaussian();
    return w;
}

double lipschitz_check(const NoiseModel& model, SobolevIndex k, int trials, Rng& rng) {
    if (trials < 1) throw FieldError("lipschitz_check: trials must be >= 1");
    const int dim = 2;
    const int cutoff = 6;
    double sup = 0.0;
    for (int t = 0; t < trials; ++t) {
        const FourierField u =
            random_spectrum_field(dim, cutoff, 1.0, cutoff, 1.0, rng.next_u64());
        const FourierField v =
            random_spectrum_field(dim, cutoff, 1.0, cutoff, 1.0, rng.next_u64());
        FourierField d = u;
        field_axpy(d, -1.0, v);
        const double denom = sobolev_norm_sq(d, k);
        if (denom == 0.0) continue;
        double num = 0.0;
        for (int i = 1; i <= model.n_modes; ++i) {
            FourierField gu = apply_noise(model, u, i);
            field_axpy(gu, -1.0, apply_noise(model, v, i));
            num += sobolev_norm_sq(gu, k);
        }
        sup = std::max(sup, num / denom);
    }
    return sup;
}

} // namespace gspde
