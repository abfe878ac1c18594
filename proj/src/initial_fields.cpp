#include "gspde/initial_fields.hpp"

#include "gspde/rng.hpp"

#include <cmath>

namespace gspde {

FourierField taylor_green(int dim, int cutoff, double amplitude) {
    if (cutoff < 1) throw FieldError("taylor_green: cutoff must be >= 1");
    FourierField f(dim, cutoff);
    const double a = amplitude / 4.0;
    if (dim == 2) {
        // sin x cos y = sum over (+-1,+-1) of -i s1/4 e^{i(s1 x + s2 y)}
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                const Wave k{s1, s2, 0};
                ModeVec v{};
                v[0] = Complex{0.0, -s1 * a};
                v[1] = Complex{0.0, s2 * a};
                f.set_unchecked(k, v);
            }
    } else {
        // (sin x cos y cos z, -cos x sin y cos z, 0)
        const double b = amplitude / 8.0;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1})
                for (int s3 : {-1, 1}) {
                    const Wave k{s1, s2, s3};
                    ModeVec v{};
                    v[0] = Complex{0.0, -s1 * b};
                    v[1] = Complex{0.0, s2 * b};
                    f.set_unchecked(k, v);
                }
    }
    return f;
}

FourierField single_shear_mode(int dim, int cutoff, const Wave& wave, double amplitude) {
    if (wave_is_zero(wave)) throw FieldError("single_shear_mode: zero wavevector");
    FourierField f(dim, cutoff);
    if (!f.in_range(wave)) throw FieldError("single_shear_mode: wavevector outside cutoff");
    // direction orthogonal to the wavevector, deterministic
    std::array<double, 3> dir{};
    if (dim == 2) {
        const double n = std::sqrt(wave_norm_sq(wave));
        dir = {-wave[1] / n, wave[0] / n, 0.0};
    } else {
        std::array<double, 3> ref = (wave[0] == 0 && wave[1] == 0) ? std::array<double, 3>{1, 0, 0}
                                                                   : std::array<double, 3>{0, 0, 1};
        std::array<double, 3> cr{wave[1] * ref[2] - wave[2] * ref[1],
                                 wave[2] * ref[0] - wave[0] * ref[2],
                                 wave[0] * ref[1] - wave[1] * ref[0]};
        const double n = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
        dir = {cr[0] / n, cr[1] / n, cr[2] / n};
    }
    ModeVec v{};
    for (int c = 0; c < dim; ++c) v[c] = Complex{amplitude / 2.0 * dir[c], 0.0};
    f.set(wave, v);
    return f;
}

FourierField random_spectrum_field(int dim, int cutoff, double alpha, int kmax, double amplitude,
                                   std::uint64_t seed) {
    FourierField f(dim, cutoff);
    Rng rng(seed);
    const int reach = std::min(kmax, cutoff);
    const std::size_t n = f.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        const Wave k = f.wave_at(p);
        if (!wave_in_half_space(k) || wave_inf_norm(k) > reach) continue;
        const double mag = std::pow(wave_norm_sq(k), -alpha / 2.0);
        ModeVec v{};
        for (int c = 0; c < dim; ++c)
            v[c] = mag * Complex{rng.gaussian(), rng.gaussian()};
        f.set(k, v);
    }
    FourierField out = leray_project(f);
    symmetrize(out);
    const double norm = std::sqrt(sobolev_norm_sq(out, SobolevIndex{0}));
    if (norm > 0.0) field_scale(out, amplitude / norm);
    return out;
}

FourierField build_initial_field(const InitialFieldSpec& spec, int dim, int cutoff) {
    if (spec.type == "zero") return FourierField(dim, cutoff);
    if (spec.type == "taylor_green") return taylor_green(dim, cutoff, spec.amplitude);
    if (spec.type == "single_mode")
        return single_shear_mode(dim, cutoff, spec.wave, spec.amplitude);
    if (spec.type == "spectrum")
        return random_spectrum_field(dim, cutoff, spec.alpha, spec.kmax, spec.amplitude, spec.seed);
    throw FieldError("build_initial_field: unknown type '" + spec.type + "'");
}

} // namespace gspde
