#include <doctest.h>

#include "gspde/convolution.hpp"
#include "gspde/initial_fields.hpp"

#include <cmath>

using namespace gspde;

namespace {

/// Reference for nonlinear_term: oracle convolution + truncation + Leray.
FourierField oracle_nonlinear(const FourierField& u) {
    return leray_project(restricted(convolve_direct(u, u), u.cutoff()));
}

double rel_error(const FourierField& got, const FourierField& want) {
    const double ref = std::sqrt(sobolev_norm_sq(want, SobolevIndex{0}));
    const double err = std::sqrt(difference_norm_sq(got, want, SobolevIndex{0}));
    return ref > 0.0 ? err / ref : err;
}

} // namespace

TEST_CASE("convolve_direct: zero input gives zero") {
    const FourierField zero(2, 3);
    const FourierField out = convolve_direct(zero, zero);
    CHECK(sobolev_norm_sq(out, SobolevIndex{0}) == 0.0);
    CHECK(out.cutoff() == 6);
}

TEST_CASE("single shear mode self-advection vanishes") {
    // u.k = 0 for one shear mode, so (u.grad)u = 0 exactly.
    FourierField u(2, 2);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    CHECK(sobolev_norm_sq(convolve_direct(u, u), SobolevIndex{0}) == 0.0);
    CHECK(sobolev_norm_sq(nonlinear_term(u, ConvolutionPath::direct), SobolevIndex{0}) <= 1e-28);
    CHECK(sobolev_norm_sq(nonlinear_term(u, ConvolutionPath::fft), SobolevIndex{0}) <= 1e-28);
}

TEST_CASE("two-mode field: nonlinear term against the brute-force oracle") {
    // f_{(1,0)} = (0,1), f_{(0,1)} = (1,0), plus conjugates. The double sum
    // puts (i,i) at k=(1,1) and (-i,i) at k=(1,-1); both are pure gradient
    // directions, so the projected term vanishes there.
    FourierField u(2, 2);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    u.set(Wave{0, 1, 0}, ModeVec{Complex{1, 0}, Complex{0, 0}});
    const FourierField raw = convolve_direct(u, u);
    CHECK(raw.get(Wave{1, 1, 0})[0] == Complex{0, 1});
    CHECK(raw.get(Wave{1, 1, 0})[1] == Complex{0, 1});
    CHECK(raw.get(Wave{1, -1, 0})[0] == Complex{0, -1});
    CHECK(raw.get(Wave{1, -1, 0})[1] == Complex{0, 1});
    const FourierField want = oracle_nonlinear(u);
    for (auto path : {ConvolutionPath::direct, ConvolutionPath::fft}) {
        const FourierField got = nonlinear_term(u, path);
        CHECK(std::sqrt(difference_norm_sq(got, want, SobolevIndex{0})) <= 1e-14);
        CHECK(std::abs(got.get(Wave{1, 1, 0})[0]) <= 1e-15);
    }
}

TEST_CASE("asymmetric two-mode field: hand-derived projected coefficients") {
    // f_{(1,0)} = (0,1), f_{(0,2)} = (1,0): at k=(1,2) the raw sum is
    // (2i, i); Leray with |k|^2 = 5 leaves (6i/5, -3i/5).
    FourierField u(2, 2);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    u.set(Wave{0, 2, 0}, ModeVec{Complex{1, 0}, Complex{0, 0}});
    for (auto path : {ConvolutionPath::direct, ConvolutionPath::fft}) {
        const FourierField got = nonlinear_term(u, path);
        CHECK(got.get(Wave{1, 2, 0})[0].imag() == doctest::Approx(1.2).epsilon(1e-13));
        CHECK(got.get(Wave{1, 2, 0})[1].imag() == doctest::Approx(-0.6).epsilon(1e-13));
        CHECK(got.get(Wave{1, 2, 0})[0].real() == doctest::Approx(0.0));
    }
}

TEST_CASE("oracle equivalence on random divergence-free fields, both paths") {
    for (int dim : {2, 3}) {
        for (int cutoff = 2; cutoff <= (dim == 2 ? 8 : 5); ++cutoff) {
            const FourierField u = random_spectrum_field(
                dim, cutoff, 1.5, cutoff, 1.0, static_cast<std::uint64_t>(dim * 100 + cutoff));
            const FourierField want = oracle_nonlinear(u);
            CHECK(rel_error(nonlinear_term(u, ConvolutionPath::direct), want) <= 1e-12);
            CHECK(rel_error(nonlinear_term(u, ConvolutionPath::fft), want) <= 1e-12);
        }
    }
}

TEST_CASE("nonlinear term output keeps the field invariants") {
    for (std::uint64_t s = 1; s <= 6; ++s) {
        const FourierField u = random_spectrum_field(2, 6, 1.5, 6, 1.0, s);
        for (auto path : {ConvolutionPath::direct, ConvolutionPath::fft}) {
            const FourierField n = nonlinear_term(u, path);
            CHECK_NOTHROW(validate_field(n, 1e-12, 1e-12));
            CHECK(n.cutoff() == u.cutoff());
        }
    }
}

TEST_CASE("energy cancellation: <P L_u u, u> vanishes to rounding") {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const int dim = s % 2 ? 2 : 3;
        const int cutoff = 2 + static_cast<int>(s % 5);
        const FourierField u = random_spectrum_field(dim, cutoff, 1.0, cutoff, 1.0, s);
        const FourierField n = nonlinear_term(u);
        const double inner = sobolev_inner(n, u, SobolevIndex{0});
        const double scale = std::pow(sobolev_norm_sq(u, SobolevIndex{0}), 1.5);
        CHECK(std::abs(inner) <= 1e-10 * std::max(scale, 1e-30));
    }
}

TEST_CASE("convolve_direct rejects shape mismatches") {
    const FourierField a(2, 3);
    const FourierField b(3, 3);
    const FourierField c(2, 4);
    CHECK_THROWS_AS(convolve_direct(a, b), FieldError);
    CHECK_THROWS_AS(convolve_direct(a, c), FieldError);
}

TEST_CASE("automatic path choice switches to the padded FFT at larger cutoffs") {
    NonlinearEvaluator small(2, 4, ConvolutionPath::automatic);
    CHECK(small.resolved_path() == ConvolutionPath::direct);
    NonlinearEvaluator large(2, 16, ConvolutionPath::automatic);
    CHECK(large.resolved_path() == ConvolutionPath::fft);
    CHECK(large.grid_size() >= 3 * 16 + 1); // alias-free padding
}
