#include <doctest.h>

#include "gspde/field.hpp"
#include "gspde/initial_fields.hpp"
#include "gspde/rng.hpp"

#include <cmath>

using namespace gspde;

namespace {

FourierField random_divfree(int dim, int cutoff, std::uint64_t seed) {
    return random_spectrum_field(dim, cutoff, 1.0, cutoff, 1.0, seed);
}

} // namespace

TEST_CASE("make_field: empty mode list gives the zero field") {
    const FourierField f = make_field(2, 4, {});
    CHECK(sobolev_norm_sq(f, SobolevIndex{0}) == 0.0);
    CHECK(f.dim() == 2);
    CHECK(f.cutoff() == 4);
}

TEST_CASE("make_field: missing mirror is filled with the conjugate") {
    const FourierField f = make_field(2, 2, {{Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}}}});
    const ModeVec a = f.get(Wave{1, 0, 0});
    const ModeVec b = f.get(Wave{-1, 0, 0});
    CHECK(a[1] == Complex{1, 0});
    CHECK(b[1] == Complex{1, 0}); // conjugate of a real vector
    CHECK(sobolev_norm_sq(f, SobolevIndex{0}) == doctest::Approx(2.0));
}

TEST_CASE("make_field: inconsistent conjugate pair is rejected") {
    const ModeVec v{Complex{0, 0}, Complex{0, 1}};
    CHECK_THROWS_AS(make_field(2, 2, {{Wave{1, 0, 0}, v}, {Wave{-1, 0, 0}, v}}), FieldError);
}

TEST_CASE("make_field: k = 0 with nonzero amplitude and out-of-range modes are errors") {
    CHECK_THROWS_AS(make_field(2, 2, {{Wave{0, 0, 0}, ModeVec{Complex{1, 0}}}}), FieldError);
    CHECK_THROWS_AS(make_field(2, 2, {{Wave{3, 0, 0}, ModeVec{Complex{1, 0}}}}), FieldError);
    CHECK_THROWS_AS(
        make_field(2, 2, {{Wave{1, 0, 0}, ModeVec{Complex{1, 0}}}, {Wave{1, 0, 0}, ModeVec{}}}),
        FieldError);
}

TEST_CASE("leray: already divergence-free mode is unchanged") {
    FourierField f(2, 2);
    f.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    const FourierField p = leray_project(f);
    CHECK(p.get(Wave{1, 0, 0})[1] == Complex{1, 0});
    CHECK(p.get(Wave{1, 0, 0})[0] == Complex{0, 0});
}

TEST_CASE("leray: pure gradient direction is annihilated") {
    FourierField f(2, 2);
    f.set(Wave{1, 1, 0}, ModeVec{Complex{1, 0}, Complex{1, 0}});
    const FourierField p = leray_project(f);
    CHECK(std::abs(p.get(Wave{1, 1, 0})[0]) == doctest::Approx(0.0));
    CHECK(std::abs(p.get(Wave{1, 1, 0})[1]) == doctest::Approx(0.0));
}

TEST_CASE("leray: hand-applied I - kk^T/|k|^2 at k=(1,1)") {
    FourierField f(2, 2);
    f.set(Wave{1, 1, 0}, ModeVec{Complex{1, 0}, Complex{0, 0}});
    const FourierField p = leray_project(f);
    CHECK(p.get(Wave{1, 1, 0})[0].real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.get(Wave{1, 1, 0})[1].real() == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("leray: idempotent to 1e-15 and an L2-orthogonal projection") {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        FourierField f(2, 5);
        Rng rng(s);
        for (std::size_t p = 0; p < f.point_count(); ++p) {
            const Wave k = f.wave_at(p);
            if (!wave_in_half_space(k)) continue;
            f.set(k, ModeVec{Complex{rng.gaussian(), rng.gaussian()},
                             Complex{rng.gaussian(), rng.gaussian()}});
        }
        const FourierField p1 = leray_project(f);
        const FourierField p2 = leray_project(p1);
        double worst = 0.0;
        for (std::size_t i = 0; i < p1.raw().size(); ++i)
            worst = std::max(worst, std::abs(p1.raw()[i] - p2.raw()[i]));
        CHECK(worst <= 1e-15 * std::max(1.0, std::sqrt(sobolev_norm_sq(f, SobolevIndex{0}))));

        // <Pf, g - Pg> = 0
        FourierField g(2, 5);
        Rng rng2(s + 1000);
        for (std::size_t q = 0; q < g.point_count(); ++q) {
            const Wave k = g.wave_at(q);
            if (!wave_in_half_space(k)) continue;
            g.set(k, ModeVec{Complex{rng2.gaussian(), rng2.gaussian()},
                             Complex{rng2.gaussian(), rng2.gaussian()}});
        }
        FourierField residual = g;
        field_axpy(residual, -1.0, leray_project(g));
        CHECK(std::abs(sobolev_inner(p1, residual, SobolevIndex{0})) <= 1e-12);
        CHECK(max_divergence_ratio(p1) <= 1e-12);
    }
}

TEST_CASE("sobolev_norm_sq: spec example values") {
    const FourierField zero(2, 3);
    CHECK(sobolev_norm_sq(zero, SobolevIndex{0}) == 0.0);
    CHECK(sobolev_norm_sq(zero, SobolevIndex{3}) == 0.0);

    FourierField f(2, 2);
    f.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    CHECK(sobolev_norm_sq(f, SobolevIndex{0}) == doctest::Approx(2.0));
    CHECK(sobolev_norm_sq(f, SobolevIndex{1}) == doctest::Approx(2.0));
    CHECK(sobolev_norm_sq(f, SobolevIndex{2}) == doctest::Approx(2.0));

    FourierField g(2, 2);
    g.set(Wave{2, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    CHECK(sobolev_norm_sq(g, SobolevIndex{1}) == doctest::Approx(8.0));
}

TEST_CASE("sobolev norms are monotone in the order (embedding constant 1)") {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const FourierField f = random_divfree(s % 2 ? 2 : 3, 6, s);
        for (int m = 0; m < 4; ++m)
            CHECK(sobolev_norm_sq(f, SobolevIndex{m}) <=
                  sobolev_norm_sq(f, SobolevIndex{m + 1}) * (1.0 + 1e-14));
    }
}

TEST_CASE("stokes_term: mode-wise -nu |k|^2 scaling") {
    FourierField f(2, 2);
    f.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    const FourierField s = stokes_term(f, 0.1);
    CHECK(s.get(Wave{1, 0, 0})[1].real() == doctest::Approx(-0.1));

    FourierField g(2, 3);
    g.set(Wave{2, 1, 0}, ModeVec{Complex{0.3, -0.2}, Complex{-0.6, 0.4}});
    const FourierField sg = stokes_term(g, 1.0);
    CHECK(sg.get(Wave{2, 1, 0})[0] == Complex{-1.5, 1.0}); // -5a, |k|^2 = 5
    CHECK(sg.get(Wave{2, 1, 0})[1] == Complex{3.0, -2.0});
    CHECK_THROWS_AS(stokes_term(f, 0.0), FieldError);
    CHECK_THROWS_AS(stokes_term(f, -1.0), FieldError);
}

TEST_CASE("galerkin_project: identity within the cutoff, zero beyond") {
    FourierField f(2, 4);
    f.set(Wave{3, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    const FourierField g = galerkin_project(f, 2);
    CHECK(sobolev_norm_sq(g, SobolevIndex{0}) == 0.0);

    FourierField h(2, 2);
    h.set(Wave{1, 1, 0}, ModeVec{Complex{1, 0}, Complex{-1, 0}});
    CHECK(galerkin_project(h, 2) == h);
    CHECK(galerkin_project(h, 5) == h);
}

TEST_CASE("galerkin_project: tail bound with mu_n = n+1 on random fields") {
    // |(I-P_n)f|^2_{m-1} <= (n+1)^{-2} |f|^2_m, exact with the Euclidean
    // weight and the inf-norm cutoff.
    for (std::uint64_t s = 1; s <= 100; ++s) {
        const int dim = s % 2 ? 2 : 3;
        const FourierField f = random_divfree(dim, 8, s);
        for (int n = 1; n <= 6; ++n) {
            FourierField tail = f;
            field_axpy(tail, -1.0, galerkin_project(f, n));
            for (int m = 1; m <= 3; ++m) {
                const double lhs = sobolev_norm_sq(tail, SobolevIndex{m - 1});
                const double rhs = sobolev_norm_sq(f, SobolevIndex{m}) / ((n + 1.0) * (n + 1.0));
                CHECK(lhs <= rhs);
            }
        }
    }
}

TEST_CASE("evaluate_physical: zero field, closed-form cosine, error branches") {
    const FourierField zero(2, 2);
    const auto flat = evaluate_physical(zero, 8);
    for (double v : flat) CHECK(v == 0.0);

    FourierField f(2, 2);
    f.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{0.5, 0}});
    const auto vals = evaluate_physical(f, 8);
    // second component equals cos(x1) on the grid
    for (int i = 0; i < 8; ++i) {
        const double x1 = 2.0 * M_PI * i / 8.0;
        for (int j = 0; j < 8; ++j) {
            const std::size_t point = static_cast<std::size_t>(i * 8 + j);
            CHECK(vals[point * 2 + 1] == doctest::Approx(std::cos(x1)).epsilon(1e-12));
            CHECK(vals[point * 2 + 0] == doctest::Approx(0.0));
        }
    }

    CHECK_THROWS_AS(evaluate_physical(f, 4), FieldError); // grid too small

    FourierField broken(2, 2);
    broken.set_unchecked(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{0, 1}});
    // mirror left at zero: reality violated, imaginary residue detected
    CHECK_THROWS_AS(evaluate_physical(broken, 8), FieldError);
}

TEST_CASE("validate_field detects broken invariants") {
    FourierField f = random_divfree(2, 4, 3);
    CHECK_NOTHROW(validate_field(f, 1e-12, 1e-12));
    f.set_unchecked(Wave{1, 2, 0}, ModeVec{Complex{5, 5}, Complex{0, 0}});
    CHECK_THROWS_AS(validate_field(f, 1e-12, -1.0), FieldError);
}

TEST_CASE("restricted: copies the overlap into a different container size") {
    const FourierField f = random_divfree(2, 6, 9);
    const FourierField small = restricted(f, 3);
    CHECK(small.cutoff() == 3);
    for (std::size_t p = 0; p < small.point_count(); ++p) {
        const Wave k = small.wave_at(p);
        for (int c = 0; c < 2; ++c) CHECK(small.at(p, c) == f.at(f.flat_index(k), c));
    }
    const FourierField big = restricted(small, 6);
    CHECK(sobolev_norm_sq(big, SobolevIndex{0}) ==
          doctest::Approx(sobolev_norm_sq(small, SobolevIndex{0})));
}

TEST_CASE("taylor_green fields are divergence-free and analytic in W^{4,2}") {
    for (int dim : {2, 3}) {
        const FourierField tg = taylor_green(dim, 4, 1.0);
        CHECK(max_divergence_ratio(tg) <= 1e-15);
        CHECK_NOTHROW(validate_field(tg, 1e-15, 1e-12));
        CHECK(std::isfinite(sobolev_norm_sq(tg, SobolevIndex{5})));
        CHECK(sobolev_norm_sq(tg, SobolevIndex{0}) > 0.0);
    }
}
