#include <doctest.h>

#include "gspde/initial_fields.hpp"
#include "gspde/integrator.hpp"

#include <cmath>

using namespace gspde;

namespace {

IntegratorConfig base_config() {
    IntegratorConfig cfg;
    cfg.dim = 2;
    cfg.galerkin_cutoff = 4;
    cfg.dt = 1e-2;
    cfg.t_end = 0.1;
    cfg.nu = 0.1;
    cfg.noise = NoiseModel::make(NoiseModel::Kind::additive, 0, 0.0, 1.0, 0);
    cfg.seed = 17;
    cfg.m_max = 3;
    return cfg;
}

} // namespace

TEST_CASE("drift: zero field maps to zero; single shear mode is pure Stokes decay") {
    const FourierField zero(2, 4);
    CHECK(sobolev_norm_sq(drift(zero, 0.1, 4), SobolevIndex{0}) == 0.0);

    FourierField u(2, 4);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    const FourierField d = drift(u, 0.1, 4);
    // nonlinearity vanishes for one shear mode; the drift is -nu |k|^2 u
    CHECK(d.get(Wave{1, 0, 0})[1].real() == doctest::Approx(-0.1).epsilon(1e-13));
    double off_mode = 0.0;
    for (std::size_t p = 0; p < d.point_count(); ++p) {
        const Wave k = d.wave_at(p);
        if ((k[0] == 1 || k[0] == -1) && k[1] == 0) continue;
        for (int c = 0; c < 2; ++c) off_mode = std::max(off_mode, std::abs(d.at(p, c)));
    }
    CHECK(off_mode <= 1e-15);
}

TEST_CASE("drift: two-mode field matches the convolve_direct hand assembly") {
    FourierField u(2, 2);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    u.set(Wave{0, 1, 0}, ModeVec{Complex{1, 0}, Complex{0, 0}});
    const double nu = 0.2;
    FourierField want = stokes_term(u, nu);
    field_axpy(want, -1.0, leray_project(restricted(convolve_direct(u, u), 2)));
    const FourierField got = drift(u, nu, 2);
    CHECK(std::sqrt(difference_norm_sq(got, want, SobolevIndex{0})) <= 1e-13);
}

TEST_CASE("step_em: zero drift and zero noise leave the state unchanged") {
    IntegratorConfig cfg = base_config();
    const FourierField zero(2, 4);
    const WienerIncrement dw{cfg.dt, {}};
    CHECK(step_em(zero, cfg, dw) == zero);
}

TEST_CASE("step_em: pure Stokes single mode scales by 1 - nu dt") {
    IntegratorConfig cfg = base_config();
    cfg.dt = 0.01;
    cfg.nu = 0.1;
    FourierField u(2, 4);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    const FourierField next = step_em(u, cfg, WienerIncrement{cfg.dt, {}});
    CHECK(next.get(Wave{1, 0, 0})[1].real() == doctest::Approx(1.0 - 0.001).epsilon(1e-13));
}

TEST_CASE("step_em: additive noise from the zero field is the scaled basis sum") {
    IntegratorConfig cfg = base_config();
    cfg.noise = NoiseModel::make(NoiseModel::Kind::additive, 4, 0.5, 1.0, 0);
    const FourierField zero(2, 4);
    WienerIncrement dw{cfg.dt, {0.3, -0.2, 0.1, 0.05}};
    const FourierField next = step_em(zero, cfg, dw);
    FourierField want(2, 4);
    for (int i = 1; i <= 4; ++i) {
        FourierField phi = shear_basis_field(2, 4, additive_basis_element(2, i));
        field_scale(phi, cfg.noise.coefficients[static_cast<std::size_t>(i - 1)]);
        field_axpy(want, dw.values[static_cast<std::size_t>(i - 1)], phi);
    }
    CHECK(std::sqrt(difference_norm_sq(next, want, SobolevIndex{0})) <= 1e-15);
}

TEST_CASE("integrate_path: dissipative run has monotone decreasing norms") {
    IntegratorConfig cfg = base_config();
    cfg.nu = 0.5;
    cfg.initial_field = taylor_green(2, 4, 1.0);
    const TrajectoryRecord rec = integrate_path(cfg);
    REQUIRE(rec.steps() == 11);
    for (std::size_t i = 1; i < rec.steps(); ++i)
        for (int m = 0; m <= 2; ++m) CHECK(rec.norm_sq(i, m) < rec.norm_sq(i - 1, m));
    CHECK_FALSE(rec.diverged());
}

TEST_CASE("integrate_path: zero data and zero noise stay identically zero") {
    IntegratorConfig cfg = base_config();
    cfg.initial_field = FourierField(2, 4);
    const TrajectoryRecord rec = integrate_path(cfg);
    for (std::size_t i = 0; i < rec.steps(); ++i) CHECK(rec.norm_sq(i, 0) == 0.0);
}

TEST_CASE("integrate_path: identical seeds give bitwise identical norm series") {
    IntegratorConfig cfg = base_config();
    cfg.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 8, 0.3, 1.0, 1);
    cfg.initial_field = taylor_green(2, 4, 1.0);
    const TrajectoryRecord a = integrate_path(cfg);
    const TrajectoryRecord b = integrate_path(cfg);
    CHECK(a.norms == b.norms);
    CHECK(a.final_state == b.final_state);
}

TEST_CASE("integrator state stays in V_n, divergence-free, conjugate-symmetric") {
    IntegratorConfig cfg = base_config();
    cfg.galerkin_cutoff = 5;
    cfg.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 8, 0.3, 1.0, 1);
    cfg.initial_field = random_spectrum_field(2, 8, 2.0, 8, 1.0, 5); // tail beyond the level
    const TrajectoryRecord rec = integrate_path(cfg);
    const FourierField& u = rec.final_state;
    CHECK(u.cutoff() == 5); // support confined to the level by construction
    CHECK(max_divergence_ratio(u) <= 1e-10);
    CHECK_NOTHROW(validate_field(u, 0.0)); // reality holds bitwise along the flow
}

TEST_CASE("integrate_coupled: duplicate levels give identical records") {
    IntegratorConfig cfg = base_config();
    cfg.noise = NoiseModel::make(NoiseModel::Kind::additive, 6, 0.4, 1.0, 0);
    cfg.initial_field = taylor_green(2, 4, 1.0);
    const CoupledRunResult r = integrate_coupled({4, 4}, cfg);
    CHECK(r.records[0].norms == r.records[1].norms);
    const auto& d = r.diff(0, 1);
    for (std::size_t i = 0; i < d.valid_steps; ++i) CHECK(d.norm_sq(i, 0) == 0.0);
}

TEST_CASE("integrate_coupled: singleton list agrees bitwise with integrate_path") {
    IntegratorConfig cfg = base_config();
    cfg.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 8, 0.3, 1.0, 1);
    cfg.initial_field = taylor_green(2, 4, 1.0);
    const TrajectoryRecord a = integrate_path(cfg);
    cfg.galerkin_cutoff = 4;
    const CoupledRunResult r = integrate_coupled({4}, cfg);
    CHECK(a.norms == r.records[0].norms);
    CHECK(a.final_state == r.records[0].final_state);
}

TEST_CASE("integrate_coupled: zero-noise heat flow differences shrink with level") {
    IntegratorConfig cfg = base_config();
    cfg.nonlinearity = false;
    cfg.dt = 1e-3;
    cfg.t_end = 0.25;
    cfg.initial_field = random_spectrum_field(2, 8, 2.0, 8, 1.0, 21);
    const CoupledRunResult r = integrate_coupled({2, 4, 8}, cfg);
    const auto& d01 = r.diff(0, 1);
    const auto& d12 = r.diff(1, 2);
    const std::size_t last = d01.valid_steps - 1;
    CHECK(d12.norm_sq(last, 1) < d01.norm_sq(last, 1));
    // deterministic spectral-tail decay over time as well
    CHECK(d01.norm_sq(last, 0) < d01.norm_sq(0, 0));
}

TEST_CASE("multiplicative fast path matches the per-mode step_em composition") {
    IntegratorConfig cfg = base_config();
    cfg.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 8, 0.3, 1.0, 1);
    cfg.initial_field = taylor_green(2, 4, 1.0);
    cfg.dt = 1e-2;
    cfg.t_end = 1e-2; // one step
    const TrajectoryRecord rec = integrate_path(cfg);

    Rng rng(cfg.seed);
    const WienerIncrement dw = sample_increment(cfg.noise, cfg.dt, rng);
    const FourierField want = step_em(restricted(cfg.initial_field, 4), cfg, dw);
    const double scale = std::sqrt(sobolev_norm_sq(want, SobolevIndex{0}));
    CHECK(std::sqrt(difference_norm_sq(rec.final_state, want, SobolevIndex{0})) <=
          1e-13 * std::max(1.0, scale));
}

TEST_CASE("stability guard rejects explicit configs and accepts exponential ones") {
    IntegratorConfig cfg = base_config();
    cfg.galerkin_cutoff = 32;
    cfg.dt = 0.05;
    cfg.nu = 1.0; // dt*nu*(2*32^2) = 102.4
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.scheme = Scheme::exponential_euler;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0.2;
    cfg.t_end = 0.1; // dt > t_end
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("exponential scheme applies the exact Stokes factor") {
    IntegratorConfig cfg = base_config();
    cfg.scheme = Scheme::exponential_euler;
    cfg.nu = 0.3;
    cfg.dt = 0.05;
    cfg.t_end = 0.5;
    FourierField u(2, 4);
    u.set(Wave{2, 1, 0}, ModeVec{Complex{1, 0}, Complex{-2, 0}});
    cfg.initial_field = leray_project(u);
    const TrajectoryRecord rec = integrate_path(cfg);
    const double want =
        sobolev_norm_sq(cfg.initial_field, SobolevIndex{0}) * std::exp(-2.0 * 0.3 * 5.0 * 0.5);
    CHECK(rec.norm_sq(rec.steps() - 1, 0) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("divergence is marked, not thrown") {
    IntegratorConfig cfg = base_config();
    cfg.scheme = Scheme::exponential_euler; // bypass the guard to provoke blow-up
    cfg.dim = 2;
    cfg.galerkin_cutoff = 6;
    cfg.dt = 0.5;
    cfg.t_end = 50.0;
    cfg.nu = 1e-6;
    cfg.initial_field = random_spectrum_field(2, 6, 0.5, 6, 50.0, 3);
    const TrajectoryRecord rec = integrate_path(cfg);
    REQUIRE(rec.diverged());
    CHECK(*rec.diverged_step > 0);
    CHECK(rec.steps() == *rec.diverged_step + 1);
}

TEST_CASE("energy_residual: zero field and zero noise give all-zero residuals") {
    IntegratorConfig cfg = base_config();
    cfg.record_fields = true;
    cfg.initial_field = FourierField(2, 4);
    const TrajectoryRecord rec = integrate_path(cfg);
    for (double r : energy_residual(rec, cfg, SobolevIndex{0})) CHECK(r == 0.0);
}

TEST_CASE("energy_residual: pure Stokes closed form nu^2 |k|^4 |u|^2 dt^2") {
    IntegratorConfig cfg = base_config();
    cfg.record_fields = true;
    cfg.nu = 0.1;
    cfg.dt = 0.01;
    cfg.t_end = 0.05;
    FourierField u(2, 4);
    u.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{1, 0}});
    cfg.initial_field = u;
    const TrajectoryRecord rec = integrate_path(cfg);
    const auto res = energy_residual(rec, cfg, SobolevIndex{0});
    REQUIRE(res.size() == 5);
    double energy = 2.0;
    for (double r : res) {
        const double want = cfg.nu * cfg.nu * energy * cfg.dt * cfg.dt; // |k| = 1
        CHECK(r == doctest::Approx(want).epsilon(1e-10));
        energy *= (1.0 - cfg.nu * cfg.dt) * (1.0 - cfg.nu * cfg.dt);
    }
}

TEST_CASE("energy_residual: thinned record is rejected") {
    IntegratorConfig cfg = base_config();
    cfg.initial_field = taylor_green(2, 4, 1.0);
    const TrajectoryRecord rec = integrate_path(cfg); // record_fields = false
    CHECK_THROWS_AS(energy_residual(rec, cfg, SobolevIndex{0}), ConfigError);
}

TEST_CASE("energy_residual: per-step mean scales like dt under refinement with noise") {
    auto run_mean = [](double dt) {
        IntegratorConfig cfg = base_config();
        cfg.record_fields = true;
        cfg.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 8, 0.2, 1.0, 1);
        cfg.initial_field = taylor_green(2, 4, 1.0);
        cfg.dt = dt;
        cfg.t_end = 0.4;
        cfg.seed = 31;
        const TrajectoryRecord rec = integrate_path(cfg);
        const auto res = energy_residual(rec, cfg, SobolevIndex{0});
        double mean = 0.0;
        for (double r : res) mean += std::abs(r);
        return mean / static_cast<double>(res.size());
    };
    const double coarse = run_mean(2e-3);
    const double fine = run_mean(1e-3);
    const double ratio = coarse / fine;
    CHECK(ratio >= 1.4); // ~2 within 30%
    CHECK(ratio <= 2.6);
}
