#include "gspde/integrator.hpp"

#include <cmath>

namespace gspde {

namespace {

/// Accumulates |f_k|^2 weighted by |k|^{2m}, m = 0..m_max, in one pass.
void norm_row(const FourierField& f, int m_max, double* out) {
    for (int m = 0; m <= m_max; ++m) out[m] = 0.0;
    const int dim = f.dim();
    const std::size_t n = f.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        double amp = 0.0;
        for (int c = 0; c < dim; ++c) amp += std::norm(f.at(p, c));
        if (amp == 0.0) continue;
        const double ksq = wave_norm_sq(f.wave_at(p));
        double w = amp;
        for (int m = 0; m <= m_max; ++m) {
            out[m] += w;
            w *= ksq;
        }
    }
}

void difference_norm_row(const FourierField& hi, const FourierField& lo, int m_max, double* out) {
    for (int m = 0; m <= m_max; ++m) out[m] = 0.0;
    const int dim = hi.dim();
    const std::size_t n = hi.point_count();
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
        double w = amp;
        for (int m = 0; m <= m_max; ++m) {
            out[m] += w;
            w *= ksq;
        }
    }
}

bool row_finite(const double* row, int m_max) {
    for (int m = 0; m <= m_max; ++m)
        if (!std::isfinite(row[m])) return false;
    return true;
}

/// Per-level stepping state: evaluator, precomputed mode factors and the
/// scaled additive basis, so the hot loop does mode-wise work only.
struct LevelStepper {
    int level;
    FourierField u;
    NonlinearEvaluator nonlinear;
    std::vector<double> lap;          // |k|^2 per point
    std::vector<double> exp_factor;   // e^{-nu |k|^2 dt} (exponential scheme)
    std::vector<double> mult_damp;    // (1+|k|^2)^{-s/2} (multiplicative noise)
    std::vector<FourierField> additive_fields; // c_i phi_i truncated to the level
    bool alive = true;

    LevelStepper(int lvl, const IntegratorConfig& cfg)
        : level(lvl),
          u(restricted(cfg.initial_field, lvl)),
          nonlinear(cfg.dim, lvl, cfg.convolution) {
        const std::size_t n = u.point_count();
        lap.resize(n);
        for (std::size_t p = 0; p < n; ++p) lap[p] = wave_norm_sq(u.wave_at(p));
        if (cfg.scheme == Scheme::exponential_euler) {
            exp_factor.resize(n);
            for (std::size_t p = 0; p < n; ++p) exp_factor[p] = std::exp(-cfg.nu * lap[p] * cfg.dt);
        }
        if (cfg.noise.n_modes > 0) {
            if (cfg.noise.kind == NoiseModel::Kind::linear_multiplicative) {
                const double s = cfg.noise.smoothing_order;
                mult_damp.resize(n);
                for (std::size_t p = 0; p < n; ++p)
                    mult_damp[p] = std::pow(1.0 + lap[p], -s / 2.0);
            } else {
                additive_fields.reserve(static_cast<std::size_t>(cfg.noise.n_modes));
                for (int i = 1; i <= cfg.noise.n_modes; ++i) {
                    FourierField phi =
                        shear_basis_field(cfg.dim, lvl, additive_basis_element(cfg.dim, i));
                    field_scale(phi, cfg.noise.coefficients[static_cast<std::size_t>(i - 1)]);
                    additive_fields.push_back(std::move(phi));
                }
            }
        }
    }

    void step(const IntegratorConfig& cfg, const WienerIncrement& dw) {
        const int dim = u.dim();
        const std::size_t n = u.point_count();
        FourierField next = u;

        FourierField nl;
        const bool has_nl = cfg.nonlinearity;
        if (has_nl) nl = nonlinear.apply(u);

        // The exponential scheme folds the Stokes part into the end-of-step
        // factor; the explicit scheme keeps it in the drift.
        const double dt = cfg.dt;
        const double nu = cfg.nu;
        const bool expo = cfg.scheme == Scheme::exponential_euler;
        for (std::size_t p = 0; p < n; ++p) {
            for (int c = 0; c < dim; ++c) {
                Complex d = expo ? Complex{0.0, 0.0} : -nu * lap[p] * u.at(p, c);
                if (has_nl) d -= nl.at(p, c);
                next.at(p, c) += dt * d;
            }
        }

        if (cfg.noise.n_modes > 0) {
            if (cfg.noise.kind == NoiseModel::Kind::linear_multiplicative) {
                // All G_i are proportional: sum_i c_i S_s u dW^i collapses to
                // one damped field scaled by sum_i c_i dW^i.
                double scalar = 0.0;
                for (int i = 0; i < cfg.noise.n_modes; ++i)
                    scalar += cfg.noise.coefficients[static_cast<std::size_t>(i)] *
                              dw.values[static_cast<std::size_t>(i)];
                for (std::size_t p = 0; p < n; ++p) {
                    const double w = scalar * mult_damp[p];
                    for (int c = 0; c < dim; ++c) next.at(p, c) += w * u.at(p, c);
                }
            } else {
                for (int i = 0; i < cfg.noise.n_modes; ++i)
                    field_axpy(next, dw.values[static_cast<std::size_t>(i)],
                               additive_fields[static_cast<std::size_t>(i)]);
            }
        }

        if (cfg.scheme == Scheme::exponential_euler) {
            for (std::size_t p = 0; p < n; ++p)
                for (int c = 0; c < dim; ++c) next.at(p, c) *= exp_factor[p];
        }
        u = std::move(next);
    }
};

} // namespace

void IntegratorConfig::validate(int level) const {
    if (dim != 2 && dim != 3) throw ConfigError("integrator.dim: expected 2 or 3");
    if (!(dt > 0.0)) throw ConfigError("integrator.dt: expected > 0");
    if (!(t_end > 0.0)) throw ConfigError("integrator.t_end: expected > 0");
    if (dt > t_end) throw ConfigError("integrator.dt: expected dt <= t_end, found dt = " +
                                      std::to_string(dt) + ", t_end = " + std::to_string(t_end));
    if (!(nu > 0.0)) throw ConfigError("integrator.nu: expected > 0");
    if (level < 1) throw ConfigError("level: expected >= 1");
    if (m_max < 0) throw ConfigError("integrator.m_max: expected >= 0");
    if (scheme == Scheme::explicit_euler) {
        const double guard = dt * nu * (dim * static_cast<double>(level) * level);
        if (guard > 1.0)
            throw ConfigError("integrator.dt: explicit diffusion guard dt*nu*(dim*n^2) = " +
                              std::to_string(guard) + " > 1 at level " + std::to_string(level) +
                              "; reduce dt or set scheme = \"exponential\"");
    }
    if (initial_field.dim() != 0 && initial_field.dim() != dim)
        throw ConfigError("initial_field: dimension mismatch with grid.dim");
}

FourierField drift(const FourierField& u, double nu, int n, bool nonlinearity,
                   ConvolutionPath path) {
    FourierField d = stokes_term(u, nu);
    if (nonlinearity) field_axpy(d, -1.0, nonlinear_term(u, path));
    return galerkin_project(d, n);
}

FourierField step_em(const FourierField& u, const IntegratorConfig& cfg,
                     const WienerIncrement& dw) {
    if (static_cast<int>(dw.values.size()) != cfg.noise.n_modes)
        throw ConfigError("step_em: increment length does not match noise.n_modes");
    const int n = cfg.galerkin_cutoff;
    FourierField next = u;
    field_axpy(next, cfg.dt, drift(u, cfg.nu, n, cfg.nonlinearity, cfg.convolution));
    for (int i = 1; i <= cfg.noise.n_modes; ++i)
        field_axpy(next, dw.values[static_cast<std::size_t>(i - 1)],
                   galerkin_project(apply_noise(cfg.noise, u, i), n));
    return next;
}

const PairDifferenceSeries& CoupledRunResult::diff(std::size_t i, std::size_t j) const {
    for (const auto& d : diffs)
        if (d.first == i && d.second == j) return d;
    throw ConfigError("CoupledRunResult::diff: no such level pair");
}

CoupledRunResult integrate_coupled(const std::vector<int>& levels, const IntegratorConfig& cfg) {
    if (levels.empty()) throw ConfigError("integrate_coupled: empty level list");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] < levels[i - 1])
            throw ConfigError("integrate_coupled: levels must be ascending");
    for (int lvl : levels) cfg.validate(lvl);

    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    const std::size_t n_rows = n_steps + 1;
    const std::size_t row = static_cast<std::size_t>(cfg.m_max + 1);
    const std::size_t n_levels = levels.size();

    CoupledRunResult result;
    result.levels = levels;
    result.records.resize(n_levels);

    std::vector<LevelStepper> steppers;
    steppers.reserve(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l) {
        steppers.emplace_back(levels[l], cfg);
        TrajectoryRecord& rec = result.records[l];
        rec.level = levels[l];
        rec.dt = cfg.dt;
        rec.seed = cfg.seed;
        rec.m_max = cfg.m_max;
        rec.times.reserve(n_rows);
        rec.norms.assign(n_rows * row, 0.0);
        if (cfg.record_fields) rec.fields.reserve(n_rows);
    }
    for (std::size_t i = 0; i < n_levels; ++i)
        for (std::size_t j = i + 1; j < n_levels; ++j) {
            PairDifferenceSeries d;
            d.first = i;
            d.second = j;
            d.m_max = cfg.m_max;
            d.norms.assign(n_rows * row, 0.0);
            result.diffs.push_back(std::move(d));
        }

    Rng noise_rng(cfg.seed);

    auto observe = [&](std::size_t step_index, double t) {
        for (std::size_t l = 0; l < n_levels; ++l) {
            TrajectoryRecord& rec = result.records[l];
            LevelStepper& st = steppers[l];
            if (!st.alive) continue;
            rec.times.push_back(t);
            double* out = rec.norms.data() + step_index * row;
            norm_row(st.u, cfg.m_max, out);
            if (cfg.record_fields) rec.fields.push_back(st.u);
            if (!row_finite(out, cfg.m_max)) {
                rec.diverged_step = step_index;
                st.alive = false;
            }
        }
        for (auto& d : result.diffs) {
            if (d.valid_steps != step_index) continue; // frozen by a divergence
            const LevelStepper& a = steppers[d.first];
            const LevelStepper& b = steppers[d.second];
            if (!a.alive || !b.alive) continue;
            difference_norm_row(b.u, a.u, cfg.m_max, d.norms.data() + step_index * row);
            d.valid_steps = step_index + 1;
        }
    };

    observe(0, 0.0);
    for (std::size_t s = 1; s <= n_steps; ++s) {
        const WienerIncrement dw = sample_increment(cfg.noise, cfg.dt, noise_rng);
        bool any_alive = false;
        for (auto& st : steppers) {
            if (!st.alive) continue;
            st.step(cfg, dw);
            any_alive = true;
        }
        if (!any_alive) break;
        observe(s, static_cast<double>(s) * cfg.dt);
    }

    for (std::size_t l = 0; l < n_levels; ++l) {
        TrajectoryRecord& rec = result.records[l];
        rec.norms.resize(rec.times.size() * row);
        rec.final_state = std::move(steppers[l].u);
    }
    for (auto& d : result.diffs) d.norms.resize(d.valid_steps * row);
    return result;
}

TrajectoryRecord integrate_path(const IntegratorConfig& cfg) {
    CoupledRunResult r = integrate_coupled({cfg.galerkin_cutoff}, cfg);
    return std::move(r.records.front());
}

std::vector<double> energy_residual(const TrajectoryRecord& rec, const IntegratorConfig& cfg,
                                    SobolevIndex order) {
    if (rec.fields.size() != rec.times.size() || rec.fields.size() < 2)
        throw ConfigError("energy_residual: record was thinned (full field history required)");
    Rng noise_rng(rec.seed);
    std::vector<double> out;
    out.reserve(rec.fields.size() - 1);
    for (std::size_t s = 0; s + 1 < rec.fields.size(); ++s) {
        const WienerIncrement dw = sample_increment(cfg.noise, cfg.dt, noise_rng);
        const FourierField& u = rec.fields[s];
        const FourierField& u_next = rec.fields[s + 1];
        const FourierField d = drift(u, cfg.nu, rec.level, cfg.nonlinearity, cfg.convolution);
        double bracket = 2.0 * sobolev_inner(d, u, order) * cfg.dt;
        for (int i = 1; i <= cfg.noise.n_modes; ++i) {
            const FourierField g = galerkin_project(apply_noise(cfg.noise, u, i), rec.level);
            bracket += sobolev_norm_sq(g, order) * cfg.dt;
            bracket += 2.0 * sobolev_inner(g, u, order) * dw.values[static_cast<std::size_t>(i - 1)];
        }
        out.push_back(sobolev_norm_sq(u_next, order) - sobolev_norm_sq(u, order) - bracket);
    }
    return out;
}

} // namespace gspde
