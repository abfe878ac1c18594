#pragma once

#include "gspde/convolution.hpp"
#include "gspde/field.hpp"
#include "gspde/noise.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gspde {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Scheme {
    explicit_euler,    ///< Euler-Maruyama, subject to the diffusion guard
    exponential_euler  ///< Lawson variant with the exact Stokes factor
};

struct IntegratorConfig {
    int dim = 2;
    int galerkin_cutoff = 8;
    double dt = 1e-3;
    double t_end = 1.0;
    double nu = 0.1;
    NoiseModel noise;
    FourierField initial_field;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::explicit_euler;
    bool nonlinearity = true; ///< diagnostic switch (off = Stokes/heat flow)
    ConvolutionPath convolution = ConvolutionPath::automatic;
    int m_max = 3;            ///< Sobolev orders recorded per step: 0..m_max
    bool record_fields = false;

    /// Throws ConfigError on dt > t_end or an explicit-scheme stability
    /// violation dt*nu*(dim*n^2) > 1 at the given level.
    void validate(int level) const;
    void validate() const { validate(galerkin_cutoff); }
};

/// One sample path at one Galerkin level: times, per-step Sobolev norm rows
/// and (optionally) the full field history.
struct TrajectoryRecord {
    int level = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    int m_max = 0;
    std::vector<double> times;
    std::vector<double> norms; ///< row-major [step][order 0..m_max]
    std::vector<FourierField> fields;
    FourierField final_state; ///< state at the last recorded step
    std::optional<std::size_t> diverged_step;

    std::size_t steps() const { return times.size(); }
    bool diverged() const { return diverged_step.has_value(); }
    double norm_sq(std::size_t step, int order) const {
        return norms[step * static_cast<std::size_t>(m_max + 1) + static_cast<std::size_t>(order)];
    }
};

/// Difference norms |Psi^n - Psi^m| accumulated during a coupled run, so the
/// level-pair Cauchy quantities never need the full field histories.
struct PairDifferenceSeries {
    std::size_t first = 0;  ///< index into the level list (coarser)
    std::size_t second = 0; ///< index into the level list (finer)
    int m_max = 0;
    std::vector<double> norms; ///< row-major [step][order]
    std::size_t valid_steps = 0;

    double norm_sq(std::size_t step, int order) const {
        return norms[step * static_cast<std::size_t>(m_max + 1) + static_cast<std::size_t>(order)];
    }
};

struct CoupledRunResult {
    std::vector<int> levels;
    std::vector<TrajectoryRecord> records;
    std::vector<PairDifferenceSeries> diffs; ///< all pairs i<j in level-list order

    const PairDifferenceSeries& diff(std::size_t i, std::size_t j) const;
};

/// P_n[ nu Lap u - P L_u u ]: the projected Navier-Stokes drift.
FourierField drift(const FourierField& u, double nu, int n, bool nonlinearity = true,
                   ConvolutionPath path = ConvolutionPath::automatic);

/// One explicit Euler-Maruyama step,
///   u + dt*drift(u) + sum_i P_n(G_i(u)) dW^i,
/// written as the reference composition of the public operations. The run
/// drivers below use an arithmetically equivalent fast path.
FourierField step_em(const FourierField& u, const IntegratorConfig& cfg,
                     const WienerIncrement& dw);

/// Full trajectory at cfg.galerkin_cutoff; ceil(t_end/dt) steps, norm rows at
/// every step, deterministic in (seed, cfg). Divergence marks the record.
TrajectoryRecord integrate_path(const IntegratorConfig& cfg);

/// One Wiener realization drives every level; each level starts from the
/// Galerkin projection of the shared initial field. Levels must be ascending
/// (duplicates allowed). A singleton list reproduces integrate_path bitwise.
CoupledRunResult integrate_coupled(const std::vector<int>& levels, const IntegratorConfig& cfg);

/// Per-step defect of the discrete energy identity at the given Sobolev
/// order: |u_{t+dt}|^2 - |u_t|^2 minus the Ito bracket
/// 2<drift,u>dt + sum_i |G_i(u)|^2 dt + 2 sum_i <G_i(u),u> dW^i.
/// Requires a record with the full field history; the noise realization is
/// regenerated from the record's seed. Defined for the explicit scheme.
std::vector<double> energy_residual(const TrajectoryRecord& rec, const IntegratorConfig& cfg,
                                    SobolevIndex order);

} // namespace gspde
