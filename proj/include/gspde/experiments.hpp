#pragma once

#include "gspde/initial_fields.hpp"
#include "gspde/integrator.hpp"
#include "gspde/monitors.hpp"

#include <map>
#include <string>
#include <vector>

namespace gspde {

/// PASS/FAIL thresholds; artifact conventions, all config-overridable and
/// echoed into every report.
struct GateSettings {
    double cauchy_decay_ratio = 0.9;
    double cauchy_floor = 1e-8;
    double uniform_bound_ratio = 1.5;
    double equicontinuity_ratio = 0.75;
    double equicontinuity_final_ratio = 0.1;
    double divergence_fraction_max = 0.1;
};

struct ExperimentConfig {
    IntegratorConfig base; ///< base.seed is the master seed
    InitialFieldSpec initial;
    std::vector<int> levels;
    int n_paths = 32;
    double M = 2.0;
    double t = 1.0; ///< hitting-time cap
    int base_rung = 2;
    std::vector<int> ladder_rungs = {2, 3, 4};
    double theta = 0.0;
    std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> m_sweep = {1.1, 1.5, 2.0, 4.0};
    double R = 1.3;
    std::string output_dir = "out";
    GateSettings gates;

    void validate() const; ///< throws ConfigError with the violated key path
};

struct ReportCell {
    std::vector<std::pair<std::string, double>> labels;
    double mean = 0.0;
    double std_error = 0.0;
    long count = 0;
};

struct ExperimentReport {
    std::string kind;
    bool pass = false;
    std::vector<std::string> notes;
    std::vector<ReportCell> cells;
    std::map<std::string, std::vector<double>> series;
    std::map<std::string, double> scalars;
    std::map<std::string, double> gates;

    // provenance
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> path_seeds;
    double dt = 0.0;
    std::vector<int> levels;
    int n_paths = 0;
    int diverged_paths = 0;
};

/// Per-path coupled runs with deterministic per-path seeds split from the
/// master; paths execute concurrently, results land in path-indexed slots.
struct CoupledBatch {
    std::vector<CoupledRunResult> paths;
    std::vector<std::uint64_t> seeds;
    std::vector<bool> diverged; ///< any level of the path went non-finite
};

/// Shared initial condition for every path (and every level, via projection).
FourierField build_shared_initial(const ExperimentConfig& cfg, int cutoff);

CoupledBatch run_batch(const ExperimentConfig& cfg);

// Analysis stages, separated from integration so one batch can feed several
// gates. The run_* entry points below compose them.
ExperimentReport analyze_uniform_bound(const ExperimentConfig& cfg, const CoupledBatch& batch);
ExperimentReport analyze_cauchy(const ExperimentConfig& cfg, const CoupledBatch& batch);
ExperimentReport analyze_equicontinuity(const ExperimentConfig& cfg, const CoupledBatch& batch,
                                        double theta, const std::vector<double>& deltas);
ExperimentReport analyze_tau_infinity(const ExperimentConfig& cfg, const CoupledBatch& batch,
                                      double R);

/// E|Psi^n|^2_{HV, tau^{M,t}_n} per level; PASS when the level spread stays
/// within the uniform-bound gate.
ExperimentReport run_uniform_bound(const ExperimentConfig& cfg);

/// sup_{n>=m} E|Psi^n - Psi^m|^2_{UH, tau_m ^ tau_n} per m; PASS when the
/// sequence decays by the gate ratio (or sits below the absolute floor).
ExperimentReport run_cauchy(const ExperimentConfig& cfg);

/// Mean UH increment over [theta, theta+delta] per (level, delta); PASS when
/// the sup over levels contracts at each delta halving.
ExperimentReport run_equicontinuity(const ExperimentConfig& cfg, double theta,
                                    const std::vector<double>& deltas);

/// Sup-in-time and integral norms per ladder rung up to the rung-2 hitting
/// time; PASS when no path shows a ladder violation.
ExperimentReport run_regularity_ladder(const ExperimentConfig& cfg);

/// Frequency of tau^{R,t}(finest) <= min_n tau^{M,t}_n over an M sweep;
/// PASS when nondecreasing in M and exactly 1 at the top.
ExperimentReport estimate_tau_infinity(const ExperimentConfig& cfg, double R);

/// One trajectory at base.galerkin_cutoff; summary report only (the CLI
/// persists the norm series and snapshots).
ExperimentReport run_single(const ExperimentConfig& cfg, TrajectoryRecord* out_record = nullptr);

struct Stat {
    double mean = 0.0;
    double std_error = 0.0;
    long count = 0;
};

Stat compute_stat(const std::vector<double>& values);

} // namespace gspde
