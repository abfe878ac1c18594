#pragma once

#include "gspde/integrator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gspde {

/// Space triple selector: U = W^{j-1,2}, H = W^{j,2}, V = W^{j+1,2}.
/// j = 2 is the base Navier-Stokes rung.
struct LadderSpec {
    int j = 2;
};

enum class QuadratureRule {
    left_endpoint, ///< matches the non-anticipating convention of the stepper
    trapezoid      ///< sensitivity-check alternative
};

/// sup_{r<=s} |Psi_r|^2_{j-1} + int_0^s |Psi_r|^2_j dr evaluated on the
/// record's norm series; the partial last rectangle is clipped at s, so the
/// value is continuous and nondecreasing in s.
double uh_norm_sq(const TrajectoryRecord& rec, LadderSpec ladder, double s,
                  QuadratureRule quad = QuadratureRule::left_endpoint);

/// Same construction one rung up: sup of order j plus integral of order j+1.
double hv_norm_sq(const TrajectoryRecord& rec, LadderSpec ladder, double s,
                  QuadratureRule quad = QuadratureRule::left_endpoint);

/// Variants for the difference series of a coupled run.
double uh_norm_sq(const PairDifferenceSeries& diff, double dt, LadderSpec ladder, double s,
                  QuadratureRule quad = QuadratureRule::left_endpoint);

struct HittingTimeResult {
    double tau = 0.0;
    bool crossed = false;
    double threshold = 0.0; ///< M + |Psi_0|^2_U
    std::optional<std::size_t> crossing_step;
    double uh_at_tau = 0.0;
};

/// First time the running UH norm reaches M + |Psi_0|^2_U, capped at t.
/// Crossing detection scans the discrete step series; tau linearly
/// interpolates between the bracketing steps (bias +-dt reported upstream).
HittingTimeResult hitting_time(const TrajectoryRecord& rec, LadderSpec ladder, double M, double t);

/// Same scan against an absolute threshold R (no initial-norm offset); used
/// for the tau^{R,t} proxy on the finest level.
HittingTimeResult hitting_time_absolute(const TrajectoryRecord& rec, LadderSpec ladder, double R,
                                        double t);

struct RungReport {
    int j = 0;
    double max_uh = 0.0;
    bool finite = true;
    std::optional<double> first_divergence_time;
};

struct BlowupReport {
    std::vector<RungReport> rungs;
    /// "regular", "numerical divergence" or "ladder violation". The report
    /// never claims more than numerical divergence: finite-precision overflow
    /// is a proxy, not a proof of blow-up.
    std::string verdict;
    bool ladder_consistent = true;
};

/// Per-rung finiteness of the UH quantity up to each record's stopping point.
/// A rung may diverge only if every higher rung diverges no later; the
/// contrapositive failure is reported as a ladder violation (a discretization
/// artifact), never silently passed.
BlowupReport blowup_scan(const std::vector<const TrajectoryRecord*>& records,
                         const std::vector<LadderSpec>& rungs);

/// Convenience overload: one record analyzed at several rungs.
BlowupReport blowup_scan(const TrajectoryRecord& rec, const std::vector<LadderSpec>& rungs);

/// Monte-Carlo mean over records of
///   uh((theta+delta) ^ tau^{M,t}) - uh(theta ^ tau^{M,t})
/// per delta; tau is each record's own hitting time. Exactly zero at delta=0.
std::vector<double> equicontinuity_stat(const std::vector<const TrajectoryRecord*>& records,
                                        LadderSpec ladder, double M, double t, double theta,
                                        const std::vector<double>& deltas);

/// Per-record increments behind equicontinuity_stat, exposed so callers can
/// attach standard errors to the means.
std::vector<std::vector<double>> equicontinuity_samples(
    const std::vector<const TrajectoryRecord*>& records, LadderSpec ladder, double M, double t,
    double theta, const std::vector<double>& deltas);

} // namespace gspde
