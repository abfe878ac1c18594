#include "gspde/monitors.hpp"

#include <algorithm>
#include <cmath>

namespace gspde {

namespace {

void check_ladder(const LadderSpec& ladder, int m_max, int extra) {
    if (ladder.j < 1) throw ConfigError("ladder.j: expected >= 1");
    if (ladder.j + extra > m_max)
        throw ConfigError("ladder.j: record stores orders up to " + std::to_string(m_max) +
                          ", need order " + std::to_string(ladder.j + extra));
}

/// sup + clipped integral over a generic norm-row accessor.
template <typename NormAt>
double sup_integral(NormAt&& norm_at, std::size_t n_rows, double dt, int sup_order,
                    int int_order, double s, QuadratureRule quad) {
    if (n_rows == 0) throw ConfigError("norm series is empty");
    const double horizon = static_cast<double>(n_rows - 1) * dt;
    if (s > horizon * (1.0 + 1e-12) + 1e-15)
        throw ConfigError("evaluation time s = " + std::to_string(s) +
                          " beyond record horizon " + std::to_string(horizon));
    s = std::min(s, horizon);
    const std::size_t full = std::min(n_rows - 1, static_cast<std::size_t>(s / dt));
    double sup = 0.0;
    double integral = 0.0;
    for (std::size_t i = 0; i <= full; ++i) {
        sup = std::max(sup, norm_at(i, sup_order));
        if (i < full) {
            if (quad == QuadratureRule::left_endpoint)
                integral += norm_at(i, int_order) * dt;
            else
                integral += 0.5 * (norm_at(i, int_order) + norm_at(i + 1, int_order)) * dt;
        }
    }
    const double partial = s - static_cast<double>(full) * dt;
    if (partial > 0.0 && full + 1 < n_rows) {
        if (quad == QuadratureRule::left_endpoint)
            integral += norm_at(full, int_order) * partial;
        else {
            const double frac = partial / dt;
            const double right = norm_at(full, int_order) * (1.0 - frac) +
                                 norm_at(full + 1, int_order) * frac;
            integral += 0.5 * (norm_at(full, int_order) + right) * partial;
        }
    }
    return sup + integral;
}

} // namespace

double uh_norm_sq(const TrajectoryRecord& rec, LadderSpec ladder, double s, QuadratureRule quad) {
    check_ladder(ladder, rec.m_max, 0);
    return sup_integral([&](std::size_t i, int m) { return rec.norm_sq(i, m); }, rec.steps(),
                        rec.dt, ladder.j - 1, ladder.j, s, quad);
}

double hv_norm_sq(const TrajectoryRecord& rec, LadderSpec ladder, double s, QuadratureRule quad) {
    check_ladder(ladder, rec.m_max, 1);
    return sup_integral([&](std::size_t i, int m) { return rec.norm_sq(i, m); }, rec.steps(),
                        rec.dt, ladder.j, ladder.j + 1, s, quad);
}

double uh_norm_sq(const PairDifferenceSeries& diff, double dt, LadderSpec ladder, double s,
                  QuadratureRule quad) {
    check_ladder(ladder, diff.m_max, 0);
    return sup_integral([&](std::size_t i, int m) { return diff.norm_sq(i, m); },
                        diff.valid_steps, dt, ladder.j - 1, ladder.j, s, quad);
}

namespace {

HittingTimeResult hitting_scan(const TrajectoryRecord& rec, LadderSpec ladder, double threshold,
                               double t) {
    check_ladder(ladder, rec.m_max, 0);
    const double horizon = static_cast<double>(rec.steps() - 1) * rec.dt;
    if (t > horizon * (1.0 + 1e-12) + 1e-15)
        throw ConfigError("hitting_time: t = " + std::to_string(t) + " beyond record horizon " +
                          std::to_string(horizon));
    t = std::min(t, horizon);

    HittingTimeResult res;
    res.threshold = threshold;
    const std::size_t last =
        std::min(rec.steps() - 1, static_cast<std::size_t>(t / rec.dt + 1e-12));

    double sup = 0.0, integral = 0.0, prev_uh = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        sup = std::max(sup, rec.norm_sq(i, ladder.j - 1));
        const double uh = sup + integral;
        if (uh >= threshold) {
            res.crossed = true;
            res.crossing_step = i;
            res.uh_at_tau = uh;
            if (i == 0) {
                res.tau = 0.0;
            } else {
                const double t_prev = static_cast<double>(i - 1) * rec.dt;
                const double denom = uh - prev_uh;
                const double frac = denom > 0.0 ? (threshold - prev_uh) / denom : 1.0;
                res.tau = t_prev + rec.dt * std::clamp(frac, 0.0, 1.0);
            }
            return res;
        }
        prev_uh = uh;
        integral += rec.norm_sq(i, ladder.j) * rec.dt; // left endpoint
    }
    res.tau = t;
    res.uh_at_tau = uh_norm_sq(rec, ladder, t);
    return res;
}

} // namespace

HittingTimeResult hitting_time(const TrajectoryRecord& rec, LadderSpec ladder, double M,
                               double t) {
    if (!(M > 1.0)) throw ConfigError("hitting_time: expected M > 1, found " + std::to_string(M));
    return hitting_scan(rec, ladder, M + rec.norm_sq(0, ladder.j - 1), t);
}

HittingTimeResult hitting_time_absolute(const TrajectoryRecord& rec, LadderSpec ladder, double R,
                                        double t) {
    if (!(R > 0.0)) throw ConfigError("hitting_time_absolute: expected R > 0");
    return hitting_scan(rec, ladder, R, t);
}

BlowupReport blowup_scan(const std::vector<const TrajectoryRecord*>& records,
                         const std::vector<LadderSpec>& rungs) {
    if (records.size() != rungs.size())
        throw ConfigError("blowup_scan: records and rungs must align");
    if (records.empty()) throw ConfigError("blowup_scan: empty input");
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i]->seed != records[0]->seed || records[i]->dt != records[0]->dt ||
            records[i]->steps() != records[0]->steps())
            throw ConfigError("blowup_scan: records disagree on seed, dt or horizon");
        if (rungs[i].j <= rungs[i - 1].j)
            throw ConfigError("blowup_scan: rungs must be strictly increasing");
    }

    BlowupReport rep;
    for (std::size_t r = 0; r < rungs.size(); ++r) {
        const TrajectoryRecord& rec = *records[r];
        const LadderSpec lad = rungs[r];
        check_ladder(lad, rec.m_max, 0);
        RungReport rr;
        rr.j = lad.j;
        double sup = 0.0, integral = 0.0;
        const std::size_t stop = rec.diverged() ? *rec.diverged_step : rec.steps() - 1;
        for (std::size_t i = 0; i <= stop && i < rec.steps(); ++i) {
            const double u = rec.norm_sq(i, lad.j - 1);
            const double h = rec.norm_sq(i, lad.j);
            if (!std::isfinite(u) || !std::isfinite(h)) {
                rr.finite = false;
                rr.first_divergence_time = static_cast<double>(i) * rec.dt;
                break;
            }
            sup = std::max(sup, u);
            rr.max_uh = std::max(rr.max_uh, sup + integral);
            integral += h * rec.dt;
        }
        if (rec.diverged() && rr.finite) {
            // coefficients went non-finite even if these orders still read finite
            rr.finite = false;
            rr.first_divergence_time = static_cast<double>(*rec.diverged_step) * rec.dt;
        }
        rep.rungs.push_back(rr);
    }

    // Ladder implication, desk-scale form: regularity propagates upward and
    // genuine overflow takes every rung down together, so any partial
    // divergence pattern is a discretization artifact. A finite rung above a
    // divergent one breaks "divergent only if every higher rung is", and a
    // divergent rung above a finite one breaks the upward propagation of
    // boundedness.
    const bool any_divergent = std::any_of(rep.rungs.begin(), rep.rungs.end(),
                                           [](const RungReport& r) { return !r.finite; });
    const bool all_divergent = std::all_of(rep.rungs.begin(), rep.rungs.end(),
                                           [](const RungReport& r) { return !r.finite; });
    rep.ladder_consistent = !any_divergent || all_divergent;
    if (!rep.ladder_consistent)
        rep.verdict = "ladder violation";
    else if (any_divergent)
        rep.verdict = "numerical divergence";
    else
        rep.verdict = "regular";
    return rep;
}

BlowupReport blowup_scan(const TrajectoryRecord& rec, const std::vector<LadderSpec>& rungs) {
    std::vector<const TrajectoryRecord*> records(rungs.size(), &rec);
    return blowup_scan(records, rungs);
}

std::vector<std::vector<double>> equicontinuity_samples(
    const std::vector<const TrajectoryRecord*>& records, LadderSpec ladder, double M, double t,
    double theta, const std::vector<double>& deltas) {
    if (records.empty()) throw ConfigError("equicontinuity: empty record list");
    double max_delta = 0.0;
    for (double d : deltas) max_delta = std::max(max_delta, d);
    if (theta + max_delta > t * (1.0 + 1e-12))
        throw ConfigError("equicontinuity: theta + max(delta) must not exceed t");

    std::vector<std::vector<double>> samples(deltas.size());
    for (auto& s : samples) s.reserve(records.size());
    for (const TrajectoryRecord* rec : records) {
        const double tau = hitting_time(*rec, ladder, M, t).tau;
        const double base = uh_norm_sq(*rec, ladder, std::min(theta, tau));
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            if (deltas[d] == 0.0) {
                samples[d].push_back(0.0);
                continue;
            }
            const double upper = uh_norm_sq(*rec, ladder, std::min(theta + deltas[d], tau));
            samples[d].push_back(upper - base);
        }
    }
    return samples;
}

std::vector<double> equicontinuity_stat(const std::vector<const TrajectoryRecord*>& records,
                                        LadderSpec ladder, double M, double t, double theta,
                                        const std::vector<double>& deltas) {
    const auto samples = equicontinuity_samples(records, ladder, M, t, theta, deltas);
    std::vector<double> means(deltas.size(), 0.0);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        for (double v : samples[d]) means[d] += v;
        means[d] /= static_cast<double>(samples[d].size());
    }
    return means;
}

} // namespace gspde
