#include "fjm/periods.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fjm {

StopCriteria StopCriteria::defaults(std::size_t n, double gamma) {
    StopCriteria s;
    s.up_threshold = 1.0 / (1.0 + gamma);
    s.epsilon = 10.0 / static_cast<double>(n);
    return s;
}

void StopCriteria::validate() const {
    if (up_threshold && !(*up_threshold > 0.0 && *up_threshold <= 1.0))
        throw std::invalid_argument("stop criteria: up threshold must lie in (0, 1]");
    if (epsilon && !(*epsilon > 0.0))
        throw std::invalid_argument("stop criteria: epsilon must be positive");
    if (up_threshold && epsilon && !(*epsilon < *up_threshold))
        throw std::invalid_argument("stop criteria: epsilon must be below the up threshold");
    if (fixed_point_tol && !(*fixed_point_tol >= 0.0)) throw std::invalid_argument("stop criteria: fixed point tolerance must be >= 0");
}

std::string_view to_string(StopCause c) {
    switch (c) {
        case StopCause::RadicalizedUp: return "radicalized_up";
        case StopCause::RadicalizedDown: return "radicalized_down";
        case StopCause::MaxPeriods: return "max_periods";
        case StopCause::FixedPoint: return "fixed_point";
    }
    return "unknown";
}

PeriodTrajectory run_periods(const Graph& g, const OpinionVector& s0, const MediaConfig& cfg,
                             const MediaAssignment& assignment, const StopCriteria& stop, double tol) {
    cfg.validate();
    stop.validate();
    const std::size_t n = g.num_nodes();
    if (s0.size() != n || assignment.size() != n)
        throw std::invalid_argument("run_periods: vector length does not match node count");

    PeriodTrajectory traj;
    auto record = [&](std::size_t t, const OpinionVector& z) {
        PeriodRecord r;
        r.period = t;
        r.sum_z = z.sum();
        r.mean_z = n == 0 ? 0.0 : r.sum_z / static_cast<double>(n);
        auto src = source_opinions_from_mean(r.mean_z, cfg.gamma);
        r.z_M = src.z_M;
        r.z_Mprime = src.z_Mprime;
        r.truncated = src.truncated;
        if (r.truncated && !traj.first_truncation_period) traj.first_truncation_period = t;
        traj.records.push_back(r);
        return r;
    };

    const auto stats = g.stats();
    MediaConfig realized = cfg;
    realized.alpha = assignment.effective_alpha();
    const double sum0 = s0.sum();
    if (n > 0 && stats.is_regular && realized.alpha > 0.5 && cfg.beta > 0.0 && sum0 > 0.0 &&
        (1.0 + cfg.gamma) * sum0 <= static_cast<double>(n))
        traj.ell_star_predicted = ell_star(n, sum0, stats.d_max, realized);

    record(0, s0);
    OpinionVector current = s0;
    traj.stop_cause = StopCause::MaxPeriods;

    for (std::size_t t = 1; t <= stop.max_periods; ++t) {
        const auto zeta = make_zeta(assignment, source_opinions(current, cfg.gamma));
        OpinionVector next;
        try {
            next = equilibrium_with_media(g, current, assignment, cfg.beta, zeta, EquilibriumMethod::DirectSolve,
                                          tol, current.values());
        } catch (const NonConvergence& e) {
            throw PeriodSolveError(t, e);
        }

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - current[i]));
        current = std::move(next);
        const auto r = record(t, current);

        if (stop.up_threshold && r.mean_z >= *stop.up_threshold) {
            traj.stop_cause = StopCause::RadicalizedUp;
            break;
        }
        if (stop.epsilon && r.mean_z <= *stop.epsilon) {
            traj.stop_cause = StopCause::RadicalizedDown;
            break;
        }
        if (stop.fixed_point_tol && change <= *stop.fixed_point_tol) {
            traj.stop_cause = StopCause::FixedPoint;
            break;
        }
    }
    traj.final_opinions = std::move(current);
    return traj;
}

double ell_star(std::size_t n, double sum_s0, double d, const MediaConfig& cfg) {
    cfg.validate();
    if (!(cfg.alpha > 0.5)) throw std::invalid_argument("ell_star: requires alpha > 1/2");
    if (!(cfg.beta > 0.0)) throw std::invalid_argument("ell_star: requires beta > 0");
    if (!(sum_s0 > 0.0)) throw std::invalid_argument("ell_star: requires a positive opinion sum");
    const double nn = static_cast<double>(n);
    if ((1.0 + cfg.gamma) * sum_s0 > nn) throw std::invalid_argument("ell_star: source M already truncated");

    const double reach = (d + 1.0) * cfg.beta;
    return std::log(nn / (sum_s0 * (1.0 + cfg.gamma))) /
           std::log1p(cfg.gamma * reach * (2.0 * cfg.alpha - 1.0) / (reach + 1.0));
}

OpinionVector alpha_half_limit(const Graph& g, double beta, const ZetaVector& zeta0, double tol) {
    const std::size_t n = g.num_nodes();
    if (zeta0.values.size() != n) throw std::invalid_argument("alpha_half_limit: zeta length does not match node count");
    if (!(beta > 0.0)) throw std::invalid_argument("alpha_half_limit: beta must be positive");
    const auto stats = g.stats();
    if (!stats.is_regular) throw std::invalid_argument("alpha_half_limit: graph is not regular");

    DiagPlusLaplacianOperator op(g, std::vector<double>(n, 1.0), 1.0 / (beta * (1.0 + stats.d_max)));
    return OpinionVector::from_solution(solve_spd(op, zeta0.values, tol).solution);
}

}  // namespace fjm
