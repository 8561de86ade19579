#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fjm/media.hpp"

namespace fjm {

/// Stopping rules for the multi-period protocol. A disengaged threshold is
/// never checked.
struct StopCriteria {
    /// Stop once the mean opinion reaches this value (M would truncate).
    std::optional<double> up_threshold;
    /// Stop once the mean opinion falls to this value or below.
    std::optional<double> epsilon;
    std::size_t max_periods = 10'000;
    /// Stop once one period moves no opinion by more than this (l-infinity).
    std::optional<double> fixed_point_tol = 1e-10;

    /// up = 1/(1+gamma), epsilon = 10/n.
    static StopCriteria defaults(std::size_t n, double gamma);
    void validate() const;
};

enum class StopCause { RadicalizedUp, RadicalizedDown, MaxPeriods, FixedPoint };

std::string_view to_string(StopCause c);

/// State at the end of period t (t = 0 is the initial innate opinions).
/// z_M, z_Mprime and truncated are the source opinions derived from this
/// state, i.e. the ones in force during period t + 1.
struct PeriodRecord {
    std::size_t period = 0;
    double sum_z = 0.0;
    double mean_z = 0.0;
    double z_M = 0.0;
    double z_Mprime = 0.0;
    bool truncated = false;
};

struct PeriodTrajectory {
    std::vector<PeriodRecord> records;
    StopCause stop_cause = StopCause::MaxPeriods;
    /// Filled when the graph is regular, alpha > 1/2 and the formula applies.
    std::optional<double> ell_star_predicted;
    /// First period whose end state has (1 + gamma) * mean > 1.
    std::optional<std::size_t> first_truncation_period;
    /// Opinions at the end of the last recorded period.
    OpinionVector final_opinions;
};

class PeriodSolveError : public NonConvergence {
public:
    PeriodSolveError(std::size_t period, const NonConvergence& cause)
        : NonConvergence("period " + std::to_string(period) + ": " + cause.what(), cause.iterations(),
                         cause.residual()),
          period_(period) {}
    std::size_t period() const { return period_; }

private:
    std::size_t period_;
};

/// Runs periods t = 1, 2, ...: the sources re-derive their opinions from
/// the current innate mean, the stubborn-media equilibrium is solved, and
/// the equilibrium becomes the next innate opinions. Checks the stop rules
/// after every period in the order up, down, fixed point, max periods.
/// The assignment stays fixed for the whole run.
PeriodTrajectory run_periods(const Graph& g, const OpinionVector& s0, const MediaConfig& cfg,
                             const MediaAssignment& assignment, const StopCriteria& stop,
                             double tol = 1e-12);

/// Number of periods until (1 + gamma) * mean reaches 1 on a d-regular
/// graph:
///   log(n / (sum_s0 (1+gamma))) / log(1 + gamma (d+1) beta (2 alpha - 1) / ((d+1) beta + 1)).
/// Throws std::invalid_argument for alpha <= 1/2 or out-of-domain inputs.
double ell_star(std::size_t n, double sum_s0, double d, const MediaConfig& cfg);

/// Infinite-period opinions for alpha = 1/2 on a d-regular graph:
///   (I + L / (beta (1 + d)))^{-1} zeta0.
OpinionVector alpha_half_limit(const Graph& g, double beta, const ZetaVector& zeta0,
                               double tol = kDefaultSolveTol);

}  // namespace fjm
