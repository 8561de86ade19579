#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fjm/fj_core.hpp"
#include "fjm/graph.hpp"

namespace fjm {

/// alpha: fraction of nodes attached to the up-biasing source M.
/// beta: media edge weight factor; node i links to its source with
///       weight beta * (1 + d_i).
/// gamma: bias; M expresses min{(1+gamma) s_bar, 1}, M' expresses
///        (1-gamma) s_bar.
struct MediaConfig {
    double alpha = 0.5;
    double beta = 0.0;
    double gamma = 0.1;

    /// Throws std::invalid_argument unless 0<=alpha<=1, beta>=0, 0<gamma<1.
    void validate() const;
};

struct MediaAssignment {
    std::vector<bool> attached_to_M;
    std::size_t count_M = 0;

    std::size_t size() const { return attached_to_M.size(); }
    /// Realized fraction count_M / n.
    double effective_alpha() const;
};

/// round(alpha * n) with ties away from zero.
std::size_t media_count(std::size_t n, double alpha);

/// Picks media_count(n, alpha) nodes uniformly without replacement.
MediaAssignment assign_media(const Graph& g, double alpha, std::uint64_t seed);

struct SourceOpinions {
    double z_M = 0.0;
    double z_Mprime = 0.0;
    /// (1 + gamma) * s_bar > 1; equality counts as not truncated.
    bool truncated = false;
};

SourceOpinions source_opinions(const OpinionVector& s, double gamma);
SourceOpinions source_opinions_from_mean(double s_bar, double gamma);

/// Per-node opinion of the attached source.
struct ZetaVector {
    std::vector<double> values;
};

ZetaVector make_zeta(const MediaAssignment& a, const SourceOpinions& src);

/// Equilibrium with stubborn sources:
///   ((1+beta) I + beta D + L)^{-1} (s + beta (I + D) zeta).
/// Iterate follows z <- (I + D~)^{-1}(W z + s + (D~ - D) zeta) with
/// D~_ii = d_i + beta (1 + d_i), starting from z = s.
OpinionVector equilibrium_with_media(const Graph& g, const OpinionVector& s, const MediaAssignment& assignment,
                                     double beta, const ZetaVector& zeta,
                                     EquilibriumMethod method = EquilibriumMethod::DirectSolve,
                                     double tol = kDefaultSolveTol,
                                     std::span<const double> initial_guess = {});

/// The diagonal 1 + beta + beta * d_i of the stubborn-media operator.
std::vector<double> media_operator_diagonal(const Graph& g, double beta);

struct SumBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> exact_if_regular;
};

/// Degree-based bounds on the equilibrium opinion sum for the
/// non-truncated regime, plus the exact value on regular graphs. Throws
/// std::invalid_argument when (1 + gamma) s_bar > 1.
SumBounds sum_bounds(const Graph& g, const OpinionVector& s, const MediaConfig& cfg);
SumBounds sum_bounds(const GraphStats& stats, double sum_s, std::size_t n, const MediaConfig& cfg);

/// Multiplicative gain of the opinion sum on a d-regular graph when M is
/// not truncated: 1 + gamma beta (d+1)(2 alpha - 1) / (beta (d+1) + 1).
double regular_gain_factor(double d, const MediaConfig& cfg);

/// Exact equilibrium sum on a d-regular graph with z_M capped at 1.
double truncated_regular_sum(double d, std::size_t n, double sum_s, const MediaConfig& cfg);

/// sum_s (1 - gamma + alpha gamma); strictly below truncated_regular_sum
/// whenever sum_s < n.
double truncated_lower_bound(double sum_s, double alpha, double gamma);

}  // namespace fjm
