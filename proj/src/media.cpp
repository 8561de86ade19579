#include "fjm/media.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fjm {

void MediaConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be nonnegative");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
}

double MediaAssignment::effective_alpha() const {
    return attached_to_M.empty() ? 0.0 : static_cast<double>(count_M) / static_cast<double>(attached_to_M.size());
}

std::size_t media_count(std::size_t n, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    return static_cast<std::size_t>(std::round(alpha * static_cast<double>(n)));
}

MediaAssignment assign_media(const Graph& g, double alpha, std::uint64_t seed) {
    const std::size_t n = g.num_nodes();
    MediaAssignment a;
    a.count_M = media_count(n, alpha);
    a.attached_to_M.assign(n, false);

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < a.count_M; ++k) a.attached_to_M[order[k]] = true;
    return a;
}

SourceOpinions source_opinions_from_mean(double s_bar, double gamma) {
    SourceOpinions src;
    const double up = (1.0 + gamma) * s_bar;
    src.truncated = up > 1.0;
    src.z_M = std::min(up, 1.0);
    src.z_Mprime = (1.0 - gamma) * s_bar;
    return src;
}

SourceOpinions source_opinions(const OpinionVector& s, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
    return source_opinions_from_mean(s.mean(), gamma);
}

ZetaVector make_zeta(const MediaAssignment& a, const SourceOpinions& src) {
    ZetaVector z;
    z.values.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z.values[i] = a.attached_to_M[i] ? src.z_M : src.z_Mprime;
    return z;
}

std::vector<double> media_operator_diagonal(const Graph& g, double beta) {
    std::vector<double> diag(g.num_nodes());
    for (NodeId i = 0; i < diag.size(); ++i) diag[i] = 1.0 + beta + beta * g.degree(i);
    return diag;
}

OpinionVector equilibrium_with_media(const Graph& g, const OpinionVector& s, const MediaAssignment& assignment,
                                     double beta, const ZetaVector& zeta, EquilibriumMethod method, double tol,
                                     std::span<const double> initial_guess) {
    const std::size_t n = g.num_nodes();
    if (s.size() != n || assignment.size() != n || zeta.values.size() != n)
        throw std::invalid_argument("equilibrium_with_media: vector length does not match node count");
    if (!(beta >= 0.0)) throw std::invalid_argument("equilibrium_with_media: beta must be nonnegative");

    std::vector<double> media_w(n);
    for (NodeId i = 0; i < n; ++i) media_w[i] = beta * (1.0 + g.degree(i));

    if (method == EquilibriumMethod::DirectSolve) {
        std::vector<double> rhs(n);
        for (NodeId i = 0; i < n; ++i) rhs[i] = s[i] + media_w[i] * zeta.values[i];
        DiagPlusLaplacianOperator op(g, media_operator_diagonal(g, beta));
        return OpinionVector::from_solution(solve_spd(op, rhs, tol, 0, initial_guess).solution);
    }

    auto step = [&](std::span<const double> in, std::span<double> out) {
        for (NodeId i = 0; i < n; ++i) {
            auto nb = g.neighbors(i);
            auto w = g.neighbor_weights(i);
            double acc = s[i] + media_w[i] * zeta.values[i];
            for (std::size_t k = 0; k < nb.size(); ++k) acc += w[k] * in[nb[k]];
            out[i] = acc / (1.0 + g.degree(i) + media_w[i]);
        }
    };
    auto start = initial_guess.empty() ? s.values() : initial_guess;
    return OpinionVector::from_solution(fixed_point_iterate(step, start, tol, kMaxFixedPointIterations).solution);
}

SumBounds sum_bounds(const GraphStats& stats, double sum_s, std::size_t n, const MediaConfig& cfg) {
    cfg.validate();
    const double s_bar = n == 0 ? 0.0 : sum_s / static_cast<double>(n);
    if ((1.0 + cfg.gamma) * s_bar > 1.0)
        throw std::invalid_argument("sum_bounds: source M is truncated; use truncated_regular_sum");

    const double bias = (2.0 * cfg.alpha - 1.0) * cfg.gamma + 1.0;
    SumBounds b;
    b.lower = (1.0 + (stats.d_min + 1.0) * cfg.beta * bias) / (cfg.beta * (stats.d_max + 1.0) + 1.0) * sum_s;
    b.upper = (1.0 + (stats.d_max + 1.0) * cfg.beta * bias) / (cfg.beta * (stats.d_min + 1.0) + 1.0) * sum_s;
    if (stats.is_regular) b.exact_if_regular = regular_gain_factor(stats.d_max, cfg) * sum_s;
    return b;
}

SumBounds sum_bounds(const Graph& g, const OpinionVector& s, const MediaConfig& cfg) {
    if (s.size() != g.num_nodes()) throw std::invalid_argument("sum_bounds: opinion vector length does not match node count");
    return sum_bounds(g.stats(), s.sum(), g.num_nodes(), cfg);
}

double regular_gain_factor(double d, const MediaConfig& cfg) {
    const double reach = cfg.beta * (d + 1.0);
    return 1.0 + cfg.gamma * reach * (2.0 * cfg.alpha - 1.0) / (reach + 1.0);
}

double truncated_regular_sum(double d, std::size_t n, double sum_s, const MediaConfig& cfg) {
    const double reach = cfg.beta * (1.0 + d);
    return ((1.0 + reach * (1.0 - cfg.alpha) * (1.0 - cfg.gamma)) * sum_s +
            cfg.alpha * reach * static_cast<double>(n)) /
           (1.0 + reach);
}

double truncated_lower_bound(double sum_s, double alpha, double gamma) {
    return sum_s * (1.0 - gamma + alpha * gamma);
}

}  // namespace fjm
