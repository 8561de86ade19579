#include "fjm/fj_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fjm {

OpinionVector::OpinionVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!(values_[i] >= 0.0 && values_[i] <= 1.0))
            throw std::invalid_argument("opinion at node " + std::to_string(i) + " is outside [0, 1]");
}

OpinionVector OpinionVector::from_solution(std::vector<double> values, double slack) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        double& v = values[i];
        if (!(v >= -slack && v <= 1.0 + slack))
            throw std::runtime_error("solver returned opinion " + std::to_string(v) + " at node " +
                                     std::to_string(i) + ", outside [0, 1]");
        v = std::clamp(v, 0.0, 1.0);
    }
    return OpinionVector(std::move(values));
}

double OpinionVector::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

OpinionVector fj_step(const Graph& g, const OpinionVector& s, const OpinionVector& z) {
    const std::size_t n = g.num_nodes();
    if (s.size() != n || z.size() != n)
        throw std::invalid_argument("fj_step: opinion vector length does not match node count");

    std::vector<double> next(n);
    for (NodeId i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto w = g.neighbor_weights(i);
        double acc = s[i];
        for (std::size_t k = 0; k < nb.size(); ++k) acc += w[k] * z[nb[k]];
        next[i] = acc / (1.0 + g.degree(i));
    }
    return OpinionVector::from_solution(std::move(next));
}

OpinionVector fj_equilibrium(const Graph& g, const OpinionVector& s, EquilibriumMethod method, double tol) {
    const std::size_t n = g.num_nodes();
    if (s.size() != n) throw std::invalid_argument("fj_equilibrium: opinion vector length does not match node count");

    if (method == EquilibriumMethod::DirectSolve) {
        DiagPlusLaplacianOperator op(g, std::vector<double>(n, 1.0));
        return OpinionVector::from_solution(solve_spd(op, s.values(), tol).solution);
    }

    auto step = [&](std::span<const double> in, std::span<double> out) {
        for (NodeId i = 0; i < n; ++i) {
            auto nb = g.neighbors(i);
            auto w = g.neighbor_weights(i);
            double acc = s[i];
            for (std::size_t k = 0; k < nb.size(); ++k) acc += w[k] * in[nb[k]];
            out[i] = acc / (1.0 + g.degree(i));
        }
    };
    return OpinionVector::from_solution(
        fixed_point_iterate(step, s.values(), tol, kMaxFixedPointIterations).solution);
}

}  // namespace fjm
