#include "fjm/nonstubborn.hpp"

#include <algorithm>
#include <stdexcept>

namespace fjm {

AugmentedInstance build_augmented_instance(const Graph& g, const OpinionVector& s, const MediaConfig& cfg) {
    cfg.validate();
    const std::size_t n = g.num_nodes();
    if (s.size() != n) throw std::invalid_argument("nonstubborn: opinion vector length does not match node count");

    AugmentedInstance inst;
    inst.s_M = std::min((1.0 + cfg.gamma) * s.mean(), 1.0);
    inst.media_edge_weights.resize(n);

    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    const auto source = static_cast<NodeId>(n);
    for (NodeId i = 0; i < n; ++i) {
        const double w = cfg.beta * (1.0 + g.degree(i));
        inst.media_edge_weights[i] = w;
        // beta == 0 leaves the source isolated.
        if (w > 0.0) edges.push_back({i, source, w});
    }
    inst.graph = Graph(n + 1, std::move(edges));
    return inst;
}

NonStubbornResult nonstubborn_equilibrium(const Graph& g, const OpinionVector& s, const MediaConfig& cfg,
                                          double tol) {
    if (cfg.alpha != 1.0) throw std::invalid_argument("nonstubborn: the single source requires alpha = 1");
    const auto inst = build_augmented_instance(g, s, cfg);
    const std::size_t n = g.num_nodes();

    std::vector<double> s_aug(s.values().begin(), s.values().end());
    s_aug.push_back(inst.s_M);
    DiagPlusLaplacianOperator op(inst.graph, std::vector<double>(n + 1, 1.0));
    auto z = solve_spd(op, s_aug, tol).solution;

    NonStubbornResult res;
    res.s_M = inst.s_M;
    res.z_M_star = std::clamp(z.back(), 0.0, 1.0);
    z.pop_back();
    res.node_opinions = OpinionVector::from_solution(std::move(z));
    return res;
}

double nonstubborn_sum_bound(std::size_t n, double sum_s, double gamma) {
    return (1.0 + (1.0 + gamma) / static_cast<double>(n)) * sum_s;
}

}  // namespace fjm
