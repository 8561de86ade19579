#pragma once

#include <vector>

#include "fjm/fj_core.hpp"
#include "fjm/graph.hpp"
#include "fjm/media.hpp"

namespace fjm {

/// A single media source that takes part in the FJ dynamics as node n,
/// linked to every node i with weight beta * (1 + d_i). Its innate
/// opinion is min{(1 + gamma) s_bar, 1}.
struct AugmentedInstance {
    Graph graph;  // n + 1 nodes; the source is the last one
    std::vector<double> media_edge_weights;
    double s_M = 0.0;
};

AugmentedInstance build_augmented_instance(const Graph& g, const OpinionVector& s, const MediaConfig& cfg);

struct NonStubbornResult {
    OpinionVector node_opinions;
    double z_M_star = 0.0;
    double s_M = 0.0;
};

/// Equilibrium of the (n+1)-node FJ instance, split into network opinions
/// and the source's own expressed opinion. Requires alpha == 1.
NonStubbornResult nonstubborn_equilibrium(const Graph& g, const OpinionVector& s, const MediaConfig& cfg,
                                          double tol = kDefaultSolveTol);

/// Upper bound (1 + (1 + gamma) / n) * sum_s on the network opinion sum.
double nonstubborn_sum_bound(std::size_t n, double sum_s, double gamma);

}  // namespace fjm
