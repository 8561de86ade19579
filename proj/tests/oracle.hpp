#pragma once

// Test-only reference computations. Nothing here calls into the CG or
// fixed-point paths of the library.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fjm/graph.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_laplacian(const fjm::Graph& g) {
    const auto n = g.num_nodes();
    Dense L(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) {
        L[e.u][e.v] -= e.w;
        L[e.v][e.u] -= e.w;
        L[e.u][e.u] += e.w;
        L[e.v][e.v] += e.w;
    }
    return L;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Dense A, std::vector<double> b) {
    const auto n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (A[piv][c] == 0.0) throw std::runtime_error("singular");
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] / A[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= A[i][k] * x[k];
        x[i] = acc / A[i][i];
    }
    return x;
}

/// (diag(gamma) + scale * L) x = b, densely.
inline std::vector<double> solve_diag_plus_laplacian(const fjm::Graph& g, const std::vector<double>& gamma,
                                                     const std::vector<double>& b, double scale = 1.0) {
    auto A = dense_laplacian(g);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (auto& v : A[i]) v *= scale;
        A[i][i] += gamma[i];
    }
    return solve(std::move(A), b);
}

/// Stubborn-media equilibrium built straight from the augmented system
/// with the two sources as fixed nodes.
inline std::vector<double> media_equilibrium(const fjm::Graph& g, const std::vector<double>& s,
                                             const std::vector<double>& zeta, double beta) {
    const auto n = g.num_nodes();
    auto A = dense_laplacian(g);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double wm = beta * (1.0 + g.degree(static_cast<fjm::NodeId>(i)));
        A[i][i] += 1.0 + wm;
        b[i] = s[i] + wm * zeta[i];
    }
    return solve(std::move(A), b);
}

/// Erdos-Renyi graph with random weights in [0.5, 2]; test-only.
inline fjm::Graph random_weighted_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> w(0.5, 2.0);
    std::vector<fjm::Edge> edges;
    for (fjm::NodeId i = 0; i < n; ++i)
        for (fjm::NodeId j = i + 1; j < n; ++j)
            if (coin(rng)) edges.push_back({i, j, w(rng)});
    return fjm::Graph(n, std::move(edges));
}

inline std::vector<double> random_opinions(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline fjm::Graph path3() { return fjm::Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

inline fjm::Graph complete(std::size_t n) {
    std::vector<fjm::Edge> edges;
    for (fjm::NodeId i = 0; i < n; ++i)
        for (fjm::NodeId j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    return fjm::Graph(n, std::move(edges));
}

}  // namespace oracle
