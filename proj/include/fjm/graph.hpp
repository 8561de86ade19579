#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjm {

using NodeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
    double w;
};

struct GraphStats {
    double d_min = 0.0;
    double d_max = 0.0;
    bool is_regular = true;
    double total_edge_weight = 0.0;
};

/// Weighted undirected simple graph with CSR adjacency and precomputed
/// weighted degrees. Immutable after construction.
///
/// Construction rejects self-loops, duplicate pairs (in either orientation),
/// out-of-range endpoints and non-positive or non-finite weights.
class Graph {
public:
    Graph() = default;
    Graph(std::size_t n, std::vector<Edge> edges);

    std::size_t num_nodes() const { return degree_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    /// Edges in insertion order, each unordered pair once.
    std::span<const Edge> edges() const { return edges_; }

    double degree(NodeId i) const { return degree_[i]; }
    std::span<const double> degrees() const { return degree_; }

    std::span<const NodeId> neighbors(NodeId i) const {
        return {adj_.data() + offset_[i], adj_.data() + offset_[i + 1]};
    }
    std::span<const double> neighbor_weights(NodeId i) const {
        return {adj_w_.data() + offset_[i], adj_w_.data() + offset_[i + 1]};
    }

    /// Weight of {u, v}, or 0 if the pair is not an edge.
    double weight(NodeId u, NodeId v) const;

    GraphStats stats() const;

private:
    std::vector<Edge> edges_;
    std::vector<double> degree_;
    std::vector<std::size_t> offset_;
    std::vector<NodeId> adj_;
    std::vector<double> adj_w_;
};

class EdgeListError : public std::runtime_error {
public:
    EdgeListError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parses "u v" / "u v w" lines; '#' starts a comment line. Node ids are
/// remapped to 0..n-1 in order of first appearance. Accepts LF and CRLF.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

/// Writes one "u v w" line per edge after the given '#' header lines.
void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::string> header);

/// Preferential attachment: K_m seed, then each new node draws m distinct
/// targets with probability proportional to current degree.
Graph gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Random simple d-regular graph by stub pairing that only accepts pairs
/// forming new simple edges, restarting when the leftover stubs cannot be
/// completed.
Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

/// y = (D - W) x, edge-wise.
std::vector<double> laplacian_apply(const Graph& g, std::span<const double> x);
void laplacian_apply(const Graph& g, std::span<const double> x, std::span<double> y);

}  // namespace fjm
