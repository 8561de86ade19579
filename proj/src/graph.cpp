#include "fjm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace fjm {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges) : edges_(std::move(edges)), degree_(n, 0.0) {
    if (n > std::numeric_limits<NodeId>::max())
        throw std::invalid_argument("graph: too many nodes");

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    std::vector<std::size_t> count(n, 0);
    for (const auto& e : edges_) {
        if (e.u >= n || e.v >= n)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (e.u == e.v)
            throw std::invalid_argument("graph: self-loop at node " + std::to_string(e.u));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw std::invalid_argument("graph: edge weight must be positive and finite");
        if (!seen.insert(pair_key(e.u, e.v)).second)
            throw std::invalid_argument("graph: duplicate edge {" + std::to_string(e.u) + ", " +
                                        std::to_string(e.v) + "}");
        ++count[e.u];
        ++count[e.v];
    }

    offset_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + count[i];
    adj_.resize(offset_[n]);
    adj_w_.resize(offset_[n]);
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    for (const auto& e : edges_) {
        adj_[fill[e.u]] = e.v;
        adj_w_[fill[e.u]++] = e.w;
        adj_[fill[e.v]] = e.u;
        adj_w_[fill[e.v]++] = e.w;
        degree_[e.u] += e.w;
        degree_[e.v] += e.w;
    }
}

double Graph::weight(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    auto w = neighbor_weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
        if (nb[k] == v) return w[k];
    return 0.0;
}

GraphStats Graph::stats() const {
    GraphStats s;
    if (degree_.empty()) return s;
    auto [lo, hi] = std::minmax_element(degree_.begin(), degree_.end());
    s.d_min = *lo;
    s.d_max = *hi;
    s.is_regular = (s.d_max - s.d_min) <= 1e-12;
    for (const auto& e : edges_) s.total_edge_weight += e.w;
    return s;
}

Graph load_edge_list(std::istream& in) {
    std::unordered_map<std::uint64_t, NodeId> remap;
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;

    auto node_of = [&](std::uint64_t raw) {
        auto [it, inserted] = remap.try_emplace(raw, static_cast<NodeId>(remap.size()));
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::vector<std::string_view> tok;
        std::string_view rest = line;
        while (true) {
            auto b = rest.find_first_not_of(" \t");
            if (b == std::string_view::npos) break;
            rest.remove_prefix(b);
            auto e = rest.find_first_of(" \t");
            tok.push_back(rest.substr(0, e));
            if (e == std::string_view::npos) break;
            rest.remove_prefix(e);
        }
        if (tok.empty() || tok[0].front() == '#') continue;
        if (tok.size() < 2 || tok.size() > 3)
            throw EdgeListError(lineno, "expected 'u v' or 'u v w'");

        std::uint64_t ids[2];
        for (int k = 0; k < 2; ++k) {
            auto t = tok[k];
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), ids[k]);
            if (ec != std::errc() || p != t.data() + t.size())
                throw EdgeListError(lineno, "unparsable node id '" + std::string(t) + "'");
        }
        double w = 1.0;
        if (tok.size() == 3) {
            auto t = tok[2];
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), w);
            if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(w))
                throw EdgeListError(lineno, "unparsable weight '" + std::string(t) + "'");
            if (!(w > 0.0)) throw EdgeListError(lineno, "non-positive weight");
        }
        if (ids[0] == ids[1]) throw EdgeListError(lineno, "self-loop");

        NodeId u = node_of(ids[0]);
        NodeId v = node_of(ids[1]);
        if (!seen.insert(pair_key(u, v)).second) throw EdgeListError(lineno, "duplicate edge");
        edges.push_back({u, v, w});
    }
    return Graph(remap.size(), std::move(edges));
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::string> header) {
    for (const auto& h : header) out << "# " << h << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_weight(e.w) << '\n';
}

Graph gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m >= n) throw std::invalid_argument("barabasi_albert: require 1 <= m < n");

    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    edges.reserve(m * (m - 1) / 2 + (n - m) * m);
    // Every edge endpoint appears once here, so a uniform draw is degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());

    for (NodeId i = 0; i < m; ++i)
        for (NodeId j = i + 1; j < m; ++j) {
            edges.push_back({i, j, 1.0});
            endpoints.push_back(i);
            endpoints.push_back(j);
        }

    std::vector<NodeId> targets;
    std::vector<char> taken(n, 0);
    for (auto v = static_cast<NodeId>(m); v < n; ++v) {
        targets.clear();
        if (endpoints.empty()) {
            // m == 1 and the seed is a single isolated node.
            targets.push_back(0);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            while (targets.size() < m) {
                NodeId t = endpoints[pick(rng)];
                if (!taken[t]) {
                    taken[t] = 1;
                    targets.push_back(t);
                }
            }
        }
        for (NodeId t : targets) {
            taken[t] = 0;
            edges.push_back({t, v, 1.0});
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Graph(n, std::move(edges));
}

namespace {

std::optional<std::vector<Edge>> try_regular(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    std::unordered_set<std::uint64_t> present;
    present.reserve(n * d);
    std::vector<Edge> edges;
    edges.reserve(n * d / 2);

    std::vector<NodeId> stubs;
    stubs.reserve(n * d);
    for (std::size_t k = 0; k < d; ++k)
        for (NodeId i = 0; i < n; ++i) stubs.push_back(i);

    while (!stubs.empty()) {
        std::map<NodeId, std::size_t> leftover;
        std::shuffle(stubs.begin(), stubs.end(), rng);
        for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
            NodeId a = stubs[k], b = stubs[k + 1];
            if (a > b) std::swap(a, b);
            if (a != b && present.insert(pair_key(a, b)).second) {
                edges.push_back({a, b, 1.0});
            } else {
                ++leftover[a];
                ++leftover[b];
            }
        }
        if (leftover.empty()) break;

        bool suitable = false;
        for (auto i = leftover.begin(); i != leftover.end() && !suitable; ++i)
            for (auto j = std::next(i); j != leftover.end(); ++j)
                if (!present.count(pair_key(i->first, j->first))) {
                    suitable = true;
                    break;
                }
        if (!suitable) return std::nullopt;

        stubs.clear();
        for (auto [node, c] : leftover) stubs.insert(stubs.end(), c, node);
    }
    return edges;
}

}  // namespace

Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d >= n) throw std::invalid_argument("random_regular: require d < n");
    if ((n * d) % 2 != 0) throw std::invalid_argument("random_regular: n*d must be even");

    std::mt19937_64 rng(seed);
    while (true) {
        if (auto edges = try_regular(n, d, rng)) return Graph(n, std::move(*edges));
    }
}

void laplacian_apply(const Graph& g, std::span<const double> x, std::span<double> y) {
    const std::size_t n = g.num_nodes();
    if (x.size() != n || y.size() != n)
        throw std::invalid_argument("laplacian_apply: vector length does not match node count");
    for (NodeId i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto w = g.neighbor_weights(i);
        double acc = g.degree(i) * x[i];
        for (std::size_t k = 0; k < nb.size(); ++k) acc -= w[k] * x[nb[k]];
        y[i] = acc;
    }
}

std::vector<double> laplacian_apply(const Graph& g, std::span<const double> x) {
    std::vector<double> y(x.size());
    laplacian_apply(g, x, y);
    return y;
}

}  // namespace fjm
