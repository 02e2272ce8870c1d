#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace rulegnn {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph with one integer label per node.
///
/// Edges are stored once, as (u, v) with u < v, sorted. Adjacency lists are
/// sorted as well so iteration order is deterministic.
class LabeledGraph {
public:
    LabeledGraph() = default;

    /// Builds a graph; duplicate and reversed edge pairs collapse to one edge.
    /// Throws ArgumentError on self-loops, out-of-range endpoints or a label count mismatch.
    LabeledGraph(std::size_t node_count, std::vector<Edge> edges, std::vector<int> node_labels)
        : labels_(std::move(node_labels)), adjacency_(node_count) {
        if (labels_.size() != node_count) {
            throw ArgumentError("node label count " + std::to_string(labels_.size()) +
                                " does not match node count " + std::to_string(node_count));
        }
        for (auto& [u, v] : edges) {
            if (u >= node_count || v >= node_count) {
                throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                    ") has an endpoint outside [0, " + std::to_string(node_count) + ")");
            }
            if (u == v) throw ArgumentError("self-loop at node " + std::to_string(u));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);
        for (const auto& [u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& list : adjacency_) std::sort(list.begin(), list.end());
    }

    /// Unlabeled convenience constructor; every node gets label 0.
    static LabeledGraph unlabeled(std::size_t node_count, std::vector<Edge> edges) {
        return LabeledGraph(node_count, std::move(edges), std::vector<int>(node_count, 0));
    }

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int label(NodeId v) const { return labels_[v]; }
    std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
    std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

    bool has_edge(NodeId u, NodeId v) const {
        const auto& list = adjacency_[u];
        return std::binary_search(list.begin(), list.end(), v);
    }

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<int> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
};

/// Distance value for node pairs in different connected components.
inline constexpr std::int32_t kUnreachable = -1;

/// All-pairs node property p(i, j); here the unweighted shortest-path distance.
class PropertyMap {
public:
    PropertyMap() = default;
    PropertyMap(std::size_t n, std::vector<std::int32_t> values) : n_(n), values_(std::move(values)) {
        if (values_.size() != n * n) throw ArgumentError("property map needs n*n values");
    }

    std::size_t size() const noexcept { return n_; }
    std::int32_t at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    bool reachable(std::size_t i, std::size_t j) const { return at(i, j) != kUnreachable; }
    std::span<const std::int32_t> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
    const std::vector<std::int32_t>& values() const noexcept { return values_; }

    friend bool operator==(const PropertyMap&, const PropertyMap&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::int32_t> values_;
};

/// Exact unweighted distances by one BFS per source node.
inline PropertyMap all_pairs_distances(const LabeledGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::int32_t> values(n * n, kUnreachable);
    std::vector<NodeId> queue;
    queue.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::int32_t* dist = values.data() + std::size_t{s} * n;
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId u = queue[head];
            for (NodeId v : g.neighbors(u)) {
                if (dist[v] == kUnreachable) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return PropertyMap(n, std::move(values));
}

/// Largest finite distance; 0 for graphs with fewer than two nodes.
inline std::int32_t diameter(const PropertyMap& d) {
    std::int32_t best = 0;
    for (auto v : d.values()) best = std::max(best, v);
    return best;
}

inline bool is_permutation_of_range(std::span<const NodeId> perm) {
    std::vector<char> seen(perm.size(), 0);
    for (NodeId p : perm) {
        if (p >= perm.size() || seen[p]) return false;
        seen[p] = 1;
    }
    return true;
}

/// Relabels nodes: node v of `g` becomes node perm[v] of the result.
inline LabeledGraph permute_graph(const LabeledGraph& g, std::span<const NodeId> perm) {
    if (perm.size() != g.node_count() || !is_permutation_of_range(perm)) {
        throw ArgumentError("permutation is not a bijection on [0, " + std::to_string(g.node_count()) + ")");
    }
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
    std::vector<int> labels(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) labels[perm[v]] = g.label(v);
    return LabeledGraph(g.node_count(), std::move(edges), std::move(labels));
}

inline std::vector<NodeId> identity_permutation(std::size_t n) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    return perm;
}

/// Number of connected components.
inline std::size_t component_count(const LabeledGraph& g) {
    std::vector<char> seen(g.node_count(), 0);
    std::size_t components = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.assign(1, s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
    return components;
}

} // namespace rulegnn
