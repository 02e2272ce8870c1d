#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace rulegnn {

/// Node labeling over a whole dataset. labels[g][v] lies in [1, alphabet_size] and the
/// alphabet is shared by every graph, so equal labels in different graphs mean the same thing.
struct NodeLabeling {
    std::vector<std::vector<int>> labels;
    int alphabet_size = 0;
    std::string descriptor;

    const std::vector<int>& of(std::size_t graph) const { return labels[graph]; }
    std::size_t graph_count() const noexcept { return labels.size(); }
    friend bool operator==(const NodeLabeling&, const NodeLabeling&) = default;
};

/// Renames arbitrary keys to 1..L in ascending key order, dataset-globally.
template <typename Key>
NodeLabeling compact_keys(const std::vector<std::vector<Key>>& keys, std::string descriptor) {
    std::map<Key, int> ids;
    for (const auto& graph : keys) {
        for (const auto& k : graph) ids.emplace(k, 0);
    }
    int next = 1;
    for (auto& [key, id] : ids) id = next++;
    NodeLabeling out;
    out.descriptor = std::move(descriptor);
    out.alphabet_size = static_cast<int>(ids.size());
    out.labels.reserve(keys.size());
    for (const auto& graph : keys) {
        std::vector<int> row;
        row.reserve(graph.size());
        for (const auto& k : graph) row.push_back(ids.at(k));
        out.labels.push_back(std::move(row));
    }
    return out;
}

/// The graphs' own node labels, compacted.
inline NodeLabeling original_labels(const std::vector<LabeledGraph>& graphs) {
    std::vector<std::vector<int>> keys;
    keys.reserve(graphs.size());
    for (const auto& g : graphs) keys.push_back(g.labels());
    return compact_keys(keys, "original");
}

/// Node degree as label; the usual choice for unlabeled graphs.
inline NodeLabeling degree_labels(const std::vector<LabeledGraph>& graphs) {
    std::vector<std::vector<std::size_t>> keys;
    keys.reserve(graphs.size());
    for (const auto& g : graphs) {
        std::vector<std::size_t> row(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v) row[v] = g.degree(v);
        keys.push_back(std::move(row));
    }
    return compact_keys(keys, "degree");
}

/// One round of colour refinement: the new label of v encodes (label(v), sorted neighbour labels).
/// Signatures are collected over all graphs and numbered in sorted order, which is collision-free
/// and independent of graph order and node order.
inline NodeLabeling wl_refine(const std::vector<LabeledGraph>& graphs, const NodeLabeling& current) {
    using Signature = std::pair<int, std::vector<int>>;
    std::vector<std::vector<Signature>> keys(graphs.size());
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        const auto& graph = graphs[g];
        const auto& lab = current.labels[g];
        keys[g].reserve(graph.node_count());
        for (NodeId v = 0; v < graph.node_count(); ++v) {
            std::vector<int> neigh;
            neigh.reserve(graph.degree(v));
            for (NodeId u : graph.neighbors(v)) neigh.push_back(lab[u]);
            std::sort(neigh.begin(), neigh.end());
            keys[g].emplace_back(lab[v], std::move(neigh));
        }
    }
    return compact_keys(keys, current.descriptor);
}

/// Weisfeiler-Leman labels after `iterations` rounds starting from `initial`
/// (iteration 0 returns `initial`).
inline NodeLabeling wl_labels(const std::vector<LabeledGraph>& graphs, int iterations, const NodeLabeling& initial) {
    if (iterations < 0) throw ArgumentError("WL iteration count must be non-negative");
    NodeLabeling current = initial;
    for (int t = 0; t < iterations; ++t) current = wl_refine(graphs, current);
    current.descriptor = "wl(k=" + std::to_string(iterations) + ",base=" + initial.descriptor + ")";
    return current;
}

inline NodeLabeling wl_labels(const std::vector<LabeledGraph>& graphs, int iterations) {
    return wl_labels(graphs, iterations, original_labels(graphs));
}

/// Keeps the L-1 most frequent labels as 1..L-1 (descending frequency, ties by ascending label)
/// and merges every other label into L. With at most L distinct labels this is a pure
/// frequency-rank renaming.
inline NodeLabeling cap_labels(const NodeLabeling& in, int cap) {
    if (cap < 1) throw ArgumentError("label cap must be at least 1");
    std::vector<std::size_t> freq(static_cast<std::size_t>(in.alphabet_size) + 1, 0);
    for (const auto& row : in.labels) {
        for (int l : row) ++freq[static_cast<std::size_t>(l)];
    }
    std::vector<int> present;
    for (int l = 1; l <= in.alphabet_size; ++l) {
        if (freq[static_cast<std::size_t>(l)] > 0) present.push_back(l);
    }
    std::stable_sort(present.begin(), present.end(), [&](int a, int b) {
        return freq[static_cast<std::size_t>(a)] > freq[static_cast<std::size_t>(b)];
    });
    std::vector<int> rename(static_cast<std::size_t>(in.alphabet_size) + 1, cap);
    const bool merges = static_cast<int>(present.size()) > cap;
    const std::size_t kept = merges ? static_cast<std::size_t>(cap - 1) : present.size();
    for (std::size_t r = 0; r < kept; ++r) rename[static_cast<std::size_t>(present[r])] = static_cast<int>(r) + 1;

    NodeLabeling out;
    out.descriptor = in.descriptor + "|cap=" + std::to_string(cap);
    out.alphabet_size = merges ? cap : static_cast<int>(present.size());
    out.labels.reserve(in.labels.size());
    for (const auto& row : in.labels) {
        std::vector<int> mapped(row.size());
        std::transform(row.begin(), row.end(), mapped.begin(),
                       [&](int l) { return rename[static_cast<std::size_t>(l)]; });
        out.labels.push_back(std::move(mapped));
    }
    return out;
}

/// Product of two labelings: nodes share a label iff they share both.
inline NodeLabeling combine_labelings(const NodeLabeling& a, const NodeLabeling& b) {
    if (a.graph_count() != b.graph_count()) throw ContractError("labelings cover different datasets");
    std::vector<std::vector<std::pair<int, int>>> keys(a.graph_count());
    for (std::size_t g = 0; g < a.graph_count(); ++g) {
        if (a.labels[g].size() != b.labels[g].size()) throw ContractError("labelings disagree on node count");
        for (std::size_t v = 0; v < a.labels[g].size(); ++v) keys[g].emplace_back(a.labels[g][v], b.labels[g][v]);
    }
    return compact_keys(keys, a.descriptor + "*" + b.descriptor);
}

/// Number of distinct labels actually used.
inline std::size_t distinct_label_count(const NodeLabeling& l) {
    std::vector<char> seen(static_cast<std::size_t>(l.alphabet_size) + 1, 0);
    std::size_t count = 0;
    for (const auto& row : l.labels) {
        for (int x : row) {
            if (!seen[static_cast<std::size_t>(x)]) {
                seen[static_cast<std::size_t>(x)] = 1;
                ++count;
            }
        }
    }
    return count;
}

} // namespace rulegnn
