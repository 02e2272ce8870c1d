#pragma once

#include <algorithm>
#include <vector>

#include "graph.hpp"
#include "labeling.hpp"

namespace rulegnn {

/// Runs joint colour refinement on both graphs until the partition is stable.
/// Returns false as soon as the colour histograms differ, i.e. 1-WL tells them apart.
inline bool wl_equivalent(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    const std::vector<LabeledGraph> pair{a, b};
    NodeLabeling current = original_labels(pair);
    const auto histograms_equal = [](const NodeLabeling& l) {
        auto x = l.labels[0];
        auto y = l.labels[1];
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        return x == y;
    };
    while (true) {
        if (!histograms_equal(current)) return false;
        NodeLabeling next = wl_refine(pair, current);
        if (next.alphabet_size == current.alphabet_size) return true;
        current = std::move(next);
    }
}

/// Exact label-preserving isomorphism test by backtracking.
///
/// Source nodes are matched in BFS order; candidates must carry the same stable WL colour,
/// and every candidate is checked against all previously matched nodes.
inline bool are_isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    const std::size_t n = a.node_count();
    if (n != b.node_count() || a.edge_count() != b.edge_count()) return false;
    if (!wl_equivalent(a, b)) return false;
    if (n == 0) return true;

    const std::vector<LabeledGraph> pair{a, b};
    NodeLabeling colours = original_labels(pair);
    while (true) {
        NodeLabeling next = wl_refine(pair, colours);
        if (next.alphabet_size == colours.alphabet_size) break;
        colours = std::move(next);
    }
    const auto& ca = colours.labels[0];
    const auto& cb = colours.labels[1];

    // BFS order over every component of `a`, each component rooted at its rarest colour.
    std::vector<NodeId> order;
    std::vector<char> placed(n, 0);
    std::vector<std::size_t> freq(static_cast<std::size_t>(colours.alphabet_size) + 1, 0);
    for (int c : ca) ++freq[static_cast<std::size_t>(c)];
    std::vector<NodeId> roots = identity_permutation(n);
    std::stable_sort(roots.begin(), roots.end(), [&](NodeId x, NodeId y) {
        return freq[static_cast<std::size_t>(ca[x])] < freq[static_cast<std::size_t>(ca[y])];
    });
    for (NodeId r : roots) {
        if (placed[r]) continue;
        placed[r] = 1;
        std::size_t head = order.size();
        order.push_back(r);
        for (; head < order.size(); ++head) {
            for (NodeId v : a.neighbors(order[head])) {
                if (!placed[v]) {
                    placed[v] = 1;
                    order.push_back(v);
                }
            }
        }
    }

    std::vector<NodeId> map_ab(n, 0);
    std::vector<char> used(n, 0);
    std::vector<char> mapped(n, 0);

    auto consistent = [&](NodeId u, NodeId cand) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!mapped[i]) continue;
            const auto w = static_cast<NodeId>(i);
            if (a.has_edge(u, w) != b.has_edge(cand, map_ab[w])) return false;
        }
        return true;
    };

    auto search = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n) return true;
        const NodeId u = order[depth];
        // Prefer candidates adjacent to the image of an already-mapped neighbour.
        std::vector<NodeId> candidates;
        NodeId anchor = u;
        for (NodeId w : a.neighbors(u)) {
            if (mapped[w]) {
                anchor = w;
                break;
            }
        }
        if (anchor != u) {
            for (NodeId c : b.neighbors(map_ab[anchor])) candidates.push_back(c);
        } else {
            candidates = identity_permutation(n);
        }
        for (NodeId c : candidates) {
            if (used[c] || cb[c] != ca[u] || b.degree(c) != a.degree(u)) continue;
            if (!consistent(u, c)) continue;
            map_ab[u] = c;
            used[c] = 1;
            mapped[u] = 1;
            if (self(self, depth + 1)) return true;
            mapped[u] = 0;
            used[c] = 0;
        }
        return false;
    };
    return search(search, 0);
}

} // namespace rulegnn
