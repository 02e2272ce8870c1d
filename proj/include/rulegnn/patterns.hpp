#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "labeling.hpp"

namespace rulegnn {

enum class PatternKind { simple_cycle, induced_cycle, clique, star, path, single_edge };

/// A small pattern graph. `size` is the pattern's node count (a star of size s has s - 1 leaves).
struct PatternSpec {
    PatternKind kind = PatternKind::single_edge;
    int size = 2;

    friend bool operator==(const PatternSpec&, const PatternSpec&) = default;
};

inline std::string to_string(const PatternSpec& p) {
    switch (p.kind) {
    case PatternKind::simple_cycle: return "cycle_" + std::to_string(p.size);
    case PatternKind::induced_cycle: return "induced_cycle_" + std::to_string(p.size);
    case PatternKind::clique: return p.size == 3 ? "triangle" : "clique_" + std::to_string(p.size);
    case PatternKind::star: return "star_" + std::to_string(p.size);
    case PatternKind::path: return "path_" + std::to_string(p.size);
    case PatternKind::single_edge: return "edge";
    }
    return "?";
}

inline void validate(const PatternSpec& p) {
    const auto min_size = [&] {
        switch (p.kind) {
        case PatternKind::simple_cycle:
        case PatternKind::induced_cycle: return 3;
        default: return 2;
        }
    }();
    if (p.size < min_size) {
        throw ArgumentError("pattern " + to_string(p) + " is below its minimum size " + std::to_string(min_size));
    }
}

/// Parses a comma-separated pattern list. Accepted items: `edge`, `triangle`, `cycle_K`,
/// `induced_cycle_K`, `clique_K`, `star_K`, `path_K`, and the ranges `simple_cycles<=K`
/// (expands to cycle_3..cycle_K) and `induced_cycles<=K`.
inline std::vector<PatternSpec> parse_patterns(std::string_view text) {
    std::vector<PatternSpec> out;
    const auto number = [&](std::string_view item, std::string_view digits) {
        try {
            std::size_t used = 0;
            int value = std::stoi(std::string(digits), &used);
            if (used != digits.size()) throw std::invalid_argument("trailing");
            return value;
        } catch (const std::exception&) {
            throw ArgumentError("bad pattern size in '" + std::string(item) + "'");
        }
    };
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto item = io::trim(text.substr(start, end - start));
        start = end + 1;
        if (item.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const auto with_prefix = [&](std::string_view prefix) { return item.substr(0, prefix.size()) == prefix; };
        if (item == "edge" || item == "single_edge") {
            out.push_back({PatternKind::single_edge, 2});
        } else if (item == "triangle") {
            out.push_back({PatternKind::clique, 3});
        } else if (with_prefix("simple_cycles<=") || with_prefix("induced_cycles<=")) {
            const bool induced = item[0] == 'i';
            const int max_len = number(item, item.substr(item.find("<=") + 2));
            if (max_len < 3) throw ArgumentError("cycle range in '" + std::string(item) + "' must reach length 3");
            for (int len = 3; len <= max_len; ++len) {
                out.push_back({induced ? PatternKind::induced_cycle : PatternKind::simple_cycle, len});
            }
        } else if (with_prefix("induced_cycle_")) {
            out.push_back({PatternKind::induced_cycle, number(item, item.substr(14))});
        } else if (with_prefix("cycle_")) {
            out.push_back({PatternKind::simple_cycle, number(item, item.substr(6))});
        } else if (with_prefix("clique_")) {
            out.push_back({PatternKind::clique, number(item, item.substr(7))});
        } else if (with_prefix("star_")) {
            out.push_back({PatternKind::star, number(item, item.substr(5))});
        } else if (with_prefix("path_")) {
            out.push_back({PatternKind::path, number(item, item.substr(5))});
        } else {
            throw ArgumentError("unknown pattern '" + std::string(item) + "'");
        }
        validate(out.back());
    }
    if (out.empty()) throw ArgumentError("empty pattern list");
    return out;
}

/// Caps the number of enumeration steps for one graph.
struct EnumerationBudget {
    std::uint64_t max_steps = 200'000'000;
};

namespace detail {

class StepCounter {
public:
    explicit StepCounter(EnumerationBudget budget) : limit_(budget.max_steps) {}
    void tick() {
        if (++steps_ > limit_) {
            throw ResourceError("pattern enumeration exceeded " + std::to_string(limit_) + " steps");
        }
    }

private:
    std::uint64_t limit_;
    std::uint64_t steps_ = 0;
};

/// Enumerates every cycle of length 3..max_len once: the smallest node is the start and the
/// direction with path[1] < path.back() is kept. counts[len][v] is incremented per member node.
inline void enumerate_cycles(const LabeledGraph& g, int max_len, bool induced,
                             std::vector<std::vector<std::uint64_t>>& counts, StepCounter& steps) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> path;
    std::vector<char> on_path(n, 0);
    NodeId start = 0;

    auto dfs = [&](auto&& self) -> void {
        steps.tick();
        const std::size_t len = path.size();
        const NodeId u = path.back();
        if (len >= 3 && g.has_edge(u, start)) {
            if (path[1] < u) {
                for (NodeId w : path) ++counts[len][w];
            }
            if (induced) return;
        }
        if (static_cast<int>(len) == max_len) return;
        for (NodeId v : g.neighbors(u)) {
            if (v <= start || on_path[v]) continue;
            if (induced) {
                bool chord = false;
                for (std::size_t i = 1; i + 1 < len && !chord; ++i) chord = g.has_edge(v, path[i]);
                if (chord) continue;
            }
            path.push_back(v);
            on_path[v] = 1;
            self(self);
            on_path[v] = 0;
            path.pop_back();
        }
    };

    for (start = 0; start < n; ++start) {
        path.assign(1, start);
        on_path[start] = 1;
        dfs(dfs);
        on_path[start] = 0;
    }
}

inline void enumerate_cliques(const LabeledGraph& g, int k, std::vector<std::uint64_t>& counts, StepCounter& steps) {
    std::vector<NodeId> clique;
    auto extend = [&](auto&& self, const std::vector<NodeId>& candidates) -> void {
        steps.tick();
        if (static_cast<int>(clique.size()) == k) {
            for (NodeId w : clique) ++counts[w];
            return;
        }
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const NodeId v = candidates[i];
            std::vector<NodeId> next;
            for (std::size_t j = i + 1; j < candidates.size(); ++j) {
                if (g.has_edge(v, candidates[j])) next.push_back(candidates[j]);
            }
            if (static_cast<int>(clique.size() + 1 + next.size()) < k) continue;
            clique.push_back(v);
            self(self, next);
            clique.pop_back();
        }
    };
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::vector<NodeId> higher;
        for (NodeId u : g.neighbors(v)) {
            if (u > v) higher.push_back(u);
        }
        clique.assign(1, v);
        extend(extend, higher);
    }
}

inline void enumerate_paths(const LabeledGraph& g, int nodes, std::vector<std::uint64_t>& counts, StepCounter& steps) {
    std::vector<NodeId> path;
    std::vector<char> on_path(g.node_count(), 0);
    auto dfs = [&](auto&& self) -> void {
        steps.tick();
        if (static_cast<int>(path.size()) == nodes) {
            if (path.front() < path.back()) {
                for (NodeId w : path) ++counts[w];
            }
            return;
        }
        for (NodeId v : g.neighbors(path.back())) {
            if (on_path[v]) continue;
            path.push_back(v);
            on_path[v] = 1;
            self(self);
            on_path[v] = 0;
            path.pop_back();
        }
    };
    for (NodeId s = 0; s < g.node_count(); ++s) {
        path.assign(1, s);
        on_path[s] = 1;
        dfs(dfs);
        on_path[s] = 0;
    }
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace detail

/// Per pattern, per node: how many distinct occurrences (subgraph copies, not maps) of the
/// pattern contain the node. All cycle patterns of one kind share a single enumeration.
inline std::vector<std::vector<std::uint64_t>> count_patterns(const LabeledGraph& g,
                                                              const std::vector<PatternSpec>& patterns,
                                                              EnumerationBudget budget = {}) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<std::uint64_t>> out(patterns.size(), std::vector<std::uint64_t>(n, 0));
    for (const auto& p : patterns) validate(p);
    detail::StepCounter steps(budget);

    for (bool induced : {false, true}) {
        const auto kind = induced ? PatternKind::induced_cycle : PatternKind::simple_cycle;
        int max_len = 0;
        for (const auto& p : patterns) {
            if (p.kind == kind) max_len = std::max(max_len, p.size);
        }
        if (max_len == 0) continue;
        std::vector<std::vector<std::uint64_t>> by_len(static_cast<std::size_t>(max_len) + 1,
                                                       std::vector<std::uint64_t>(n, 0));
        detail::enumerate_cycles(g, max_len, induced, by_len, steps);
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            if (patterns[i].kind == kind) out[i] = by_len[static_cast<std::size_t>(patterns[i].size)];
        }
    }

    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto& p = patterns[i];
        auto& counts = out[i];
        switch (p.kind) {
        case PatternKind::simple_cycle:
        case PatternKind::induced_cycle: break;
        case PatternKind::single_edge:
            for (NodeId v = 0; v < n; ++v) counts[v] = g.degree(v);
            break;
        case PatternKind::clique:
            if (p.size == 2) {
                for (NodeId v = 0; v < n; ++v) counts[v] = g.degree(v);
            } else {
                detail::enumerate_cliques(g, p.size, counts, steps);
            }
            break;
        case PatternKind::path: detail::enumerate_paths(g, p.size, counts, steps); break;
        case PatternKind::star: {
            const auto leaves = static_cast<std::uint64_t>(p.size - 1);
            for (NodeId v = 0; v < n; ++v) {
                if (p.size == 2) {
                    counts[v] = g.degree(v);
                    continue;
                }
                // v as the centre, plus v as a leaf of each neighbour's star.
                std::uint64_t c = detail::binomial(g.degree(v), leaves);
                for (NodeId u : g.neighbors(v)) c += detail::binomial(g.degree(u) - 1, leaves - 1);
                counts[v] = c;
            }
            break;
        }
        }
    }
    return out;
}

inline std::vector<std::uint64_t> count_pattern_embeddings(const LabeledGraph& g, const PatternSpec& pattern,
                                                           EnumerationBudget budget = {}) {
    return count_patterns(g, {pattern}, budget).front();
}

/// Nodes share a label iff their count vectors over `patterns` agree (dataset-globally).
/// Throws ResourceError naming the graph whose enumeration ran over budget.
inline NodeLabeling pattern_labels(const std::vector<LabeledGraph>& graphs, const std::vector<PatternSpec>& patterns,
                                   EnumerationBudget budget = {}) {
    std::vector<std::vector<std::vector<std::uint64_t>>> keys(graphs.size());
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        std::vector<std::vector<std::uint64_t>> counts;
        try {
            counts = count_patterns(graphs[g], patterns, budget);
        } catch (const ResourceError& e) {
            throw ResourceError("graph " + std::to_string(g) + ": " + e.what());
        }
        keys[g].assign(graphs[g].node_count(), std::vector<std::uint64_t>(patterns.size()));
        for (std::size_t p = 0; p < patterns.size(); ++p) {
            for (std::size_t v = 0; v < graphs[g].node_count(); ++v) keys[g][v][p] = counts[p][v];
        }
    }
    std::string descriptor = "patterns(";
    for (std::size_t p = 0; p < patterns.size(); ++p) descriptor += (p ? "," : "") + to_string(patterns[p]);
    descriptor += ")";
    return compact_keys(keys, descriptor);
}

} // namespace rulegnn
