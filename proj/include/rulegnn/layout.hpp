#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace rulegnn {

/// One nonzero cell of a rule-built weight matrix. Rows and columns are 0-based;
/// `index` is the 1-based position of the shared weight in the layer's pool.
struct WeightEntry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t index = 0;

    friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
    friend auto operator<=>(const WeightEntry&, const WeightEntry&) = default;
};

/// The per-sample materialisation of a rule: which pool weight sits in which matrix cell
/// and which pool bias sits in which output row.
///
/// A cell not listed in `weights` is zero. `bias_index[r] == 0` means row r has no bias.
class RuleLayout {
public:
    RuleLayout() = default;

    /// Sorts the entries row-major and checks every invariant; throws ContractError on violation.
    RuleLayout(std::size_t out_dim, std::size_t in_dim, std::size_t weight_pool, std::size_t bias_pool,
               std::vector<WeightEntry> weights, std::vector<std::uint32_t> bias_index)
        : out_dim_(out_dim), in_dim_(in_dim), weight_pool_(weight_pool), bias_pool_(bias_pool),
          weights_(std::move(weights)), bias_index_(std::move(bias_index)) {
        if (bias_index_.empty()) bias_index_.assign(out_dim_, 0);
        std::sort(weights_.begin(), weights_.end());
        validate();
    }

    std::size_t out_dim() const noexcept { return out_dim_; }
    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t weight_pool_size() const noexcept { return weight_pool_; }
    std::size_t bias_pool_size() const noexcept { return bias_pool_; }
    const std::vector<WeightEntry>& weights() const noexcept { return weights_; }
    const std::vector<std::uint32_t>& bias_index() const noexcept { return bias_index_; }
    std::size_t nonzeros() const noexcept { return weights_.size(); }

    /// Dense out_dim x in_dim matrix of pool indices, 0 for empty cells.
    std::vector<std::vector<std::uint32_t>> dense_indices() const {
        std::vector<std::vector<std::uint32_t>> m(out_dim_, std::vector<std::uint32_t>(in_dim_, 0));
        for (const auto& e : weights_) m[e.row][e.col] = e.index;
        return m;
    }

    friend bool operator==(const RuleLayout&, const RuleLayout&) = default;

private:
    void validate() const {
        if (bias_index_.size() != out_dim_) throw ContractError("bias index vector must have out_dim entries");
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            const auto& e = weights_[k];
            if (e.row >= out_dim_ || e.col >= in_dim_) throw ContractError("weight entry outside the matrix");
            if (e.index < 1 || e.index > weight_pool_) {
                throw ContractError("weight index " + std::to_string(e.index) + " outside [1, " +
                                    std::to_string(weight_pool_) + "]");
            }
            if (k > 0 && weights_[k - 1].row == e.row && weights_[k - 1].col == e.col) {
                throw ContractError("two weights in cell (" + std::to_string(e.row) + ", " + std::to_string(e.col) + ")");
            }
        }
        for (auto b : bias_index_) {
            if (b > bias_pool_) throw ContractError("bias index " + std::to_string(b) + " outside the bias pool");
        }
    }

    std::size_t out_dim_ = 0;
    std::size_t in_dim_ = 0;
    std::size_t weight_pool_ = 0;
    std::size_t bias_pool_ = 0;
    std::vector<WeightEntry> weights_;
    std::vector<std::uint32_t> bias_index_;
};

/// Static rule reproducing a dense m x n layer: cell (i, j) holds weight i*n + j + 1.
inline RuleLayout layout_fc(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw ArgumentError("fully connected layout needs n, m >= 1");
    std::vector<WeightEntry> entries;
    entries.reserve(n * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                               static_cast<std::uint32_t>(i * n + j + 1)});
        }
    }
    return RuleLayout(m, n, n * m, 0, std::move(entries), {});
}

/// Static rule reproducing a stride-1, unpadded convolution with a kernel x kernel filter over
/// an image with `n` columns and `m` rows, flattened row-major (pixel (r, c) -> r*n + c).
/// Output pixel (r, c) of the (m-k+1) x (n-k+1) result gets kernel cell (a, b) at input
/// (r+a, c+b) with pool index a*k + b + 1.
///
/// The window walk is exact. Closed-form index expressions that bound the column offset
/// strictly below the kernel size drop the last kernel column of every row.
inline RuleLayout layout_cnn(std::size_t n, std::size_t m, std::size_t kernel) {
    if (kernel == 0 || kernel > n || kernel > m) {
        throw ArgumentError("kernel size " + std::to_string(kernel) + " does not fit a " + std::to_string(n) + "x" +
                            std::to_string(m) + " image");
    }
    const std::size_t out_cols = n - kernel + 1;
    const std::size_t out_rows = m - kernel + 1;
    std::vector<WeightEntry> entries;
    entries.reserve(out_rows * out_cols * kernel * kernel);
    for (std::size_t r = 0; r < out_rows; ++r) {
        for (std::size_t c = 0; c < out_cols; ++c) {
            const auto out = static_cast<std::uint32_t>(r * out_cols + c);
            for (std::size_t a = 0; a < kernel; ++a) {
                for (std::size_t b = 0; b < kernel; ++b) {
                    entries.push_back({out, static_cast<std::uint32_t>((r + a) * n + (c + b)),
                                       static_cast<std::uint32_t>(a * kernel + b + 1)});
                }
            }
        }
    }
    return RuleLayout(out_rows * out_cols, n * m, kernel * kernel, 0, std::move(entries), {});
}

/// Parameters of a propagation rule: the valid property values D and the label bound L.
struct GraphRuleSpec {
    std::vector<int> distances;
    int label_count = 1;
};

/// Sorted, de-duplicated D with a lookup from property value to rank.
class DistanceSet {
public:
    explicit DistanceSet(std::vector<int> values) : values_(std::move(values)) {
        std::sort(values_.begin(), values_.end());
        values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
        if (values_.empty()) throw ArgumentError("valid distance set must not be empty");
        if (values_.front() < 0) throw ArgumentError("valid distances must be non-negative");
        rank_.assign(static_cast<std::size_t>(values_.back()) + 1, -1);
        for (std::size_t r = 0; r < values_.size(); ++r) rank_[static_cast<std::size_t>(values_[r])] = static_cast<int>(r);
    }

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<int>& values() const noexcept { return values_; }

    /// Rank of p in D, or -1 when p is not a valid value (including the unreachable sentinel).
    int rank(std::int32_t p) const {
        if (p < 0 || static_cast<std::size_t>(p) >= rank_.size()) return -1;
        return rank_[static_cast<std::size_t>(p)];
    }

private:
    std::vector<int> values_;
    std::vector<int> rank_;
};

/// Weight pool index of the triple (l(i), l(j), p) for labels in [1, L] and a rank in D:
/// ((l(i) - 1) * L + (l(j) - 1)) * |D| + rank + 1.
inline std::uint32_t triple_index(int li, int lj, int rank, int label_count, std::size_t distance_count) {
    return static_cast<std::uint32_t>(
        (static_cast<std::size_t>(li - 1) * static_cast<std::size_t>(label_count) + static_cast<std::size_t>(lj - 1)) *
            distance_count +
        static_cast<std::size_t>(rank) + 1);
}

/// Dynamic graph rule: cell (i, j) is present iff p(i, j) is in D and then holds the weight of the
/// triple (l(i), l(j), p(i, j)); row i gets bias l(i). Pools have L*L*|D| weights and L biases.
inline RuleLayout layout_graph_propagation(const LabeledGraph& g, const std::vector<int>& labels,
                                           const PropertyMap& props, const GraphRuleSpec& spec) {
    const std::size_t n = g.node_count();
    if (labels.size() != n || props.size() != n) throw ContractError("labels / property map do not match the graph");
    if (spec.label_count < 1) throw ArgumentError("label bound must be at least 1");
    const DistanceSet valid(spec.distances);
    for (int l : labels) {
        if (l < 1 || l > spec.label_count) {
            throw ContractError("label " + std::to_string(l) + " outside [1, " + std::to_string(spec.label_count) +
                                "]; cap the labeling first");
        }
    }
    const std::size_t L = static_cast<std::size_t>(spec.label_count);
    std::vector<WeightEntry> entries;
    std::vector<std::uint32_t> bias(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = props.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const int r = valid.rank(row[j]);
            if (r < 0) continue;
            entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                               triple_index(labels[i], labels[j], r, spec.label_count, valid.size())});
        }
        bias[i] = static_cast<std::uint32_t>(labels[i]);
    }
    return RuleLayout(n, n, L * L * valid.size(), L, std::move(entries), std::move(bias));
}

/// Aggregation rule onto `out_dim` outputs: cell (r, i) holds weight (l(i) - 1) * out_dim + r + 1,
/// so each label owns a column block of out_dim weights; row r gets bias r + 1.
inline RuleLayout layout_aggregation(const std::vector<int>& labels, int alphabet_size, std::size_t out_dim) {
    if (out_dim == 0) throw ArgumentError("aggregation output size must be at least 1");
    if (alphabet_size < 1) throw ArgumentError("aggregation needs a non-empty label alphabet");
    std::vector<WeightEntry> entries;
    entries.reserve(out_dim * labels.size());
    for (std::size_t r = 0; r < out_dim; ++r) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const int l = labels[i];
            if (l < 1 || l > alphabet_size) throw ContractError("label outside the aggregation alphabet");
            entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(static_cast<std::size_t>(l - 1) * out_dim + r + 1)});
        }
    }
    std::vector<std::uint32_t> bias(out_dim);
    for (std::size_t r = 0; r < out_dim; ++r) bias[r] = static_cast<std::uint32_t>(r + 1);
    return RuleLayout(out_dim, labels.size(), out_dim * static_cast<std::size_t>(alphabet_size), out_dim,
                      std::move(entries), std::move(bias));
}

enum class Atom : int { hydrogen = 1, carbon = 6 };
enum class Bond { single, double_bond };

/// A hydrogen/carbon molecule graph with one bond kind per edge (parallel to graph.edges()).
struct Molecule {
    LabeledGraph graph;
    std::vector<Bond> bonds;

    Bond bond(NodeId u, NodeId v) const {
        const Edge key = u < v ? Edge{u, v} : Edge{v, u};
        const auto& edges = graph.edges();
        const auto it = std::lower_bound(edges.begin(), edges.end(), key);
        if (it == edges.end() || *it != key) throw ArgumentError("no bond between the given atoms");
        return bonds[static_cast<std::size_t>(it - edges.begin())];
    }
};

/// Builds a molecule from 1-based atom positions and bonds, the way structure diagrams number them.
inline Molecule make_molecule(const std::vector<Atom>& atoms, const std::vector<std::tuple<int, int, Bond>>& bonds) {
    std::vector<Edge> edges;
    std::map<Edge, Bond> kinds;
    for (const auto& [a, b, kind] : bonds) {
        auto u = static_cast<NodeId>(a - 1);
        auto v = static_cast<NodeId>(b - 1);
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
        kinds[{u, v}] = kind;
    }
    std::vector<int> labels;
    for (auto a : atoms) labels.push_back(static_cast<int>(a));
    Molecule mol{LabeledGraph(atoms.size(), std::move(edges), std::move(labels)), {}};
    for (const auto& e : mol.graph.edges()) mol.bonds.push_back(kinds.at(e));
    return mol;
}

/// Six-weight molecule rule: 1 on H diagonals, 2 on C diagonals, 3 for a single bond from an H row
/// to a C column, 4 for C row to H column, 5 for a single C-C bond, 6 for a double C-C bond.
/// No bias.
inline RuleLayout layout_mol(const Molecule& mol) {
    const auto& g = mol.graph;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const int l = g.label(v);
        if (l != static_cast<int>(Atom::hydrogen) && l != static_cast<int>(Atom::carbon)) {
            throw ArgumentError("molecule rule only knows H and C, got label " + std::to_string(l));
        }
    }
    const auto is_h = [&](NodeId v) { return g.label(v) == static_cast<int>(Atom::hydrogen); };
    std::vector<WeightEntry> entries;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        entries.push_back({i, i, is_h(i) ? 1u : 2u});
        for (NodeId j : g.neighbors(i)) {
            const Bond bond = mol.bond(i, j);
            std::uint32_t index = 0;
            if (bond == Bond::single) {
                if (is_h(i) && !is_h(j)) index = 3;
                else if (!is_h(i) && is_h(j)) index = 4;
                else if (!is_h(i) && !is_h(j)) index = 5;
            } else if (!is_h(i) && !is_h(j)) {
                index = 6;
            }
            if (index != 0) entries.push_back({i, j, index});
        }
    }
    return RuleLayout(g.node_count(), g.node_count(), 6, 0, std::move(entries), {});
}

} // namespace rulegnn
