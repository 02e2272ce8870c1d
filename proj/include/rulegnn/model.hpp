#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "labeling.hpp"
#include "layer.hpp"
#include "layout.hpp"
#include "patterns.hpp"

namespace rulegnn {

enum class LabelSource { original, degree, wl, patterns };

inline std::string to_string(LabelSource s) {
    switch (s) {
    case LabelSource::original: return "original";
    case LabelSource::degree: return "degree";
    case LabelSource::wl: return "wl";
    case LabelSource::patterns: return "patterns";
    }
    return "?";
}

inline LabelSource parse_label_source(const std::string& text) {
    if (text == "original" || text == "labels") return LabelSource::original;
    if (text == "degree") return LabelSource::degree;
    if (text == "wl") return LabelSource::wl;
    if (text == "patterns" || text == "pattern") return LabelSource::patterns;
    throw ArgumentError("unknown labeling '" + text + "'");
}

/// How one layer labels nodes. `base` seeds WL refinement; `cap` of 0 means uncapped.
/// With `with_original` the result is refined by the graph's own labels (product labeling).
struct LabelingSpec {
    LabelSource source = LabelSource::original;
    LabelSource base = LabelSource::original;
    int wl_iterations = 0;
    std::string patterns;
    bool with_original = false;
    int cap = 0;

    std::string descriptor() const {
        std::string d = to_string(source);
        if (source == LabelSource::wl) d += "(k=" + std::to_string(wl_iterations) + ",base=" + to_string(base) + ")";
        if (source == LabelSource::patterns) d += "(" + patterns + ")";
        if (with_original) d += "*original";
        if (cap > 0) d += "|cap=" + std::to_string(cap);
        return d;
    }

    friend bool operator==(const LabelingSpec&, const LabelingSpec&) = default;
};

inline NodeLabeling compute_labeling(const std::vector<LabeledGraph>& graphs, const LabelingSpec& spec,
                                     EnumerationBudget budget = {}) {
    const auto base_of = [&](LabelSource s) {
        if (s == LabelSource::degree) return degree_labels(graphs);
        if (s == LabelSource::original) return original_labels(graphs);
        throw ArgumentError("WL base labeling must be original or degree");
    };
    NodeLabeling out;
    switch (spec.source) {
    case LabelSource::original: out = original_labels(graphs); break;
    case LabelSource::degree: out = degree_labels(graphs); break;
    case LabelSource::wl: out = wl_labels(graphs, spec.wl_iterations, base_of(spec.base)); break;
    case LabelSource::patterns: out = pattern_labels(graphs, parse_patterns(spec.patterns), budget); break;
    }
    if (spec.with_original) out = combine_labelings(out, original_labels(graphs));
    if (spec.cap > 0) out = cap_labels(out, spec.cap);
    out.descriptor = spec.descriptor();
    return out;
}

enum class RuleKind { propagation, aggregation };

/// One layer of a RuleGNN. Aggregation layers have `out_dim` outputs (0: the number of classes).
struct LayerSpec {
    RuleKind rule = RuleKind::propagation;
    LabelingSpec labeling;
    std::vector<int> distances;
    std::size_t out_dim = 0;
    std::optional<Activation> activation;

    std::string descriptor() const {
        std::string d = rule == RuleKind::propagation ? "propagation" : "aggregation";
        d += "[" + labeling.descriptor() + "]";
        if (rule == RuleKind::propagation) {
            d += "D={";
            for (std::size_t i = 0; i < distances.size(); ++i) d += (i ? "," : "") + std::to_string(distances[i]);
            d += "}";
        } else {
            d += "M=" + std::to_string(out_dim);
        }
        if (activation) d += ":" + to_string(*activation);
        return d;
    }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

enum class InputSignal { ones, degree };

/// Propagation layers followed by exactly one aggregation layer.
struct ModelSpec {
    std::vector<LayerSpec> layers;
    InputSignal input = InputSignal::ones;

    void validate() const {
        if (layers.empty()) throw SpecError("model has no layers");
        if (layers.back().rule != RuleKind::aggregation) throw SpecError("the last layer must be an aggregation layer");
        for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
            if (layers[i].rule != RuleKind::propagation) throw SpecError("only the last layer may aggregate");
            if (layers[i].distances.empty()) {
                throw SpecError("propagation layer " + std::to_string(i + 1) + " has an empty distance set");
            }
        }
    }

    /// Hidden layers default to tanh, the output layer to identity.
    Activation activation(std::size_t layer) const {
        if (layers[layer].activation) return *layers[layer].activation;
        return layer + 1 == layers.size() ? Activation::identity : Activation::tanh;
    }

    std::string descriptor() const {
        std::string d = input == InputSignal::ones ? "x=ones" : "x=degree";
        for (const auto& l : layers) d += ";" + l.descriptor();
        return d;
    }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct PoolShape {
    std::size_t weights = 0;
    std::size_t biases = 0;
    friend bool operator==(const PoolShape&, const PoolShape&) = default;
};

/// Everything derived from a dataset before training: per-layer labelings, distances and the
/// per-graph layouts. layouts[g][layer] belongs to graph g.
struct PreparedData {
    std::vector<NodeLabeling> labelings;
    std::vector<PropertyMap> distances;
    std::vector<std::vector<RuleLayout>> layouts;
    std::vector<PoolShape> pools;
    std::size_t num_classes = 0;
};

inline PoolShape pool_shape(const LayerSpec& layer, const NodeLabeling& labeling, std::size_t num_classes) {
    const auto L = static_cast<std::size_t>(std::max(labeling.alphabet_size, 1));
    if (layer.rule == RuleKind::propagation) {
        std::vector<int> d = layer.distances;
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        return {L * L * d.size(), L};
    }
    const std::size_t out = layer.out_dim ? layer.out_dim : num_classes;
    return {out * L, out};
}

inline RuleLayout build_layer_layout(const LayerSpec& layer, const LabeledGraph& g, const std::vector<int>& labels,
                                     int alphabet, const PropertyMap* distances, std::size_t num_classes) {
    if (layer.rule == RuleKind::propagation) {
        return layout_graph_propagation(g, labels, *distances, GraphRuleSpec{layer.distances, std::max(alphabet, 1)});
    }
    return layout_aggregation(labels, std::max(alphabet, 1), layer.out_dim ? layer.out_dim : num_classes);
}

inline bool needs_distances(const ModelSpec& spec) {
    return std::any_of(spec.layers.begin(), spec.layers.end(),
                       [](const LayerSpec& l) { return l.rule == RuleKind::propagation; });
}

/// Computes labelings and layouts from scratch.
inline PreparedData prepare(const GraphDataset& ds, const ModelSpec& spec, EnumerationBudget budget = {}) {
    spec.validate();
    PreparedData out;
    out.num_classes = ds.num_classes;
    for (const auto& layer : spec.layers) {
        out.labelings.push_back(compute_labeling(ds.graphs, layer.labeling, budget));
        out.pools.push_back(pool_shape(layer, out.labelings.back(), ds.num_classes));
    }
    if (needs_distances(spec)) {
        out.distances.reserve(ds.size());
        for (const auto& g : ds.graphs) out.distances.push_back(all_pairs_distances(g));
    }
    out.layouts.resize(ds.size());
    for (std::size_t g = 0; g < ds.size(); ++g) {
        for (std::size_t l = 0; l < spec.layers.size(); ++l) {
            out.layouts[g].push_back(build_layer_layout(spec.layers[l], ds.graphs[g], out.labelings[l].labels[g],
                                                        out.labelings[l].alphabet_size,
                                                        out.distances.empty() ? nullptr : &out.distances[g],
                                                        ds.num_classes));
        }
    }
    return out;
}

inline std::vector<double> input_signal(const LabeledGraph& g, InputSignal kind) {
    std::vector<double> x(g.node_count(), 1.0);
    if (kind == InputSignal::degree) {
        for (NodeId v = 0; v < g.node_count(); ++v) x[v] = static_cast<double>(g.degree(v));
    }
    return x;
}

struct LossResult {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Softmax cross-entropy with max subtraction; grad is softmax(scores) - onehot(target).
inline LossResult softmax_cross_entropy(std::span<const double> scores, std::size_t target) {
    if (target >= scores.size()) throw ContractError("class label outside the score vector");
    const double mx = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    LossResult r;
    r.grad.resize(scores.size());
    for (std::size_t c = 0; c < scores.size(); ++c) {
        r.grad[c] = std::exp(scores[c] - mx);
        sum += r.grad[c];
    }
    r.loss = std::log(sum) - (scores[target] - mx);
    for (auto& g : r.grad) g /= sum;
    r.grad[target] -= 1.0;
    return r;
}

inline std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// A RuleGNN: layer specs plus one flat parameter vector holding every layer's pools.
class RuleGnn {
public:
    RuleGnn() = default;

    RuleGnn(ModelSpec spec, const std::vector<PoolShape>& pools) : spec_(std::move(spec)) {
        spec_.validate();
        if (pools.size() != spec_.layers.size()) throw ContractError("one pool shape per layer expected");
        std::size_t offset = 0;
        for (const auto& p : pools) {
            PoolSlice s;
            s.weight_offset = offset;
            s.weight_count = p.weights;
            offset += p.weights;
            s.bias_offset = offset;
            s.bias_count = p.biases;
            offset += p.biases;
            slices_.push_back(s);
        }
        theta_.assign(offset, 0.0);
    }

    const ModelSpec& spec() const noexcept { return spec_; }
    const std::vector<PoolSlice>& slices() const noexcept { return slices_; }
    std::vector<double>& parameters() noexcept { return theta_; }
    const std::vector<double>& parameters() const noexcept { return theta_; }
    std::size_t parameter_count() const noexcept { return theta_.size(); }

    /// Uniform in [-a, a] with a = 1/sqrt(max(1, mean nonzeros per row)) per layer; the row
    /// statistic comes from `layouts` (any representative sample of the dataset).
    void initialize(const std::vector<std::vector<RuleLayout>>& layouts, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        for (std::size_t l = 0; l < slices_.size(); ++l) {
            double nnz = 0.0;
            double rows = 0.0;
            for (const auto& per_graph : layouts) {
                nnz += static_cast<double>(per_graph[l].nonzeros());
                rows += static_cast<double>(per_graph[l].out_dim());
            }
            const double a = 1.0 / std::sqrt(std::max(1.0, rows > 0 ? nnz / rows : 1.0));
            std::uniform_real_distribution<double> dist(-a, a);
            const auto& s = slices_[l];
            for (std::size_t i = 0; i < s.weight_count + s.bias_count; ++i) theta_[s.weight_offset + i] = dist(rng);
        }
    }

    std::vector<LayerCache> forward(const std::vector<RuleLayout>& layouts, std::span<const double> x) const {
        if (layouts.size() != spec_.layers.size()) throw ContractError("one layout per layer expected");
        std::vector<LayerCache> caches;
        caches.reserve(layouts.size());
        std::span<const double> in = x;
        for (std::size_t l = 0; l < layouts.size(); ++l) {
            caches.push_back(layer_forward(layouts[l], theta_, slices_[l], in, spec_.activation(l)));
            in = caches.back().output;
        }
        return caches;
    }

    std::vector<double> scores(const std::vector<RuleLayout>& layouts, std::span<const double> x) const {
        return forward(layouts, x).back().output;
    }

    /// Adds dL/dtheta for one sample into `grad`.
    void backward(const std::vector<RuleLayout>& layouts, const std::vector<LayerCache>& caches,
                  std::span<const double> dscores, std::span<double> grad) const {
        std::vector<double> upstream(dscores.begin(), dscores.end());
        for (std::size_t l = layouts.size(); l-- > 0;) {
            upstream = layer_backward(layouts[l], theta_, slices_[l], caches[l], spec_.activation(l), upstream, grad, l > 0);
        }
    }

private:
    ModelSpec spec_;
    std::vector<PoolSlice> slices_;
    std::vector<double> theta_;
};

} // namespace rulegnn
