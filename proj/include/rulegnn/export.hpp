#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "model.hpp"

namespace rulegnn {

/// One nonzero weight of a layer applied to one graph: the signal flows from node `src` into row
/// `dst`. For aggregation layers `dst` is an output unit, `label_dst` is 0 and `property` is -1.
struct WeightRecord {
    std::size_t layer = 0;
    std::size_t src = 0;
    std::size_t dst = 0;
    int label_src = 0;
    int label_dst = 0;
    std::int32_t property = -1;
    std::uint32_t index = 0;
    double weight = 0;
};

struct BiasRecord {
    std::size_t layer = 0;
    std::size_t row = 0;
    int label = 0;
    std::uint32_t index = 0;
    double bias = 0;
};

struct WeightExport {
    std::size_t graph = 0;
    std::vector<WeightRecord> weights;
    std::vector<BiasRecord> biases;
};

/// Projects the model's parameters onto the layouts of one graph. Layers are numbered from 1.
inline WeightExport export_weights(const RuleGnn& model, const PreparedData& data, std::size_t graph) {
    if (graph >= data.layouts.size()) {
        throw ArgumentError("graph index " + std::to_string(graph) + " outside [0, " +
                            std::to_string(data.layouts.size()) + ")");
    }
    WeightExport out;
    out.graph = graph;
    const auto& theta = model.parameters();
    const auto& spec = model.spec();
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const auto& layout = data.layouts[graph][l];
        const auto& labels = data.labelings[l].labels[graph];
        const auto& slice = model.slices()[l];
        const bool propagation = spec.layers[l].rule == RuleKind::propagation;
        for (const auto& e : layout.weights()) {
            WeightRecord r;
            r.layer = l + 1;
            r.src = e.col;
            r.dst = e.row;
            r.label_src = labels[e.col];
            r.label_dst = propagation ? labels[e.row] : 0;
            r.property = propagation ? data.distances[graph].at(e.row, e.col) : -1;
            r.index = e.index;
            r.weight = theta[slice.weight_offset + e.index - 1];
            out.weights.push_back(r);
        }
        for (std::size_t row = 0; row < layout.out_dim(); ++row) {
            const auto b = layout.bias_index()[row];
            if (b == 0) continue;
            out.biases.push_back({l + 1, row, propagation ? labels[row] : 0, b, theta[slice.bias_offset + b - 1]});
        }
    }
    return out;
}

/// Keeps, per layer, the `k` largest positive and the `k` most negative weights (k = 0 keeps all).
/// Zero weights are dropped by any positive k. Record order is otherwise preserved.
inline WeightExport filter_top_k(const WeightExport& in, std::size_t k) {
    if (k == 0) return in;
    WeightExport out;
    out.graph = in.graph;
    out.biases = in.biases;
    std::vector<char> keep(in.weights.size(), 0);
    std::size_t layers = 0;
    for (const auto& r : in.weights) layers = std::max(layers, r.layer);
    for (std::size_t layer = 1; layer <= layers; ++layer) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < in.weights.size(); ++i) {
            if (in.weights[i].layer != layer) continue;
            if (in.weights[i].weight > 0) pos.push_back(i);
            else if (in.weights[i].weight < 0) neg.push_back(i);
        }
        const auto by_magnitude = [&](std::size_t a, std::size_t b) {
            return std::fabs(in.weights[a].weight) > std::fabs(in.weights[b].weight);
        };
        std::stable_sort(pos.begin(), pos.end(), by_magnitude);
        std::stable_sort(neg.begin(), neg.end(), by_magnitude);
        for (std::size_t i = 0; i < std::min(k, pos.size()); ++i) keep[pos[i]] = 1;
        for (std::size_t i = 0; i < std::min(k, neg.size()); ++i) keep[neg[i]] = 1;
    }
    for (std::size_t i = 0; i < in.weights.size(); ++i) {
        if (keep[i]) out.weights.push_back(in.weights[i]);
    }
    return out;
}

/// Tab-separated records. Columns: kind layer src dst label_src label_dst property index value.
/// Bias rows use kind "bias", an empty src and the row's label in label_dst.
inline std::string to_tsv(const WeightExport& e) {
    std::ostringstream out;
    out.precision(17);
    out << "kind\tlayer\tsrc\tdst\tlabel_src\tlabel_dst\tproperty\tindex\tvalue\n";
    for (const auto& r : e.weights) {
        out << "weight\t" << r.layer << '\t' << r.src << '\t' << r.dst << '\t' << r.label_src << '\t' << r.label_dst
            << '\t' << r.property << '\t' << r.index << '\t' << r.weight << '\n';
    }
    for (const auto& b : e.biases) {
        out << "bias\t" << b.layer << "\t\t" << b.row << "\t\t" << b.label << "\t\t" << b.index << '\t' << b.bias << '\n';
    }
    return out.str();
}

/// Magnitude class 1..3 of |v| relative to `max_abs` (thirds); 1 when max_abs is 0.
inline int magnitude_class(double v, double max_abs) {
    if (max_abs <= 0) return 1;
    const double r = std::fabs(v) / max_abs;
    return r <= 1.0 / 3 ? 1 : (r <= 2.0 / 3 ? 2 : 3);
}

/// Graphviz digraph of one propagation layer on its graph. Edge colour encodes sign
/// (red positive, blue negative, gray zero), pen width the magnitude class, node width the
/// magnitude class of the node's bias. Every element also carries its classes in `class`.
inline std::string to_dot(const WeightExport& e, const LabeledGraph& g, std::size_t layer) {
    double max_w = 0;
    double max_b = 0;
    for (const auto& r : e.weights) {
        if (r.layer == layer) max_w = std::max(max_w, std::fabs(r.weight));
    }
    std::vector<double> bias(g.node_count(), 0.0);
    for (const auto& b : e.biases) {
        if (b.layer == layer && b.row < bias.size()) {
            bias[b.row] = b.bias;
            max_b = std::max(max_b, std::fabs(b.bias));
        }
    }
    static constexpr double pen[] = {0, 1.0, 2.5, 4.0};
    static constexpr double width[] = {0, 0.3, 0.5, 0.7};
    std::ostringstream out;
    out << "digraph layer" << layer << " {\n  node [shape=circle, fixedsize=true];\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const int c = magnitude_class(bias[v], max_b);
        out << "  " << v << " [label=\"" << v << "\", width=" << width[c] << ", class=\"size" << c << "\"];\n";
    }
    for (const auto& r : e.weights) {
        if (r.layer != layer) continue;
        const int c = magnitude_class(r.weight, max_w);
        const char* colour = r.weight > 0 ? "red" : (r.weight < 0 ? "blue" : "gray");
        const char* sign = r.weight > 0 ? "pos" : (r.weight < 0 ? "neg" : "zero");
        out << "  " << r.src << " -> " << r.dst << " [color=" << colour << ", penwidth=" << pen[c] << ", class=\"" << sign
            << " w" << c << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace rulegnn
