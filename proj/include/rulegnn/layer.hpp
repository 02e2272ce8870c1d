#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "layout.hpp"

namespace rulegnn {

enum class Activation { tanh, identity };

inline std::string to_string(Activation a) { return a == Activation::tanh ? "tanh" : "identity"; }

inline Activation parse_activation(const std::string& text) {
    if (text == "tanh") return Activation::tanh;
    if (text == "identity" || text == "linear") return Activation::identity;
    throw ArgumentError("unknown activation '" + text + "'");
}

inline double activate(Activation a, double z) { return a == Activation::tanh ? std::tanh(z) : z; }

/// Derivative expressed through the activation output y = activate(z).
inline double activate_grad(Activation a, double y) { return a == Activation::tanh ? 1.0 - y * y : 1.0; }

/// Where one layer's pools live inside the model's flat parameter vector.
struct PoolSlice {
    std::size_t weight_offset = 0;
    std::size_t weight_count = 0;
    std::size_t bias_offset = 0;
    std::size_t bias_count = 0;
};

struct LayerCache {
    std::vector<double> input;
    std::vector<double> pre;
    std::vector<double> output;
};

/// y = act(W x + b) with W and b read through the layout from `theta`.
inline LayerCache layer_forward(const RuleLayout& layout, std::span<const double> theta, const PoolSlice& pool,
                                std::span<const double> x, Activation act) {
    if (x.size() != layout.in_dim()) {
        throw ContractError("input has " + std::to_string(x.size()) + " entries, layout expects " +
                            std::to_string(layout.in_dim()));
    }
    if (layout.weight_pool_size() > pool.weight_count || layout.bias_pool_size() > pool.bias_count) {
        throw ContractError("layout addresses more parameters than the layer owns");
    }
    LayerCache c;
    c.input.assign(x.begin(), x.end());
    c.pre.assign(layout.out_dim(), 0.0);
    // Pool indices are 1-based.
    const auto w = theta.subspan(pool.weight_offset, pool.weight_count);
    for (const auto& e : layout.weights()) c.pre[e.row] += w[e.index - 1] * x[e.col];
    const auto b = theta.subspan(pool.bias_offset, pool.bias_count);
    const auto& bias = layout.bias_index();
    for (std::size_t r = 0; r < c.pre.size(); ++r) {
        if (bias[r] != 0) c.pre[r] += b[bias[r] - 1];
    }
    c.output.resize(c.pre.size());
    for (std::size_t r = 0; r < c.pre.size(); ++r) c.output[r] = activate(act, c.pre[r]);
    return c;
}

/// Accumulates dL/dtheta into `grad` (same layout as theta) and returns dL/dx.
/// Cells sharing an index add their contributions: dL/dw_k = sum over cells (i, j) with index k
/// of delta_i * x_j, where delta = upstream * act'(pre).
inline std::vector<double> layer_backward(const RuleLayout& layout, std::span<const double> theta, const PoolSlice& pool,
                                          const LayerCache& cache, Activation act, std::span<const double> upstream,
                                          std::span<double> grad, bool want_input_grad = true) {
    if (upstream.size() != layout.out_dim()) throw ContractError("upstream gradient has the wrong length");
    std::vector<double> delta(upstream.size());
    for (std::size_t r = 0; r < delta.size(); ++r) delta[r] = upstream[r] * activate_grad(act, cache.output[r]);
    const auto gw = grad.subspan(pool.weight_offset, pool.weight_count);
    const auto w = theta.subspan(pool.weight_offset, pool.weight_count);
    std::vector<double> dx(want_input_grad ? layout.in_dim() : 0, 0.0);
    for (const auto& e : layout.weights()) {
        gw[e.index - 1] += delta[e.row] * cache.input[e.col];
        if (want_input_grad) dx[e.col] += w[e.index - 1] * delta[e.row];
    }
    const auto gb = grad.subspan(pool.bias_offset, pool.bias_count);
    const auto& bias = layout.bias_index();
    for (std::size_t r = 0; r < delta.size(); ++r) {
        if (bias[r] != 0) gb[bias[r] - 1] += delta[r];
    }
    return dx;
}

} // namespace rulegnn
