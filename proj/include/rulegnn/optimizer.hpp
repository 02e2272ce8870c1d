#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace rulegnn {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moments start at zero; `step()` counts completed updates.
class Adam {
public:
    Adam() = default;
    explicit Adam(std::size_t size, AdamConfig config = {}) : config_(config), m_(size, 0.0), v_(size, 0.0) {}

    void update(std::span<double> theta, std::span<const double> grad, double lr) {
        if (theta.size() != m_.size() || grad.size() != m_.size()) throw ContractError("Adam state does not match the parameters");
        ++t_;
        const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
            v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
            theta[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.epsilon);
        }
    }

    std::uint64_t step() const noexcept { return t_; }
    const std::vector<double>& first_moment() const noexcept { return m_; }
    const std::vector<double>& second_moment() const noexcept { return v_; }

private:
    AdamConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::uint64_t t_ = 0;
};

/// Step decay: lr * decay^(epoch / every). `every` of 0 keeps the rate constant.
inline double lr_schedule(std::size_t epoch, double base_lr, double decay, std::size_t every) {
    if (every == 0) return base_lr;
    return base_lr * std::pow(decay, static_cast<double>(epoch / every));
}

} // namespace rulegnn
