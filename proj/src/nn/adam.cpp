#include "cganopt/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace cganopt::nn {

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                 std::span<double> second_moment, std::uint64_t step, const OptimizerConfig& cfg) {
    if (step == 0) throw std::invalid_argument("adam_update: step counts from 1");
    if (grads.size() != params.size() || first_moment.size() != params.size() ||
        second_moment.size() != params.size())
        throw std::invalid_argument("adam_update: state shape mismatch");
    const double t = static_cast<double>(step);
    const double correction1 = 1.0 - std::pow(cfg.beta1, t);
    const double correction2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        first_moment[i] = cfg.beta1 * first_moment[i] + (1.0 - cfg.beta1) * grads[i];
        second_moment[i] = cfg.beta2 * second_moment[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double m_hat = first_moment[i] / correction1;
        const double v_hat = second_moment[i] / correction2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

Adam::Adam(const Network& net, OptimizerConfig cfg) : cfg_(cfg) {
    for (const auto& p : net.parameters()) {
        first_.emplace_back(p.size(), 0.0);
        second_.emplace_back(p.size(), 0.0);
    }
}

void Adam::step(Network& net, const Gradients& grads) {
    auto params = net.parameters();
    if (params.size() != grads.size() || params.size() != first_.size())
        throw std::invalid_argument("Adam::step: gradient tensors do not match the network");
    ++step_;
    for (std::size_t k = 0; k < params.size(); ++k)
        adam_update(params[k], grads[k], first_[k], second_[k], step_, cfg_);
}

}  // namespace cganopt::nn
