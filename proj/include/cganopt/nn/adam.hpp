#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cganopt/nn/network.hpp"

namespace cganopt::nn {

struct OptimizerConfig {
    double learning_rate = 0.0002;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// One bias-corrected Adam update of a single tensor; `step` counts from 1.
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                 std::span<double> second_moment, std::uint64_t step, const OptimizerConfig& cfg);

class Adam {
public:
    Adam(const Network& net, OptimizerConfig cfg = {});

    void step(Network& net, const Gradients& grads);
    std::uint64_t steps() const { return step_; }
    const OptimizerConfig& config() const { return cfg_; }

private:
    OptimizerConfig cfg_;
    std::vector<std::vector<double>> first_;
    std::vector<std::vector<double>> second_;
    std::uint64_t step_ = 0;
};

}  // namespace cganopt::nn
