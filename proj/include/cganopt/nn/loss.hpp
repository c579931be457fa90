#pragma once

#include <span>

#include "cganopt/nn/matrix.hpp"

namespace cganopt::nn {

inline constexpr double kProbabilityClamp = 1e-7;

struct LossResult {
    double loss;
    Matrix gradient;  // d loss / d prediction, same shape as the predictions
};

// Mean binary cross-entropy with predictions clamped to [1e-7, 1-1e-7].
LossResult bce_loss(const Matrix& predictions, std::span<const double> targets);

// Fraction of predictions on the target's side of 0.5.
double binary_accuracy(const Matrix& predictions, std::span<const double> targets);

}  // namespace cganopt::nn
