#include "cganopt/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cganopt::nn {

LossResult bce_loss(const Matrix& predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) throw std::invalid_argument("bce_loss: size mismatch");
    if (targets.empty()) throw std::invalid_argument("bce_loss: empty batch");
    const double n = static_cast<double>(targets.size());
    LossResult r{0.0, Matrix(predictions.rows(), predictions.cols())};
    auto p = predictions.values();
    auto g = r.gradient.values();
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double pc = std::clamp(p[k], kProbabilityClamp, 1.0 - kProbabilityClamp);
        const double t = targets[k];
        r.loss -= t * std::log(pc) + (1.0 - t) * std::log(1.0 - pc);
        g[k] = (-t / pc + (1.0 - t) / (1.0 - pc)) / n;
    }
    r.loss /= n;
    return r;
}

double binary_accuracy(const Matrix& predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size() || targets.empty())
        throw std::invalid_argument("binary_accuracy: size mismatch");
    auto p = predictions.values();
    std::size_t correct = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if ((p[k] > 0.5) == (targets[k] > 0.5)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(targets.size());
}

}  // namespace cganopt::nn
