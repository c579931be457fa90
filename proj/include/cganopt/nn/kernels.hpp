#pragma once

#include "cganopt/nn/matrix.hpp"

namespace cganopt::nn::kernels {

// OpenMP kernels. Each output element is accumulated in a fixed order, so
// results are bit-identical to the serial versions for any thread count.

// C = A * B + bias (bias broadcast over rows; may be empty).
Matrix affine(const Matrix& a, const Matrix& b, std::span<const double> bias);
// A^T * G, the weight gradient of a dense layer.
Matrix matmul_tn(const Matrix& a, const Matrix& g);
// G * W^T, the input gradient of a dense layer.
Matrix matmul_nt(const Matrix& g, const Matrix& w);

namespace serial {
Matrix affine(const Matrix& a, const Matrix& b, std::span<const double> bias);
Matrix matmul_tn(const Matrix& a, const Matrix& g);
Matrix matmul_nt(const Matrix& g, const Matrix& w);
}  // namespace serial

}  // namespace cganopt::nn::kernels
