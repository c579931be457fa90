#include "cganopt/nn/kernels.hpp"

#include <stdexcept>

namespace cganopt::nn {

Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row count mismatch");
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = out.row(r);
        auto ra = a.row(r);
        auto rb = b.row(r);
        std::copy(ra.begin(), ra.end(), dst.begin());
        std::copy(rb.begin(), rb.end(), dst.begin() + static_cast<long>(a.cols()));
    }
    return out;
}

namespace kernels {

namespace {

constexpr std::size_t kParallelWork = 1 << 14;

void check_affine(const Matrix& a, const Matrix& b, std::span<const double> bias) {
    if (a.cols() != b.rows()) throw std::invalid_argument("affine: inner dimension mismatch");
    if (!bias.empty() && bias.size() != b.cols()) throw std::invalid_argument("affine: bias width mismatch");
}

// out[0..n) += av * row[0..n)
inline void axpy(double* __restrict out, const double* __restrict row, double av, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) out[j] += av * row[j];
}

// Row kernels stay out of line so the serial and OpenMP paths run the same code.
[[gnu::noinline]] void affine_row(const Matrix& a, const Matrix& b, std::span<const double> bias, Matrix& c, std::size_t i) {
    const std::size_t k = a.cols(), n = b.cols();
    double* out = c.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = bias.empty() ? 0.0 : bias[j];
    const double* arow = a.data() + i * k;
    for (std::size_t p = 0; p < k; ++p) axpy(out, b.data() + p * n, arow[p], n);
}

[[gnu::noinline]] void tn_row(const Matrix& a, const Matrix& g, Matrix& c, std::size_t p) {
    const std::size_t m = a.rows(), k = a.cols(), n = g.cols();
    double* out = c.data() + p * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) axpy(out, g.data() + i * n, a.data()[i * k + p], n);
}

// `wt` is W transposed (n x k); accumulation over j runs in ascending order,
// the same order as a direct dot product with the rows of W.
[[gnu::noinline]] void nt_row(const Matrix& g, const Matrix& wt, Matrix& c, std::size_t i) {
    const std::size_t n = g.cols(), k = wt.cols();
    const double* grow = g.data() + i * n;
    double* out = c.data() + i * k;
    for (std::size_t p = 0; p < k; ++p) out[p] = 0.0;
    for (std::size_t j = 0; j < n; ++j) axpy(out, wt.data() + j * k, grow[j], k);
}

Matrix transpose(const Matrix& w) {
    Matrix t(w.cols(), w.rows());
    for (std::size_t r = 0; r < w.rows(); ++r)
        for (std::size_t c = 0; c < w.cols(); ++c) t(c, r) = w(r, c);
    return t;
}

}  // namespace

Matrix affine(const Matrix& a, const Matrix& b, std::span<const double> bias) {
    check_affine(a, b, bias);
    Matrix c(a.rows(), b.cols());
    const auto m = static_cast<long>(a.rows());
    const bool big = a.rows() * a.cols() * b.cols() > kParallelWork;
#pragma omp parallel for schedule(static) if (big)
    for (long i = 0; i < m; ++i) affine_row(a, b, bias, c, static_cast<std::size_t>(i));
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& g) {
    if (a.rows() != g.rows()) throw std::invalid_argument("matmul_tn: batch mismatch");
    Matrix c(a.cols(), g.cols());
    const auto k = static_cast<long>(a.cols());
    const bool big = a.rows() * a.cols() * g.cols() > kParallelWork;
#pragma omp parallel for schedule(static) if (big)
    for (long p = 0; p < k; ++p) tn_row(a, g, c, static_cast<std::size_t>(p));
    return c;
}

Matrix matmul_nt(const Matrix& g, const Matrix& w) {
    if (g.cols() != w.cols()) throw std::invalid_argument("matmul_nt: width mismatch");
    Matrix c(g.rows(), w.rows());
    const auto m = static_cast<long>(g.rows());
    const bool big = g.rows() * g.cols() * w.rows() > kParallelWork;
    const Matrix wt = transpose(w);
#pragma omp parallel for schedule(static) if (big)
    for (long i = 0; i < m; ++i) nt_row(g, wt, c, static_cast<std::size_t>(i));
    return c;
}

namespace serial {

Matrix affine(const Matrix& a, const Matrix& b, std::span<const double> bias) {
    check_affine(a, b, bias);
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) affine_row(a, b, bias, c, i);
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& g) {
    if (a.rows() != g.rows()) throw std::invalid_argument("matmul_tn: batch mismatch");
    Matrix c(a.cols(), g.cols());
    for (std::size_t p = 0; p < a.cols(); ++p) tn_row(a, g, c, p);
    return c;
}

Matrix matmul_nt(const Matrix& g, const Matrix& w) {
    if (g.cols() != w.cols()) throw std::invalid_argument("matmul_nt: width mismatch");
    Matrix c(g.rows(), w.rows());
    const Matrix wt = transpose(w);
    for (std::size_t i = 0; i < g.rows(); ++i) nt_row(g, wt, c, i);
    return c;
}

}  // namespace serial
}  // namespace kernels
}  // namespace cganopt::nn
