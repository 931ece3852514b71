#pragma once

// Dense kernels shared by the layers. Matrices are row-major; `in_stride` is
// the distance between consecutive input rows, which lets convolution windows
// overlap without an im2col copy.

#include <cstddef>
#include <span>

namespace sxsenti::kernels {

/// out[rows x m] (+)= in[rows x n] * W[m x n]^T
void matmul_nt(const double* in, std::size_t in_stride, const double* weight, double* out,
               std::size_t rows, std::size_t n, std::size_t m, bool accumulate);

/// grad_in[rows x n] += grad_out[rows x m] * W[m x n]
void matmul_nn_acc(const double* grad_out, const double* weight, double* grad_in,
                   std::size_t in_stride, std::size_t rows, std::size_t n, std::size_t m);

/// grad_w[m x n] += grad_out[rows x m]^T * in[rows x n]
void matmul_tn_acc(const double* grad_out, const double* in, std::size_t in_stride, double* grad_w,
                   std::size_t rows, std::size_t n, std::size_t m);

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace sxsenti::kernels
