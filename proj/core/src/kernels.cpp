#include "kernels.hpp"

#include <algorithm>
#include <vector>

namespace sxsenti::kernels {

void matmul_nt(const double* in, std::size_t in_stride, const double* weight, double* out,
               std::size_t rows, std::size_t n, std::size_t m, bool accumulate) {
  if (!accumulate) std::fill(out, out + rows * m, 0.0);
  if (rows == 0 || n == 0 || m == 0) return;
  // Transposing W turns the inner loop into a contiguous axpy.
  thread_local std::vector<double> wt;
  wt.resize(n * m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* w = weight + i * n;
    for (std::size_t k = 0; k < n; ++k) wt[k * m + i] = w[k];
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = in + r * in_stride;
    double* y = out + r * m;
    for (std::size_t k = 0; k < n; ++k) {
      if (x[k] != 0.0) axpy(x[k], wt.data() + k * m, y, m);
    }
  }
}

void matmul_nn_acc(const double* grad_out, const double* weight, double* grad_in,
                   std::size_t in_stride, std::size_t rows, std::size_t n, std::size_t m) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* g = grad_out + r * m;
    double* dx = grad_in + r * in_stride;
    for (std::size_t i = 0; i < m; ++i) {
      if (g[i] != 0.0) axpy(g[i], weight + i * n, dx, n);
    }
  }
}

void matmul_tn_acc(const double* grad_out, const double* in, std::size_t in_stride, double* grad_w,
                   std::size_t rows, std::size_t n, std::size_t m) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* g = grad_out + r * m;
    const double* x = in + r * in_stride;
    for (std::size_t i = 0; i < m; ++i) {
      if (g[i] != 0.0) axpy(g[i], x, grad_w + i * n, n);
    }
  }
}

}  // namespace sxsenti::kernels
