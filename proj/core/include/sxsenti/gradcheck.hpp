#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sxsenti/tensor.hpp"

namespace sxsenti {

/// One tensor to perturb together with the analytic gradient computed for it.
struct GradTarget {
  std::string name;
  Tensor* value;
  const Tensor* analytic;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_target;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t components = 0;
};

/// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric) noexcept;

/// Central differences (f(x+eps) - f(x-eps)) / (2 eps) on every component of
/// every target, compared with the analytic gradients. `loss` must be a pure
/// function of the targets' current values (eval mode or frozen dropout).
/// Each component is restored after it is probed.
GradCheckResult grad_check(const std::function<double()>& loss, std::span<const GradTarget> targets,
                           double eps = 1e-5);

}  // namespace sxsenti

namespace sxsenti {

struct GradSuiteCase {
  std::string name;
  GradCheckResult result;
};

/// Finite-difference checks of every layer and of both full models on small
/// random problems: linear, conv1d+relu+masked pool, layer_norm, gru_cell,
/// bigru+linear+loss, the CNN and the GRU classifier (dropout frozen).
std::vector<GradSuiteCase> run_gradient_suite(std::uint64_t seed);

}  // namespace sxsenti
