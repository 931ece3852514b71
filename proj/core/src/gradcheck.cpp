#include "sxsenti/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "sxsenti/error.hpp"

namespace sxsenti {

double relative_error(double analytic, double numeric) noexcept {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(const std::function<double()>& loss, std::span<const GradTarget> targets,
                           double eps) {
  GradCheckResult result;
  for (const GradTarget& target : targets) {
    if (!target.value->same_shape(*target.analytic)) {
      throw ShapeError("grad_check: analytic gradient shape differs for " + target.name);
    }
    auto& values = target.value->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double plus = loss();
      values[i] = saved - eps;
      const double minus = loss();
      values[i] = saved;

      const double numeric = (plus - minus) / (2.0 * eps);
      const double analytic = (*target.analytic)[i];
      const double err = relative_error(analytic, numeric);
      ++result.components;
      if (err > result.max_relative_error || result.worst_target.empty()) {
        result.max_relative_error = std::max(result.max_relative_error, err);
        result.worst_target = target.name;
        result.worst_index = i;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace sxsenti
