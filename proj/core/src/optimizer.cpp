#include "sxsenti/optimizer.hpp"

#include <cmath>

#include "sxsenti/error.hpp"

namespace sxsenti {

std::string_view to_string(OptimizerKind kind) noexcept {
  return kind == OptimizerKind::adamw ? "adamw" : "adam";
}

std::optional<OptimizerKind> parse_optimizer_kind(std::string_view text) noexcept {
  if (text == "adam") return OptimizerKind::adam;
  if (text == "adamw") return OptimizerKind::adamw;
  return std::nullopt;
}

Optimizer::Optimizer(std::vector<Parameter*> params, OptimizerConfig config)
    : params_(std::move(params)), config_(config) {
  if (!(config_.learning_rate >= 0.0)) throw Error("learning rate must be non-negative");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Parameter* p : params_) {
    m_.push_back(Tensor::zeros_like(p->value));
    v_.push_back(Tensor::zeros_like(p->value));
  }
}

void Optimizer::step() {
  ++t_;
  const double lr = config_.learning_rate;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double decay = config_.kind == OptimizerKind::adamw ? lr * config_.weight_decay : 0.0;

  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    if (!p.grad.same_shape(p.value)) throw ShapeError("gradient shape differs from parameter " + p.name);
    auto& value = p.value.values();
    const auto& grad = p.grad.values();
    auto& m = m_[i].values();
    auto& v = v_[i].values();
    for (std::size_t k = 0; k < value.size(); ++k) {
      if (decay != 0.0) value[k] -= decay * value[k];
      const double g = grad[k];
      m[k] = b1 * m[k] + (1.0 - b1) * g;
      v[k] = b2 * v[k] + (1.0 - b2) * g * g;
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      value[k] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

void Optimizer::zero_grad() {
  for (Parameter* p : params_) p->grad.fill(0.0);
}

}  // namespace sxsenti
