#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sxsenti/layers.hpp"

namespace sxsenti {

enum class OptimizerKind : std::uint8_t { adam, adamw };

std::string_view to_string(OptimizerKind kind) noexcept;
std::optional<OptimizerKind> parse_optimizer_kind(std::string_view text) noexcept;

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Decoupled decay, used by AdamW only.
  double weight_decay = 0.01;
};

/// Adam with bias correction. AdamW first shrinks every parameter by
/// lr * weight_decay, then applies the Adam update.
class Optimizer {
 public:
  Optimizer(std::vector<Parameter*> params, OptimizerConfig config);

  void step();
  void zero_grad();

  std::uint64_t steps() const noexcept { return t_; }
  const OptimizerConfig& config() const noexcept { return config_; }

  const Tensor& first_moment(std::size_t i) const { return m_.at(i); }
  const Tensor& second_moment(std::size_t i) const { return v_.at(i); }

 private:
  std::vector<Parameter*> params_;
  OptimizerConfig config_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::uint64_t t_ = 0;
};

}  // namespace sxsenti
