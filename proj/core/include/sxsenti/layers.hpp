#pragma once

// Differentiable building blocks. Every layer follows one contract:
//   forward(...)  computes outputs and caches what backward needs;
//   backward(g)   consumes the cache, returns input gradients and ADDS
//                 parameter gradients into Parameter::grad.
// Gradients accumulate until zero_grad(). Calling backward without a fresh
// forward throws.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sxsenti/embeddings.hpp"
#include "sxsenti/rng.hpp"
#include "sxsenti/tensor.hpp"

namespace sxsenti {

enum class Mode : std::uint8_t { train, eval };

struct Parameter {
  Parameter(std::string name, Tensor value)
      : name(std::move(name)), value(std::move(value)), grad(Tensor::zeros_like(this->value)) {}

  std::string name;
  Tensor value;
  Tensor grad;
};

class Layer {
 public:
  virtual ~Layer() = default;

  /// Trainable parameters in a fixed order; empty for parameter-free layers.
  virtual std::vector<Parameter*> parameters() { return {}; }

  void zero_grad();

 protected:
  /// Flags the cache as consumed; throws when backward runs twice.
  void consume_cache();
  void mark_cached() noexcept { cached_ = true; }

 private:
  bool cached_ = false;
};

/// Glorot/Xavier uniform: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
void init_glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

class Embedding : public Layer {
 public:
  Embedding(std::size_t vocab_size, std::size_t dim);
  explicit Embedding(Tensor weight);

  /// ids are [batch x steps] row-major. Output [batch x steps x dim].
  Tensor forward(std::span<const TokenId> ids, std::size_t batch, std::size_t steps);
  /// Scatter-adds into the weight gradient; the pad row stays at zero.
  void backward(const Tensor& grad_out);

  std::vector<Parameter*> parameters() override { return {&weight_}; }
  Parameter& weight() noexcept { return weight_; }
  std::size_t dim() const noexcept { return weight_.value.dim(1); }
  std::size_t vocab_size() const noexcept { return weight_.value.dim(0); }

 private:
  Parameter weight_;
  std::vector<TokenId> ids_;
};

/// Valid 1-D convolution over time. filters [F x width x dim], bias [F].
class Conv1d : public Layer {
 public:
  Conv1d(std::size_t filters, std::size_t width, std::size_t dim);

  /// input [B x T x dim] -> [B x (T - width + 1) x F]. Throws ShapeError when T < width.
  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& grad_out);

  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  Parameter& weight() noexcept { return weight_; }
  Parameter& bias() noexcept { return bias_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t filters() const noexcept { return filters_; }

 private:
  std::size_t filters_;
  std::size_t width_;
  std::size_t dim_;
  Parameter weight_;
  Parameter bias_;
  Tensor input_;
};

class Relu : public Layer {
 public:
  Tensor forward(const Tensor& input);
  /// Gradient passes where the input was > 0.
  Tensor backward(const Tensor& grad_out);

 private:
  Tensor input_;
};

/// Max over the first `lengths[b]` positions of each row; padded positions never win.
class MaskedMaxOverTime : public Layer {
 public:
  /// input [B x T x F] -> [B x F]. Throws when a length is 0 or exceeds T.
  Tensor forward(const Tensor& input, std::span<const std::size_t> lengths);
  /// Routes each gradient to its argmax (first occurrence on ties).
  Tensor backward(const Tensor& grad_out);

 private:
  std::vector<std::size_t> input_shape_;
  std::vector<std::size_t> argmax_;
};

/// Inverted dropout: survivors scaled by 1/(1-p) in train mode, identity in eval mode.
class Dropout : public Layer {
 public:
  Dropout(double p, std::uint64_t seed);

  Tensor forward(const Tensor& input, Mode mode);
  Tensor backward(const Tensor& grad_out);

  /// While frozen, train-mode forwards reuse the previous mask (gradient checks).
  void freeze_mask(bool frozen) noexcept { frozen_ = frozen; }
  double p() const noexcept { return p_; }
  void reseed(std::uint64_t seed) { rng_ = Rng(seed); }

 private:
  double p_;
  Rng rng_;
  bool frozen_ = false;
  bool identity_ = true;
  std::vector<double> mask_;
};

/// y = x W^T + b with W [out x in].
class Linear : public Layer {
 public:
  Linear(std::size_t in_features, std::size_t out_features);

  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& grad_out);

  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  Parameter& weight() noexcept { return weight_; }
  Parameter& bias() noexcept { return bias_; }

 private:
  std::size_t in_;
  std::size_t out_;
  Parameter weight_;
  Parameter bias_;
  Tensor input_;
};

/// Per-row normalization with 1/n variance, then gain and bias.
class LayerNorm : public Layer {
 public:
  explicit LayerNorm(std::size_t features, double eps = 1e-5);

  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& grad_out);

  std::vector<Parameter*> parameters() override { return {&gain_, &bias_}; }
  Parameter& gain() noexcept { return gain_; }
  Parameter& bias() noexcept { return bias_; }

 private:
  std::size_t n_;
  double eps_;
  Parameter gain_;
  Parameter bias_;
  Tensor normalized_;
  std::vector<double> inv_std_;
};

/// State kept by one GRU step for backpropagation through time.
struct GruStepCache {
  Tensor x;       // [B x d]
  Tensor h_prev;  // [B x H]
  Tensor z;       // update gate
  Tensor r;       // reset gate
  Tensor cand;    // candidate state
  Tensor rh;      // r * h_prev
};

/// z = s(W_z x + U_z h + b_z), r = s(W_r x + U_r h + b_r),
/// c = tanh(W_c x + U_c (r*h) + b_c), h' = (1 - z) * h + z * c.
/// Weights are stacked gate-major: W [3H x d], U [3H x H], b [3H] in order z, r, c.
class GruCell : public Layer {
 public:
  GruCell(std::size_t input_dim, std::size_t hidden, std::string prefix = {});

  /// One step over a batch. When `cache` is non-null it is filled for step_backward.
  Tensor step(const Tensor& x, const Tensor& h_prev, GruStepCache* cache) const;
  /// Accumulates parameter gradients; returns {dx, dh_prev}.
  std::pair<Tensor, Tensor> step_backward(const GruStepCache& cache, const Tensor& grad_h);

  /// Single-step layer interface.
  Tensor forward(const Tensor& x, const Tensor& h_prev);
  std::pair<Tensor, Tensor> backward(const Tensor& grad_h);

  std::vector<Parameter*> parameters() override { return {&w_, &u_, &b_}; }
  Parameter& input_weights() noexcept { return w_; }
  Parameter& recurrent_weights() noexcept { return u_; }
  Parameter& bias() noexcept { return b_; }
  std::size_t input_dim() const noexcept { return d_; }
  std::size_t hidden() const noexcept { return h_; }

 private:
  std::size_t d_;
  std::size_t h_;
  Parameter w_;
  Parameter u_;
  Parameter b_;
  GruStepCache cache_;
};

/// Bidirectional GRU that only visits the first `lengths[b]` positions of each
/// row and returns the mean of the two final states.
class BiGru : public Layer {
 public:
  BiGru(std::size_t input_dim, std::size_t hidden);

  /// input [B x T x d] -> [B x H]
  Tensor forward(const Tensor& input, std::span<const std::size_t> lengths);
  /// Returns the gradient with respect to the input [B x T x d].
  Tensor backward(const Tensor& grad_out);

  std::vector<Parameter*> parameters() override;
  GruCell& forward_cell() noexcept { return fwd_; }
  GruCell& backward_cell() noexcept { return bwd_; }
  std::size_t hidden() const noexcept { return fwd_.hidden(); }

 private:
  Tensor run_direction(const Tensor& input, bool reverse, std::vector<GruStepCache>& caches);
  void backprop_direction(const Tensor& grad_final, bool reverse, GruCell& cell,
                          std::vector<GruStepCache>& caches, Tensor& grad_input);

  GruCell fwd_;
  GruCell bwd_;
  std::vector<std::size_t> lengths_;
  std::vector<std::size_t> input_shape_;
  std::vector<GruStepCache> fwd_caches_;
  std::vector<GruStepCache> bwd_caches_;
};

struct LossResult {
  double loss = 0.0;
  Tensor grad;  // d loss / d logits
};

/// Mean negative log-softmax of the target class, max-subtracted.
/// Gradient is (softmax - onehot) / B. Throws on out-of-range targets.
LossResult softmax_cross_entropy(const Tensor& logits, std::span<const std::size_t> targets);

std::vector<double> softmax_row(std::span<const double> logits);

}  // namespace sxsenti
