#include "sxsenti/layers.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"
#include "sxsenti/error.hpp"

namespace sxsenti {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " + std::to_string(rank) + ", got " +
                     t.shape_string());
  }
}

void require_same_shape(const Tensor& a, const std::vector<std::size_t>& shape, const char* what) {
  if (a.shape() != shape) {
    throw ShapeError(std::string(what) + ": gradient shape " + a.shape_string() +
                     " does not match the forward output");
  }
}

}  // namespace

void Layer::zero_grad() {
  for (Parameter* p : parameters()) p->grad.fill(0.0);
}

void Layer::consume_cache() {
  if (!cached_) throw Error("backward called without a preceding forward");
  cached_ = false;
}

void init_glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.values()) v = rng.uniform(-a, a);
}

// ---------------------------------------------------------------- Embedding

Embedding::Embedding(std::size_t vocab_size, std::size_t dim)
    : weight_("weight", Tensor({vocab_size, dim})) {}

Embedding::Embedding(Tensor weight) : weight_("weight", std::move(weight)) {
  require_rank(weight_.value, 2, "embedding matrix");
}

Tensor Embedding::forward(std::span<const TokenId> ids, std::size_t batch, std::size_t steps) {
  if (ids.size() != batch * steps) throw ShapeError("embedding ids do not match batch x steps");
  const std::size_t d = dim();
  const auto vocab = static_cast<TokenId>(vocab_size());
  Tensor out({batch, steps, d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const TokenId id = ids[i];
    if (id < 0 || id >= vocab) {
      throw Error("token id " + std::to_string(id) + " outside vocabulary of size " +
                  std::to_string(vocab));
    }
    const auto src = weight_.value.row(static_cast<std::size_t>(id));
    std::copy(src.begin(), src.end(), out.values().begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  ids_.assign(ids.begin(), ids.end());
  mark_cached();
  return out;
}

void Embedding::backward(const Tensor& grad_out) {
  consume_cache();
  const std::size_t d = dim();
  if (grad_out.size() != ids_.size() * d) throw ShapeError("embedding gradient has the wrong size");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    kernels::axpy(1.0, grad_out.values().data() + i * d,
                  weight_.grad.row(static_cast<std::size_t>(ids_[i])).data(), d);
  }
  auto pad = weight_.grad.row(static_cast<std::size_t>(Vocabulary::kPadIndex));
  std::fill(pad.begin(), pad.end(), 0.0);
}

// ------------------------------------------------------------------- Conv1d

Conv1d::Conv1d(std::size_t filters, std::size_t width, std::size_t dim)
    : filters_(filters),
      width_(width),
      dim_(dim),
      weight_("weight", Tensor({filters, width, dim})),
      bias_("bias", Tensor({filters})) {
  if (filters == 0 || width == 0 || dim == 0) throw ShapeError("conv1d dimensions must be positive");
}

Tensor Conv1d::forward(const Tensor& input) {
  require_rank(input, 3, "conv1d input");
  const std::size_t batch = input.dim(0);
  const std::size_t steps = input.dim(1);
  if (input.dim(2) != dim_) throw ShapeError("conv1d input feature size mismatch");
  if (steps < width_) {
    throw ShapeError("conv1d: sequence length " + std::to_string(steps) + " shorter than filter width " +
                     std::to_string(width_));
  }
  const std::size_t out_steps = steps - width_ + 1;
  Tensor out({batch, out_steps, filters_});
  for (std::size_t b = 0; b < batch; ++b) {
    double* y = out.values().data() + b * out_steps * filters_;
    kernels::matmul_nt(input.values().data() + b * steps * dim_, dim_, weight_.value.values().data(), y,
                       out_steps, width_ * dim_, filters_, false);
    for (std::size_t t = 0; t < out_steps; ++t) {
      kernels::axpy(1.0, bias_.value.values().data(), y + t * filters_, filters_);
    }
  }
  input_ = input;
  mark_cached();
  return out;
}

Tensor Conv1d::backward(const Tensor& grad_out) {
  consume_cache();
  const std::size_t batch = input_.dim(0);
  const std::size_t steps = input_.dim(1);
  const std::size_t out_steps = steps - width_ + 1;
  require_same_shape(grad_out, {batch, out_steps, filters_}, "conv1d");
  Tensor grad_in = Tensor::zeros_like(input_);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* g = grad_out.values().data() + b * out_steps * filters_;
    const double* x = input_.values().data() + b * steps * dim_;
    kernels::matmul_nn_acc(g, weight_.value.values().data(), grad_in.values().data() + b * steps * dim_,
                           dim_, out_steps, width_ * dim_, filters_);
    kernels::matmul_tn_acc(g, x, dim_, weight_.grad.values().data(), out_steps, width_ * dim_, filters_);
    for (std::size_t t = 0; t < out_steps; ++t) {
      kernels::axpy(1.0, g + t * filters_, bias_.grad.values().data(), filters_);
    }
  }
  return grad_in;
}

// --------------------------------------------------------------------- ReLU

Tensor Relu::forward(const Tensor& input) {
  Tensor out = input;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  input_ = input;
  mark_cached();
  return out;
}

Tensor Relu::backward(const Tensor& grad_out) {
  consume_cache();
  require_same_shape(grad_out, input_.shape(), "relu");
  Tensor grad = grad_out;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!(input_[i] > 0.0)) grad[i] = 0.0;
  }
  return grad;
}

// -------------------------------------------------------- MaskedMaxOverTime

Tensor MaskedMaxOverTime::forward(const Tensor& input, std::span<const std::size_t> lengths) {
  require_rank(input, 3, "max-over-time input");
  const std::size_t batch = input.dim(0);
  const std::size_t steps = input.dim(1);
  const std::size_t features = input.dim(2);
  if (lengths.size() != batch) throw ShapeError("max-over-time: one length per batch row required");
  Tensor out({batch, features});
  argmax_.assign(batch * features, 0);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t len = lengths[b];
    if (len == 0 || len > steps) {
      throw Error("max-over-time: valid length " + std::to_string(len) + " outside [1, " +
                  std::to_string(steps) + "]");
    }
    for (std::size_t f = 0; f < features; ++f) {
      std::size_t best = 0;
      double best_value = input.at(b, 0, f);
      for (std::size_t t = 1; t < len; ++t) {
        const double v = input.at(b, t, f);
        if (v > best_value) {
          best_value = v;
          best = t;
        }
      }
      out.at(b, f) = best_value;
      argmax_[b * features + f] = best;
    }
  }
  input_shape_ = input.shape();
  mark_cached();
  return out;
}

Tensor MaskedMaxOverTime::backward(const Tensor& grad_out) {
  consume_cache();
  const std::size_t batch = input_shape_[0];
  const std::size_t features = input_shape_[2];
  require_same_shape(grad_out, {batch, features}, "max-over-time");
  Tensor grad_in(input_shape_);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t f = 0; f < features; ++f) {
      grad_in.at(b, argmax_[b * features + f], f) += grad_out.at(b, f);
    }
  }
  return grad_in;
}

// ------------------------------------------------------------------ Dropout

Dropout::Dropout(double p, std::uint64_t seed) : p_(p), rng_(seed) {
  if (!(p >= 0.0 && p < 1.0)) throw Error("dropout probability must lie in [0, 1)");
}

Tensor Dropout::forward(const Tensor& input, Mode mode) {
  mark_cached();
  identity_ = mode == Mode::eval || p_ == 0.0;
  if (identity_) return input;
  if (!frozen_ || mask_.size() != input.size()) {
    const double scale = 1.0 / (1.0 - p_);
    mask_.resize(input.size());
    for (double& m : mask_) m = rng_.uniform() < p_ ? 0.0 : scale;
  }
  Tensor out = input;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask_[i];
  return out;
}

Tensor Dropout::backward(const Tensor& grad_out) {
  consume_cache();
  if (identity_) return grad_out;
  if (grad_out.size() != mask_.size()) throw ShapeError("dropout gradient has the wrong size");
  Tensor grad = grad_out;
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= mask_[i];
  return grad;
}

// ------------------------------------------------------------------- Linear

Linear::Linear(std::size_t in_features, std::size_t out_features)
    : in_(in_features),
      out_(out_features),
      weight_("weight", Tensor({out_features, in_features})),
      bias_("bias", Tensor({out_features})) {}

Tensor Linear::forward(const Tensor& input) {
  require_rank(input, 2, "linear input");
  if (input.dim(1) != in_) {
    throw ShapeError("linear: input has " + std::to_string(input.dim(1)) + " features, expected " +
                     std::to_string(in_));
  }
  const std::size_t batch = input.dim(0);
  Tensor out({batch, out_});
  kernels::matmul_nt(input.values().data(), in_, weight_.value.values().data(), out.values().data(), batch,
                     in_, out_, false);
  for (std::size_t b = 0; b < batch; ++b) {
    kernels::axpy(1.0, bias_.value.values().data(), out.row(b).data(), out_);
  }
  input_ = input;
  mark_cached();
  return out;
}

Tensor Linear::backward(const Tensor& grad_out) {
  consume_cache();
  const std::size_t batch = input_.dim(0);
  require_same_shape(grad_out, {batch, out_}, "linear");
  Tensor grad_in({batch, in_});
  kernels::matmul_nn_acc(grad_out.values().data(), weight_.value.values().data(), grad_in.values().data(),
                         in_, batch, in_, out_);
  kernels::matmul_tn_acc(grad_out.values().data(), input_.values().data(), in_,
                         weight_.grad.values().data(), batch, in_, out_);
  for (std::size_t b = 0; b < batch; ++b) {
    kernels::axpy(1.0, grad_out.row(b).data(), bias_.grad.values().data(), out_);
  }
  return grad_in;
}

// ---------------------------------------------------------------- LayerNorm

LayerNorm::LayerNorm(std::size_t features, double eps)
    : n_(features), eps_(eps), gain_("gain", Tensor({features}, 1.0)), bias_("bias", Tensor({features})) {
  if (features < 2) throw ShapeError("layer norm needs at least two features");
}

Tensor LayerNorm::forward(const Tensor& input) {
  require_rank(input, 2, "layer norm input");
  if (input.dim(1) != n_) throw ShapeError("layer norm feature size mismatch");
  const std::size_t batch = input.dim(0);
  Tensor out({batch, n_});
  normalized_ = Tensor({batch, n_});
  inv_std_.assign(batch, 0.0);
  const double n = static_cast<double>(n_);
  for (std::size_t b = 0; b < batch; ++b) {
    const auto x = input.row(b);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= n;
    const double inv_std = 1.0 / std::sqrt(var + eps_);
    inv_std_[b] = inv_std;
    auto xhat = normalized_.row(b);
    auto y = out.row(b);
    for (std::size_t i = 0; i < n_; ++i) {
      xhat[i] = (x[i] - mean) * inv_std;
      y[i] = xhat[i] * gain_.value[i] + bias_.value[i];
    }
  }
  mark_cached();
  return out;
}

Tensor LayerNorm::backward(const Tensor& grad_out) {
  consume_cache();
  const std::size_t batch = normalized_.dim(0);
  require_same_shape(grad_out, {batch, n_}, "layer norm");
  Tensor grad_in({batch, n_});
  const double n = static_cast<double>(n_);
  std::vector<double> dxhat(n_);
  for (std::size_t b = 0; b < batch; ++b) {
    const auto g = grad_out.row(b);
    const auto xhat = normalized_.row(b);
    double mean_d = 0.0;
    double mean_dx = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      dxhat[i] = g[i] * gain_.value[i];
      gain_.grad[i] += g[i] * xhat[i];
      bias_.grad[i] += g[i];
      mean_d += dxhat[i];
      mean_dx += dxhat[i] * xhat[i];
    }
    mean_d /= n;
    mean_dx /= n;
    auto dx = grad_in.row(b);
    for (std::size_t i = 0; i < n_; ++i) dx[i] = inv_std_[b] * (dxhat[i] - mean_d - xhat[i] * mean_dx);
  }
  return grad_in;
}

// ------------------------------------------------------------------ GruCell

GruCell::GruCell(std::size_t input_dim, std::size_t hidden, std::string prefix)
    : d_(input_dim),
      h_(hidden),
      w_(prefix + "W", Tensor({3 * hidden, input_dim})),
      u_(prefix + "U", Tensor({3 * hidden, hidden})),
      b_(prefix + "b", Tensor({3 * hidden})) {
  if (input_dim == 0 || hidden == 0) throw ShapeError("gru dimensions must be positive");
}

Tensor GruCell::step(const Tensor& x, const Tensor& h_prev, GruStepCache* cache) const {
  require_rank(x, 2, "gru input");
  require_rank(h_prev, 2, "gru state");
  const std::size_t batch = x.dim(0);
  if (x.dim(1) != d_ || h_prev.dim(0) != batch || h_prev.dim(1) != h_) {
    throw ShapeError("gru step: got x " + x.shape_string() + ", h " + h_prev.shape_string());
  }
  const std::size_t H = h_;
  Tensor gx({batch, 3 * H});
  kernels::matmul_nt(x.values().data(), d_, w_.value.values().data(), gx.values().data(), batch, d_, 3 * H,
                     false);
  Tensor gh({batch, 2 * H});
  kernels::matmul_nt(h_prev.values().data(), H, u_.value.values().data(), gh.values().data(), batch, H,
                     2 * H, false);

  Tensor z({batch, H});
  Tensor r({batch, H});
  Tensor rh({batch, H});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < H; ++i) {
      z.at(b, i) = sigmoid(gx.at(b, i) + gh.at(b, i) + b_.value[i]);
      r.at(b, i) = sigmoid(gx.at(b, H + i) + gh.at(b, H + i) + b_.value[H + i]);
      rh.at(b, i) = r.at(b, i) * h_prev.at(b, i);
    }
  }
  Tensor uc({batch, H});
  kernels::matmul_nt(rh.values().data(), H, u_.value.values().data() + 2 * H * H, uc.values().data(), batch,
                     H, H, false);
  Tensor cand({batch, H});
  Tensor h({batch, H});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < H; ++i) {
      cand.at(b, i) = std::tanh(gx.at(b, 2 * H + i) + uc.at(b, i) + b_.value[2 * H + i]);
      h.at(b, i) = (1.0 - z.at(b, i)) * h_prev.at(b, i) + z.at(b, i) * cand.at(b, i);
    }
  }
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->cand = std::move(cand);
    cache->rh = std::move(rh);
  }
  return h;
}

std::pair<Tensor, Tensor> GruCell::step_backward(const GruStepCache& c, const Tensor& grad_h) {
  const std::size_t batch = c.x.dim(0);
  const std::size_t H = h_;
  require_same_shape(grad_h, {batch, H}, "gru step");

  Tensor dh_prev({batch, H});
  Tensor da({batch, 3 * H});
  Tensor da_c({batch, H});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < H; ++i) {
      const double g = grad_h.at(b, i);
      const double z = c.z.at(b, i);
      const double cand = c.cand.at(b, i);
      const double dz = g * (cand - c.h_prev.at(b, i));
      dh_prev.at(b, i) = g * (1.0 - z);
      da.at(b, i) = dz * z * (1.0 - z);
      da_c.at(b, i) = g * z * (1.0 - cand * cand);
      da.at(b, 2 * H + i) = da_c.at(b, i);
    }
  }

  const double* u_c = u_.value.values().data() + 2 * H * H;
  Tensor d_rh({batch, H});
  kernels::matmul_nn_acc(da_c.values().data(), u_c, d_rh.values().data(), H, batch, H, H);
  kernels::matmul_tn_acc(da_c.values().data(), c.rh.values().data(), H, u_.grad.values().data() + 2 * H * H,
                         batch, H, H);

  Tensor da_zr({batch, 2 * H});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < H; ++i) {
      const double r = c.r.at(b, i);
      const double dr = d_rh.at(b, i) * c.h_prev.at(b, i);
      dh_prev.at(b, i) += d_rh.at(b, i) * r;
      da.at(b, H + i) = dr * r * (1.0 - r);
      da_zr.at(b, i) = da.at(b, i);
      da_zr.at(b, H + i) = da.at(b, H + i);
    }
  }

  Tensor dx({batch, d_});
  kernels::matmul_nn_acc(da.values().data(), w_.value.values().data(), dx.values().data(), d_, batch, d_,
                         3 * H);
  kernels::matmul_tn_acc(da.values().data(), c.x.values().data(), d_, w_.grad.values().data(), batch, d_,
                         3 * H);
  for (std::size_t b = 0; b < batch; ++b) kernels::axpy(1.0, da.row(b).data(), b_.grad.values().data(), 3 * H);

  kernels::matmul_nn_acc(da_zr.values().data(), u_.value.values().data(), dh_prev.values().data(), H, batch,
                         H, 2 * H);
  kernels::matmul_tn_acc(da_zr.values().data(), c.h_prev.values().data(), H, u_.grad.values().data(), batch,
                         H, 2 * H);
  return {std::move(dx), std::move(dh_prev)};
}

Tensor GruCell::forward(const Tensor& x, const Tensor& h_prev) {
  Tensor h = step(x, h_prev, &cache_);
  mark_cached();
  return h;
}

std::pair<Tensor, Tensor> GruCell::backward(const Tensor& grad_h) {
  consume_cache();
  return step_backward(cache_, grad_h);
}

// -------------------------------------------------------------------- BiGru

BiGru::BiGru(std::size_t input_dim, std::size_t hidden)
    : fwd_(input_dim, hidden, "fwd."), bwd_(input_dim, hidden, "bwd.") {}

std::vector<Parameter*> BiGru::parameters() {
  auto params = fwd_.parameters();
  for (Parameter* p : bwd_.parameters()) params.push_back(p);
  return params;
}

Tensor BiGru::run_direction(const Tensor& input, bool reverse, std::vector<GruStepCache>& caches) {
  const std::size_t batch = input.dim(0);
  const std::size_t d = input.dim(2);
  const std::size_t H = hidden();
  const std::size_t max_len = *std::max_element(lengths_.begin(), lengths_.end());
  GruCell& cell = reverse ? bwd_ : fwd_;

  Tensor h({batch, H});
  caches.assign(max_len, GruStepCache{});
  for (std::size_t s = 0; s < max_len; ++s) {
    Tensor x({batch, d});
    for (std::size_t b = 0; b < batch; ++b) {
      if (s >= lengths_[b]) continue;
      const std::size_t pos = reverse ? lengths_[b] - 1 - s : s;
      const double* src = input.values().data() + (b * input.dim(1) + pos) * d;
      std::copy(src, src + d, x.row(b).begin());
    }
    Tensor next = cell.step(x, h, &caches[s]);
    for (std::size_t b = 0; b < batch; ++b) {
      if (s >= lengths_[b]) std::copy(h.row(b).begin(), h.row(b).end(), next.row(b).begin());
    }
    h = std::move(next);
  }
  return h;
}

Tensor BiGru::forward(const Tensor& input, std::span<const std::size_t> lengths) {
  require_rank(input, 3, "bigru input");
  const std::size_t batch = input.dim(0);
  if (input.dim(2) != fwd_.input_dim()) throw ShapeError("bigru input feature size mismatch");
  if (lengths.size() != batch) throw ShapeError("bigru: one length per batch row required");
  for (std::size_t len : lengths) {
    if (len == 0 || len > input.dim(1)) throw Error("bigru: valid length outside [1, T]");
  }
  lengths_.assign(lengths.begin(), lengths.end());
  input_shape_ = input.shape();

  Tensor out({batch, hidden()});
  if (batch > 0) {
    const Tensor hf = run_direction(input, false, fwd_caches_);
    const Tensor hb = run_direction(input, true, bwd_caches_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (hf[i] + hb[i]);
  }
  mark_cached();
  return out;
}

void BiGru::backprop_direction(const Tensor& grad_final, bool reverse, GruCell& cell,
                               std::vector<GruStepCache>& caches, Tensor& grad_input) {
  const std::size_t batch = grad_input.dim(0);
  const std::size_t steps = grad_input.dim(1);
  const std::size_t d = grad_input.dim(2);
  Tensor dh = grad_final;
  for (std::size_t s = caches.size(); s-- > 0;) {
    Tensor dh_cell = dh;
    for (std::size_t b = 0; b < batch; ++b) {
      if (s >= lengths_[b]) std::fill(dh_cell.row(b).begin(), dh_cell.row(b).end(), 0.0);
    }
    auto [dx, dh_prev] = cell.step_backward(caches[s], dh_cell);
    for (std::size_t b = 0; b < batch; ++b) {
      if (s >= lengths_[b]) continue;
      std::copy(dh_prev.row(b).begin(), dh_prev.row(b).end(), dh.row(b).begin());
      const std::size_t pos = reverse ? lengths_[b] - 1 - s : s;
      kernels::axpy(1.0, dx.row(b).data(), grad_input.values().data() + (b * steps + pos) * d, d);
    }
  }
}

Tensor BiGru::backward(const Tensor& grad_out) {
  consume_cache();
  const std::size_t batch = input_shape_[0];
  require_same_shape(grad_out, {batch, hidden()}, "bigru");
  Tensor grad_input(input_shape_);
  if (batch == 0) return grad_input;
  Tensor half = grad_out;
  for (double& v : half.values()) v *= 0.5;
  backprop_direction(half, false, fwd_, fwd_caches_, grad_input);
  backprop_direction(half, true, bwd_, bwd_caches_, grad_input);
  return grad_input;
}

// --------------------------------------------------------------------- Loss

std::vector<double> softmax_row(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double mx = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

LossResult softmax_cross_entropy(const Tensor& logits, std::span<const std::size_t> targets) {
  require_rank(logits, 2, "logits");
  const std::size_t batch = logits.dim(0);
  const std::size_t classes = logits.dim(1);
  if (targets.size() != batch) throw ShapeError("one target per logit row required");
  if (batch == 0) throw Error("cross-entropy of an empty batch");

  LossResult result{0.0, Tensor({batch, classes})};
  const double inv_b = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    if (targets[b] >= classes) throw Error("target class " + std::to_string(targets[b]) + " out of range");
    const auto row = logits.row(b);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double v : row) sum += std::exp(v - mx);
    const double log_z = mx + std::log(sum);
    result.loss += (log_z - row[targets[b]]) * inv_b;
    auto g = result.grad.row(b);
    for (std::size_t c = 0; c < classes; ++c) {
      g[c] = (std::exp(row[c] - log_z) - (c == targets[b] ? 1.0 : 0.0)) * inv_b;
    }
  }
  return result;
}

}  // namespace sxsenti
