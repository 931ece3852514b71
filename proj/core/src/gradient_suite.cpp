#include "sxsenti/gradcheck.hpp"
#include "sxsenti/layers.hpp"
#include "sxsenti/models.hpp"
#include "sxsenti/rng.hpp"

namespace sxsenti {
namespace {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

// sum(out * probe): a linear read-out so grad_out == probe.
double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void randomize(Layer& layer, Rng& rng, double scale = 0.5) {
  for (Parameter* p : layer.parameters()) {
    for (double& v : p->value.values()) v = rng.uniform(-scale, scale);
  }
}

std::vector<GradTarget> param_targets(Layer& layer) {
  std::vector<GradTarget> out;
  for (Parameter* p : layer.parameters()) out.push_back({p->name, &p->value, &p->grad});
  return out;
}

GradCheckResult check_linear(Rng& rng) {
  Linear layer(5, 4);
  randomize(layer, rng);
  Tensor x = random_tensor({3, 5}, rng);
  const Tensor probe = random_tensor({3, 4}, rng);
  layer.zero_grad();
  layer.forward(x);
  const Tensor gx = layer.backward(probe);
  auto targets = param_targets(layer);
  targets.push_back({"input", &x, &gx});
  return grad_check([&] { return dot(layer.forward(x), probe); }, targets);
}

GradCheckResult check_conv_pool(Rng& rng) {
  const std::size_t B = 3, T = 7, d = 4, F = 5, w = 3;
  Conv1d conv(F, w, d);
  Relu relu;
  MaskedMaxOverTime pool;
  randomize(conv, rng);
  Tensor x = random_tensor({B, T, d}, rng);
  const std::vector<std::size_t> valid{5, 2, 3};
  const Tensor probe = random_tensor({B, F}, rng);
  auto run = [&] { return pool.forward(relu.forward(conv.forward(x)), valid); };
  conv.zero_grad();
  run();
  const Tensor gx = conv.backward(relu.backward(pool.backward(probe)));
  auto targets = param_targets(conv);
  targets.push_back({"input", &x, &gx});
  return grad_check([&] { return dot(run(), probe); }, targets);
}

GradCheckResult check_layer_norm(Rng& rng) {
  LayerNorm norm(6);
  randomize(norm, rng, 1.0);
  Tensor x = random_tensor({4, 6}, rng, 2.0);
  const Tensor probe = random_tensor({4, 6}, rng);
  norm.zero_grad();
  norm.forward(x);
  const Tensor gx = norm.backward(probe);
  auto targets = param_targets(norm);
  targets.push_back({"input", &x, &gx});
  return grad_check([&] { return dot(norm.forward(x), probe); }, targets);
}

GradCheckResult check_gru_cell(Rng& rng) {
  GruCell cell(4, 5);
  randomize(cell, rng);
  Tensor x = random_tensor({3, 4}, rng);
  Tensor h = random_tensor({3, 5}, rng);
  const Tensor probe = random_tensor({3, 5}, rng);
  cell.zero_grad();
  cell.forward(x, h);
  const auto [gx, gh] = cell.backward(probe);
  auto targets = param_targets(cell);
  targets.push_back({"x", &x, &gx});
  targets.push_back({"h_prev", &h, &gh});
  return grad_check([&] { return dot(cell.forward(x, h), probe); }, targets);
}

GradCheckResult check_bigru_head(Rng& rng) {
  const std::size_t B = 3, T = 5, d = 4, H = 5;
  BiGru encoder(d, H);
  Linear head(H, kNumClasses);
  randomize(encoder, rng, 1.0);
  randomize(head, rng);
  Tensor x = random_tensor({B, T, d}, rng);
  const std::vector<std::size_t> lengths{5, 2, 4};
  const std::vector<std::size_t> targets_y{0, 2, 1};
  auto loss = [&] { return softmax_cross_entropy(head.forward(encoder.forward(x, lengths)), targets_y); };
  encoder.zero_grad();
  head.zero_grad();
  const LossResult l = loss();
  const Tensor gx = encoder.backward(head.backward(l.grad));
  auto targets = param_targets(encoder);
  for (const auto& t : param_targets(head)) targets.push_back(t);
  targets.push_back({"input", &x, &gx});
  return grad_check([&] { return loss().loss; }, targets);
}

Batch fixed_batch(Rng& rng, std::size_t vocab, std::vector<std::size_t> lengths) {
  std::vector<std::vector<TokenId>> seqs;
  std::vector<std::size_t> rows, labels;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    std::vector<TokenId> s;
    for (std::size_t t = 0; t < lengths[i]; ++t) s.push_back(static_cast<TokenId>(1 + rng.below(vocab - 1)));
    seqs.push_back(std::move(s));
    rows.push_back(i);
    labels.push_back(i % kNumClasses);
  }
  return make_padded_batch(seqs, rows, labels, kMinCnnWidth);
}

GradCheckResult check_classifier(Classifier& net, const Batch& batch, Rng& rng, double scale) {
  // Nonzero biases keep ReLU inputs off the kink.
  randomize(net, rng, scale);
  for (double& v : net.parameters().front()->value.row(0)) v = 0.0;
  net.zero_grad();
  net.forward(batch, Mode::train);  // draws the dropout masks
  net.freeze_dropout(true);
  net.zero_grad();
  const LossResult l = softmax_cross_entropy(net.forward(batch, Mode::train), batch.labels);
  net.backward(l.grad);
  auto targets = param_targets(net);
  return grad_check([&] { return softmax_cross_entropy(net.forward(batch, Mode::train), batch.labels).loss; },
                    targets);
}

GradCheckResult check_cnn(Rng& rng, std::uint64_t seed) {
  CnnConfig config;
  config.vocab_size = 12;
  config.embedding_dim = 4;
  config.filters_per_width = 3;
  CnnClassifier net(config, seed);
  // Lengths >= 4 keep the pad row out of the pooled windows; its gradient is
  // pinned to zero, so a probe there would disagree with finite differences.
  const Batch batch = fixed_batch(rng, config.vocab_size, {4, 7, 5, 6});
  return check_classifier(net, batch, rng, 0.5);
}

GradCheckResult check_gru_model(Rng& rng, std::uint64_t seed) {
  GruConfig config;
  config.vocab_size = 12;
  config.embedding_dim = 4;
  config.hidden = 5;
  GruClassifier net(config, seed);
  const Batch batch = fixed_batch(rng, config.vocab_size, {3, 6, 1, 4});
  return check_classifier(net, batch, rng, 1.0);
}

}  // namespace

std::vector<GradSuiteCase> run_gradient_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GradSuiteCase> out;
  out.push_back({"linear", check_linear(rng)});
  out.push_back({"conv1d+relu+masked_pool", check_conv_pool(rng)});
  out.push_back({"layer_norm", check_layer_norm(rng)});
  out.push_back({"gru_cell", check_gru_cell(rng)});
  out.push_back({"bigru+linear+loss", check_bigru_head(rng)});
  out.push_back({"cnn_classifier", check_cnn(rng, derive_seed(seed, 1))});
  out.push_back({"gru_classifier", check_gru_model(rng, derive_seed(seed, 2))});
  return out;
}

}  // namespace sxsenti
