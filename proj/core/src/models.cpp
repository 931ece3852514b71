#include "sxsenti/models.hpp"

#include <algorithm>
#include <cstring>

#include "sxsenti/error.hpp"
#include "sxsenti/rng.hpp"

namespace sxsenti {
namespace {

// Same range as out-of-vocabulary rows; training overwrites it via set_embeddings.
void init_embedding(Embedding& embedding, Rng& rng) {
  for (double& v : embedding.weight().value.values()) v = rng.uniform(-kOovInitRange, kOovInitRange);
  auto pad = embedding.weight().value.row(static_cast<std::size_t>(Vocabulary::kPadIndex));
  std::fill(pad.begin(), pad.end(), 0.0);
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept { return kind == ModelKind::gru ? "gru" : "cnn"; }

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
  if (text == "cnn") return ModelKind::cnn;
  if (text == "gru") return ModelKind::gru;
  return std::nullopt;
}

void CnnConfig::validate() const {
  if (vocab_size < 3 || embedding_dim == 0 || filters_per_width == 0 || classes < 2) {
    throw Error("cnn config: sizes must be positive (vocabulary >= 3, classes >= 2)");
  }
  if (filter_widths.empty()) throw Error("cnn config: at least one filter width required");
  for (std::size_t i = 0; i < filter_widths.size(); ++i) {
    if (filter_widths[i] == 0 || (i > 0 && filter_widths[i] <= filter_widths[i - 1])) {
      throw Error("cnn config: filter widths must be positive and strictly increasing");
    }
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("cnn config: dropout must lie in [0, 1)");
}

void GruConfig::validate() const {
  if (vocab_size < 3 || embedding_dim == 0 || hidden < 2 || classes < 2) {
    throw Error("gru config: sizes must be positive (vocabulary >= 3, hidden >= 2, classes >= 2)");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("gru config: dropout must lie in [0, 1)");
}

ModelKind kind_of(const ModelConfig& config) noexcept {
  return std::holds_alternative<GruConfig>(config) ? ModelKind::gru : ModelKind::cnn;
}

std::size_t embedding_dim_of(const ModelConfig& config) noexcept {
  return std::visit([](const auto& c) { return c.embedding_dim; }, config);
}

void set_vocab_size(ModelConfig& config, std::size_t size) noexcept {
  std::visit([size](auto& c) { c.vocab_size = size; }, config);
}

Batch make_padded_batch(std::span<const std::vector<TokenId>> sequences, std::span<const std::size_t> rows,
                        std::span<const std::size_t> labels, std::size_t min_width) {
  Batch batch;
  batch.size = rows.size();
  batch.width = min_width;
  for (std::size_t r : rows) batch.width = std::max(batch.width, sequences[r].size());
  batch.ids.assign(batch.size * batch.width, Vocabulary::kPadIndex);
  batch.rows.assign(rows.begin(), rows.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& seq = sequences[rows[i]];
    if (seq.empty()) throw Error("cannot batch an empty sequence");
    std::copy(seq.begin(), seq.end(), batch.ids.begin() + static_cast<std::ptrdiff_t>(i * batch.width));
    batch.lengths.push_back(seq.size());
    if (!labels.empty()) batch.labels.push_back(labels[rows[i]]);
  }
  return batch;
}

std::vector<Tensor> Classifier::snapshot() {
  std::vector<Tensor> values;
  for (Parameter* p : parameters()) values.push_back(p->value);
  return values;
}

void Classifier::restore(const std::vector<Tensor>& values) {
  const auto params = parameters();
  if (values.size() != params.size()) throw ShapeError("snapshot does not match the model");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->value.same_shape(values[i])) throw ShapeError("snapshot shape mismatch for " + params[i]->name);
    params[i]->value = values[i];
  }
}

void Classifier::round_to_float32() {
  for (Parameter* p : parameters()) {
    for (double& v : p->value.values()) v = static_cast<double>(static_cast<float>(v));
  }
}

// ---------------------------------------------------------------------- CNN

CnnClassifier::CnnClassifier(const CnnConfig& config, std::uint64_t seed)
    : config_((config.validate(), config)),
      embedding_(config.vocab_size, config.embedding_dim),
      dropout_(config.dropout, derive_seed(seed, 0xd0)),
      output_(config.filter_widths.size() * config.filters_per_width, config.classes) {
  Rng rng(derive_seed(seed, 0x1217));
  init_embedding(embedding_, rng);
  embedding_.weight().name = "embedding.weight";
  for (std::size_t w : config_.filter_widths) {
    Conv1d& conv = convs_.emplace_back(config_.filters_per_width, w, config_.embedding_dim);
    init_glorot_uniform(conv.weight().value, w * config_.embedding_dim, w * config_.filters_per_width, rng);
    conv.weight().name = "conv" + std::to_string(w) + ".weight";
    conv.bias().name = "conv" + std::to_string(w) + ".bias";
  }
  relus_.resize(convs_.size());
  pools_.resize(convs_.size());
  init_glorot_uniform(output_.weight().value, output_.weight().value.dim(1), config_.classes, rng);
  output_.weight().name = "output.weight";
  output_.bias().name = "output.bias";
}

std::vector<Parameter*> CnnClassifier::parameters() {
  std::vector<Parameter*> params{&embedding_.weight()};
  for (Conv1d& conv : convs_) {
    params.push_back(&conv.weight());
    params.push_back(&conv.bias());
  }
  params.push_back(&output_.weight());
  params.push_back(&output_.bias());
  return params;
}

void CnnClassifier::set_embeddings(const Tensor& matrix) {
  if (!matrix.same_shape(embedding_.weight().value)) {
    throw ShapeError("embedding matrix " + matrix.shape_string() + " does not match model " +
                     embedding_.weight().value.shape_string());
  }
  embedding_.weight().value = matrix;
}

Tensor CnnClassifier::forward(const Batch& batch, Mode mode) {
  if (batch.width < config_.max_width()) {
    throw ShapeError("cnn: batch width " + std::to_string(batch.width) + " below the widest filter");
  }
  const std::size_t rows = batch.size;
  const std::size_t filters = config_.filters_per_width;
  const Tensor embedded = embedding_.forward(batch.ids, rows, batch.width);

  Tensor features({rows, convs_.size() * filters});
  std::vector<std::size_t> valid(rows);
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    const std::size_t w = convs_[i].width();
    // Tweets shorter than the minimum width count as padded to it.
    for (std::size_t b = 0; b < rows; ++b) valid[b] = std::max(batch.lengths[b], min_width()) - w + 1;
    const Tensor pooled = pools_[i].forward(relus_[i].forward(convs_[i].forward(embedded)), valid);
    for (std::size_t b = 0; b < rows; ++b) {
      std::copy(pooled.row(b).begin(), pooled.row(b).end(), features.row(b).begin() + static_cast<std::ptrdiff_t>(i * filters));
    }
  }
  steps_ = batch.width;
  return output_.forward(dropout_.forward(features, mode));
}

void CnnClassifier::backward(const Tensor& grad_logits) {
  const Tensor grad_features = dropout_.backward(output_.backward(grad_logits));
  const std::size_t rows = grad_features.dim(0);
  const std::size_t filters = config_.filters_per_width;
  Tensor grad_embedded({rows, steps_, config_.embedding_dim});
  Tensor grad_pooled({rows, filters});
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    for (std::size_t b = 0; b < rows; ++b) {
      const auto src = grad_features.row(b).subspan(i * filters, filters);
      std::copy(src.begin(), src.end(), grad_pooled.row(b).begin());
    }
    const Tensor g = convs_[i].backward(relus_[i].backward(pools_[i].backward(grad_pooled)));
    for (std::size_t k = 0; k < g.size(); ++k) grad_embedded[k] += g[k];
  }
  embedding_.backward(grad_embedded);
}

// ---------------------------------------------------------------------- GRU

GruClassifier::GruClassifier(const GruConfig& config, std::uint64_t seed)
    : config_((config.validate(), config)),
      embedding_(config.vocab_size, config.embedding_dim),
      embed_dropout_(config.dropout, derive_seed(seed, 0xd1)),
      encoder_(config.embedding_dim, config.hidden),
      norm_(config.hidden),
      hidden_dropout_(config.dropout, derive_seed(seed, 0xd2)),
      output_(config.hidden, config.classes) {
  Rng rng(derive_seed(seed, 0x1217));
  const std::size_t d = config_.embedding_dim;
  const std::size_t H = config_.hidden;
  init_embedding(embedding_, rng);
  embedding_.weight().name = "embedding.weight";
  for (GruCell* cell : {&encoder_.forward_cell(), &encoder_.backward_cell()}) {
    // Each gate block is its own [H x d] / [H x H] matrix.
    init_glorot_uniform(cell->input_weights().value, d, H, rng);
    init_glorot_uniform(cell->recurrent_weights().value, H, H, rng);
    for (Parameter* p : cell->parameters()) p->name = "bigru." + p->name;
  }
  norm_.gain().name = "norm.gain";
  norm_.bias().name = "norm.bias";
  init_glorot_uniform(output_.weight().value, H, config_.classes, rng);
  output_.weight().name = "output.weight";
  output_.bias().name = "output.bias";
}

std::vector<Parameter*> GruClassifier::parameters() {
  std::vector<Parameter*> params{&embedding_.weight()};
  for (Parameter* p : encoder_.parameters()) params.push_back(p);
  params.push_back(&norm_.gain());
  params.push_back(&norm_.bias());
  params.push_back(&output_.weight());
  params.push_back(&output_.bias());
  return params;
}

void GruClassifier::set_embeddings(const Tensor& matrix) {
  if (!matrix.same_shape(embedding_.weight().value)) {
    throw ShapeError("embedding matrix " + matrix.shape_string() + " does not match model " +
                     embedding_.weight().value.shape_string());
  }
  embedding_.weight().value = matrix;
}

void GruClassifier::freeze_dropout(bool frozen) {
  embed_dropout_.freeze_mask(frozen);
  hidden_dropout_.freeze_mask(frozen);
}

Tensor GruClassifier::forward(const Batch& batch, Mode mode) {
  if (batch.width == 0) throw ShapeError("gru: empty batch width");
  const Tensor embedded = embed_dropout_.forward(embedding_.forward(batch.ids, batch.size, batch.width), mode);
  const Tensor encoded = norm_.forward(encoder_.forward(embedded, batch.lengths));
  return output_.forward(hidden_dropout_.forward(encoded, mode));
}

void GruClassifier::backward(const Tensor& grad_logits) {
  const Tensor g_norm = hidden_dropout_.backward(output_.backward(grad_logits));
  const Tensor g_embedded = encoder_.backward(norm_.backward(g_norm));
  embedding_.backward(embed_dropout_.backward(g_embedded));
}

std::unique_ptr<Classifier> make_classifier(const ModelConfig& config, std::uint64_t seed) {
  if (const auto* cnn = std::get_if<CnnConfig>(&config)) return std::make_unique<CnnClassifier>(*cnn, seed);
  return std::make_unique<GruClassifier>(std::get<GruConfig>(config), seed);
}

// ------------------------------------------------------------- Prediction

std::vector<std::string> preprocess(std::span<const Token> tokens, const PreprocessSettings& settings) {
  if (settings.normalize) {
    return serialize(normalize_tokens(tokens, settings.unigrams, NormalizerOptions{settings.lang_aware}));
  }
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

Sentiment argmax_class(std::span<const double> logits) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < logits.size(); ++c) {
    if (logits[c] > logits[best]) best = c;
  }
  return sentiment_at(best);
}

Tensor predict_logits(Classifier& net, std::span<const std::vector<TokenId>> sequences, std::size_t batch_size) {
  if (batch_size == 0) throw Error("batch size must be positive");
  std::size_t classes = 0;
  std::vector<double> all;
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < sequences.size(); start += batch_size) {
    const std::size_t end = std::min(sequences.size(), start + batch_size);
    rows.clear();
    for (std::size_t i = start; i < end; ++i) rows.push_back(i);
    const Batch batch = make_padded_batch(sequences, rows, {}, net.min_width());
    const Tensor logits = net.forward(batch, Mode::eval);
    classes = logits.dim(1);
    all.insert(all.end(), logits.values().begin(), logits.values().end());
  }
  if (sequences.empty()) return Tensor({0, 0});
  return Tensor({sequences.size(), classes}, std::move(all));
}

Sentiment predict(SentimentModel& model, const Tweet& tweet) {
  const auto surfaces = preprocess(tweet.tokens, model.preprocessing);
  if (surfaces.empty()) throw Error("tweet '" + tweet.uid + "' has no tokens after preprocessing");
  const std::vector<std::vector<TokenId>> seqs{encode(surfaces, model.vocab)};
  const Tensor logits = predict_logits(*model.net, seqs, 1);
  return argmax_class(logits.row(0));
}

std::vector<Sentiment> predict_all(SentimentModel& model, const Corpus& corpus, std::size_t batch_size) {
  std::vector<std::vector<TokenId>> seqs;
  seqs.reserve(corpus.size());
  for (const Tweet& tweet : corpus) {
    const auto surfaces = preprocess(tweet.tokens, model.preprocessing);
    if (surfaces.empty()) throw Error("tweet '" + tweet.uid + "' has no tokens after preprocessing");
    seqs.push_back(encode(surfaces, model.vocab));
  }
  const Tensor logits = predict_logits(*model.net, seqs, batch_size);
  std::vector<Sentiment> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) out.push_back(argmax_class(logits.row(i)));
  return out;
}

}  // namespace sxsenti
