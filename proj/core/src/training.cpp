#include "sxsenti/training.hpp"

#include <cmath>

#include "json_io.hpp"
#include "sxsenti/error.hpp"
#include "sxsenti/evaluation.hpp"
#include "sxsenti/rng.hpp"

namespace sxsenti {
namespace {

constexpr std::uint64_t kShuffleStream = 3;
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kEmbeddingStream = 2;

std::vector<std::vector<TokenId>> encode_corpus(const Corpus& corpus, const std::vector<std::vector<std::string>>& surfaces,
                                                const Vocabulary& vocab) {
  std::vector<std::vector<TokenId>> out;
  out.reserve(surfaces.size());
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    if (surfaces[i].empty()) throw Error("tweet '" + corpus[i].uid + "' has no tokens after preprocessing");
    out.push_back(encode(surfaces[i], vocab));
  }
  return out;
}

}  // namespace

TrainConfig TrainConfig::defaults(ModelKind kind) {
  TrainConfig c;
  c.kind = kind;
  if (kind == ModelKind::gru) {
    c.batch_size = 256;
    c.epochs = 10;
    c.optimizer = OptimizerKind::adamw;
    c.model = GruConfig{};
  }
  return c;
}

void TrainConfig::validate() const {
  if (batch_size == 0 || epochs == 0) throw Error("train config: batch_size and epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw Error("train config: learning_rate must be > 0");
  if (weight_decay < 0.0) throw Error("train config: weight_decay must be >= 0");
  if (max_vocab < 3) throw Error("train config: max_vocab must be at least 3");
  if (kind_of(model) != kind) throw Error("train config: model section does not match the model kind");
  std::visit([](const auto& m) { m.validate(); }, model);
}

TrainConfig train_config_from_json(std::string_view text, TrainConfig base) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(0, std::string("train config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "train config: expected a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "model") {
        const auto kind = parse_model_kind(value.get<std::string>());
        if (!kind) throw ParseError(0, "train config: unknown model '" + value.get<std::string>() + "'");
        if (*kind != base.kind) {
          const std::uint64_t seed = base.seed;
          base = TrainConfig::defaults(*kind);
          base.seed = seed;
        }
      }
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "model") continue;
      if (key == "batch_size") base.batch_size = value.get<std::size_t>();
      else if (key == "epochs") base.epochs = value.get<std::size_t>();
      else if (key == "learning_rate") base.learning_rate = value.get<double>();
      else if (key == "optimizer") {
        const auto kind = parse_optimizer_kind(value.get<std::string>());
        if (!kind) throw ParseError(0, "train config: unknown optimizer '" + value.get<std::string>() + "'");
        base.optimizer = *kind;
      } else if (key == "weight_decay") base.weight_decay = value.get<double>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "normalize") base.normalize = value.get<bool>();
      else if (key == "lang_aware") base.lang_aware = value.get<bool>();
      else if (key == "max_vocab") base.max_vocab = value.get<std::size_t>();
      else if (key == "network") {
        Json merged = config_to_json(base.model);
        merged.update(value);
        base.model = config_from_json(base.kind, merged);
      } else {
        throw ParseError(0, "train config: unknown key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ParseError(0, std::string("train config: ") + e.what());
  }
  return base;
}

std::string train_config_to_json(const TrainConfig& c) {
  const Json j{{"model", std::string(to_string(c.kind))},
               {"batch_size", c.batch_size},
               {"epochs", c.epochs},
               {"learning_rate", c.learning_rate},
               {"optimizer", std::string(to_string(c.optimizer))},
               {"weight_decay", c.weight_decay},
               {"seed", c.seed},
               {"normalize", c.normalize},
               {"lang_aware", c.lang_aware},
               {"max_vocab", c.max_vocab},
               {"network", config_to_json(c.model)}};
  return j.dump(2);
}

std::vector<std::vector<std::size_t>> batch_rows(std::size_t n, std::size_t batch_size, std::uint64_t seed,
                                                 std::size_t epoch) {
  if (batch_size == 0) throw Error("batch size must be positive");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(derive_seed(seed, kShuffleStream), epoch));
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> chunks;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    chunks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return chunks;
}

std::vector<Batch> make_batches(std::span<const std::vector<TokenId>> sequences, std::span<const std::size_t> labels,
                                std::size_t batch_size, std::uint64_t seed, std::size_t epoch, std::size_t min_width) {
  std::vector<Batch> batches;
  for (const auto& rows : batch_rows(sequences.size(), batch_size, seed, epoch)) {
    batches.push_back(make_padded_batch(sequences, rows, labels, min_width));
  }
  return batches;
}

std::string train_report_json(const TrainReport& report) {
  nlohmann::ordered_json j;
  j["epochs"] = nlohmann::ordered_json::array();
  for (const EpochStats& e : report.epochs) {
    j["epochs"].push_back({{"epoch", e.epoch}, {"mean_loss", e.mean_loss}, {"dev_macro_f1", e.dev_macro_f1}});
  }
  j["best_epoch"] = report.best_epoch;
  j["best_dev_macro_f1"] = report.best_dev_macro_f1;
  j["checkpoint"] = report.checkpoint_path;
  return j.dump(2);
}

double dev_macro_f1(SentimentModel& model, const Corpus& dev) {
  const auto preds = predict_all(model, dev);
  std::vector<Sentiment> golds;
  golds.reserve(dev.size());
  for (const Tweet& t : dev) golds.push_back(t.sentiment);
  return evaluate(preds, golds).macro_f1;
}

TrainResult train_model(const Corpus& train, const Corpus& dev, const TrainConfig& config,
                        const PretrainedTable& embeddings, const TrainOptions& options) {
  config.validate();
  if (train.empty() || dev.empty()) throw Error("training and development corpora must be non-empty");

  SentimentModel model;
  model.preprocessing.normalize = config.normalize;
  model.preprocessing.lang_aware = config.lang_aware;
  model.preprocessing.unigrams = options.unigrams ? *options.unigrams : UnigramModel::from_corpus(train);

  std::vector<std::vector<std::string>> surfaces;
  surfaces.reserve(train.size());
  for (const Tweet& t : train) surfaces.push_back(preprocess(t.tokens, model.preprocessing));
  model.vocab = build_vocabulary(surfaces, config.max_vocab);
  const auto sequences = encode_corpus(train, surfaces, model.vocab);
  std::vector<std::size_t> labels;
  labels.reserve(train.size());
  for (const Tweet& t : train) labels.push_back(index_of(t.sentiment));

  ModelConfig net_config = config.model;
  set_vocab_size(net_config, model.vocab.size());
  model.net = make_classifier(net_config, derive_seed(config.seed, kInitStream));
  model.net->set_embeddings(init_embedding_matrix(model.vocab, embeddings, embedding_dim_of(net_config),
                                                  derive_seed(config.seed, kEmbeddingStream)));
  Classifier& net = *model.net;

  OptimizerConfig opt_config;
  opt_config.kind = config.optimizer;
  opt_config.learning_rate = config.learning_rate;
  opt_config.weight_decay = config.weight_decay;
  Optimizer optimizer(net.parameters(), opt_config);

  TrainResult result;
  TrainReport& report = result.report;
  std::vector<Tensor> best;
  bool have_best = false;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto batches = make_batches(sequences, labels, config.batch_size, config.seed, epoch, net.min_width());
    if (options.hooks.on_batches) options.hooks.on_batches(epoch, batches);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      optimizer.zero_grad();
      const Tensor logits = net.forward(batches[b], Mode::train);
      const LossResult loss = softmax_cross_entropy(logits, batches[b].labels);
      if (!std::isfinite(loss.loss)) {
        throw TrainingError("loss diverged (" + std::to_string(loss.loss) + ") at epoch " +
                            std::to_string(epoch + 1) + ", batch " + std::to_string(b + 1));
      }
      net.backward(loss.grad);
      optimizer.step();
      loss_sum += loss.loss * static_cast<double>(batches[b].size);
    }

    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.mean_loss = loss_sum / static_cast<double>(train.size());
    // Score what a checkpoint would hold, so reloading reproduces the number.
    const std::vector<Tensor> live = net.snapshot();
    net.round_to_float32();
    stats.dev_macro_f1 = dev_macro_f1(model, dev);
    if (!have_best || stats.dev_macro_f1 > report.best_dev_macro_f1) {
      have_best = true;
      best = net.snapshot();
      report.best_epoch = stats.epoch;
      report.best_dev_macro_f1 = stats.dev_macro_f1;
      if (!options.checkpoint.empty()) save_checkpoint(model, options.checkpoint);
    }
    net.restore(live);
    report.epochs.push_back(stats);
    if (options.hooks.on_epoch && !options.hooks.on_epoch(stats, model)) break;
  }
  net.restore(best);
  report.checkpoint_path = options.checkpoint.string();
  result.model = std::move(model);
  return result;
}

}  // namespace sxsenti
