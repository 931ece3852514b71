#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sxsenti/corpus.hpp"
#include "sxsenti/embeddings.hpp"
#include "sxsenti/models.hpp"
#include "sxsenti/optimizer.hpp"

namespace sxsenti {

struct TrainConfig {
  ModelKind kind = ModelKind::cnn;
  std::size_t batch_size = 64;
  std::size_t epochs = 5;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::adam;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;
  bool normalize = true;
  bool lang_aware = true;
  /// Vocabulary cap, specials included.
  std::size_t max_vocab = 15000;
  /// vocab_size is overwritten with the built vocabulary size.
  ModelConfig model = CnnConfig{};

  /// CNN: batch 64, 5 epochs, Adam. GRU: batch 256, 10 epochs, AdamW.
  static TrainConfig defaults(ModelKind kind);

  /// Throws Error on non-positive sizes or learning rate.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Overlays JSON keys onto `base`. Unknown keys are rejected.
TrainConfig train_config_from_json(std::string_view text, TrainConfig base);
std::string train_config_to_json(const TrainConfig& config);

/// Shuffled row order for (seed, epoch), cut into consecutive chunks.
std::vector<std::vector<std::size_t>> batch_rows(std::size_t n, std::size_t batch_size, std::uint64_t seed,
                                                 std::size_t epoch);

std::vector<Batch> make_batches(std::span<const std::vector<TokenId>> sequences, std::span<const std::size_t> labels,
                                std::size_t batch_size, std::uint64_t seed, std::size_t epoch,
                                std::size_t min_width = kMinCnnWidth);

struct EpochStats {
  /// 1-based.
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double dev_macro_f1 = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;
  double best_dev_macro_f1 = 0.0;
  std::string checkpoint_path;
};

std::string train_report_json(const TrainReport& report);

struct TrainHooks {
  /// Called after each epoch with the live (not best) model. Returning false stops training.
  std::function<bool(const EpochStats&, SentimentModel&)> on_epoch;
  /// Called with each epoch's batches before they are consumed.
  std::function<void(std::size_t epoch, std::span<const Batch>)> on_batches;
};

struct TrainOptions {
  /// Frequency list for the normalizer; derived from the training corpus when absent.
  std::optional<UnigramModel> unigrams;
  /// Where to write the best checkpoint; nothing is written when empty.
  std::filesystem::path checkpoint;
  TrainHooks hooks;
};

struct TrainResult {
  TrainReport report;
  /// Holds the best-epoch parameters, rounded as they are checkpointed.
  SentimentModel model;
};

/// Throws TrainingError when a batch loss is not finite.
TrainResult train_model(const Corpus& train, const Corpus& dev, const TrainConfig& config,
                        const PretrainedTable& embeddings, const TrainOptions& options = {});

/// Macro-F1 of eval-mode predictions.
double dev_macro_f1(SentimentModel& model, const Corpus& dev);

}  // namespace sxsenti
