#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sxsenti/corpus.hpp"
#include "sxsenti/embeddings.hpp"
#include "sxsenti/layers.hpp"
#include "sxsenti/normalizer.hpp"

namespace sxsenti {

enum class ModelKind : std::uint8_t { cnn, gru };

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;

struct CnnConfig {
  std::size_t vocab_size = 15000;
  std::size_t embedding_dim = 200;
  std::vector<std::size_t> filter_widths{2, 3, 4};
  std::size_t filters_per_width = 100;
  double dropout = 0.5;
  std::size_t classes = 3;

  /// Throws Error unless widths are positive and strictly increasing.
  void validate() const;
  std::size_t max_width() const { return filter_widths.empty() ? 0 : filter_widths.back(); }

  friend bool operator==(const CnnConfig&, const CnnConfig&) = default;
};

struct GruConfig {
  std::size_t vocab_size = 15000;
  std::size_t embedding_dim = 300;
  std::size_t hidden = 512;
  double dropout = 0.1;
  std::size_t classes = 3;

  void validate() const;

  friend bool operator==(const GruConfig&, const GruConfig&) = default;
};

using ModelConfig = std::variant<CnnConfig, GruConfig>;

ModelKind kind_of(const ModelConfig& config) noexcept;
std::size_t embedding_dim_of(const ModelConfig& config) noexcept;
void set_vocab_size(ModelConfig& config, std::size_t size) noexcept;

/// Shortest padded width a batch may have for this model.
inline constexpr std::size_t kMinCnnWidth = 4;

/// A padded batch of encoded tweets. ids are [size x width] row-major, right
/// padded with the pad index.
struct Batch {
  std::size_t size = 0;
  std::size_t width = 0;
  std::vector<TokenId> ids;
  std::vector<std::size_t> lengths;
  std::vector<std::size_t> labels;
  /// Index of each row in the source corpus.
  std::vector<std::size_t> rows;
};

/// Pads the selected sequences to max(longest, min_width). Labels are copied
/// when `labels` is non-empty.
Batch make_padded_batch(std::span<const std::vector<TokenId>> sequences, std::span<const std::size_t> rows,
                        std::span<const std::size_t> labels, std::size_t min_width);

class Classifier : public Layer {
 public:
  virtual ModelKind kind() const noexcept = 0;
  virtual ModelConfig config() const = 0;

  /// Logits [B x classes].
  virtual Tensor forward(const Batch& batch, Mode mode) = 0;
  virtual void backward(const Tensor& grad_logits) = 0;

  virtual void set_embeddings(const Tensor& matrix) = 0;
  virtual void freeze_dropout(bool frozen) = 0;
  virtual std::size_t min_width() const noexcept = 0;

  /// Parameter values in parameters() order.
  std::vector<Tensor> snapshot();
  void restore(const std::vector<Tensor>& values);
  /// Rounds every parameter through 32-bit floats, i.e. to its checkpoint value.
  void round_to_float32();
};

/// embed -> per width: conv + relu + masked max-pool -> concat -> dropout -> linear.
class CnnClassifier final : public Classifier {
 public:
  CnnClassifier(const CnnConfig& config, std::uint64_t seed);

  ModelKind kind() const noexcept override { return ModelKind::cnn; }
  ModelConfig config() const override { return config_; }
  Tensor forward(const Batch& batch, Mode mode) override;
  void backward(const Tensor& grad_logits) override;
  std::vector<Parameter*> parameters() override;
  void set_embeddings(const Tensor& matrix) override;
  void freeze_dropout(bool frozen) override { dropout_.freeze_mask(frozen); }
  std::size_t min_width() const noexcept override { return std::max(kMinCnnWidth, config_.max_width()); }

  Embedding& embedding() noexcept { return embedding_; }
  Linear& output() noexcept { return output_; }
  std::vector<Conv1d>& convolutions() noexcept { return convs_; }

 private:
  CnnConfig config_;
  Embedding embedding_;
  std::vector<Conv1d> convs_;
  std::vector<Relu> relus_;
  std::vector<MaskedMaxOverTime> pools_;
  Dropout dropout_;
  Linear output_;
  std::size_t steps_ = 0;
};

/// embed -> dropout -> BiGRU (mean of final states) -> layer norm -> dropout -> linear.
class GruClassifier final : public Classifier {
 public:
  GruClassifier(const GruConfig& config, std::uint64_t seed);

  ModelKind kind() const noexcept override { return ModelKind::gru; }
  ModelConfig config() const override { return config_; }
  Tensor forward(const Batch& batch, Mode mode) override;
  void backward(const Tensor& grad_logits) override;
  std::vector<Parameter*> parameters() override;
  void set_embeddings(const Tensor& matrix) override;
  void freeze_dropout(bool frozen) override;
  std::size_t min_width() const noexcept override { return 1; }

  Embedding& embedding() noexcept { return embedding_; }
  BiGru& encoder() noexcept { return encoder_; }
  LayerNorm& norm() noexcept { return norm_; }
  Linear& output() noexcept { return output_; }

 private:
  GruConfig config_;
  Embedding embedding_;
  Dropout embed_dropout_;
  BiGru encoder_;
  LayerNorm norm_;
  Dropout hidden_dropout_;
  Linear output_;
};

std::unique_ptr<Classifier> make_classifier(const ModelConfig& config, std::uint64_t seed);

/// How raw tweets become vocabulary surfaces.
struct PreprocessSettings {
  bool normalize = true;
  bool lang_aware = true;
  UnigramModel unigrams;
};

/// Normalized (or raw) surfaces of one tweet, annotation tokens included.
std::vector<std::string> preprocess(std::span<const Token> tokens, const PreprocessSettings& settings);

/// A trained network with everything needed to turn a tweet into a label.
struct SentimentModel {
  std::unique_ptr<Classifier> net;
  Vocabulary vocab;
  PreprocessSettings preprocessing;
};

/// Argmax of the logits; ties resolve to the lowest class index.
Sentiment argmax_class(std::span<const double> logits);

/// Eval-mode prediction. Throws Error when the tweet has no tokens left after preprocessing.
Sentiment predict(SentimentModel& model, const Tweet& tweet);
/// Batched eval-mode predictions in corpus order.
std::vector<Sentiment> predict_all(SentimentModel& model, const Corpus& corpus, std::size_t batch_size = 64);
/// Eval-mode logits for encoded sequences, one row per sequence.
Tensor predict_logits(Classifier& net, std::span<const std::vector<TokenId>> sequences,
                      std::size_t batch_size = 64);

inline constexpr std::string_view kCheckpointMagic = "SXSENTI1";
inline constexpr int kCheckpointVersion = 1;

/// Magic, u64 little-endian manifest length, JSON manifest, then every tensor
/// as little-endian float32 in manifest order.
void save_checkpoint(const SentimentModel& model, const std::filesystem::path& path);
void write_checkpoint(const SentimentModel& model, std::ostream& out);

/// Throws CheckpointError on bad magic, unknown version, truncation or shape mismatch.
SentimentModel load_checkpoint(const std::filesystem::path& path,
                               std::optional<ModelKind> expected_kind = std::nullopt);
SentimentModel read_checkpoint(std::istream& in, std::optional<ModelKind> expected_kind = std::nullopt);

}  // namespace sxsenti
