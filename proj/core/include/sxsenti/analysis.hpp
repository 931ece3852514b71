#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sxsenti/corpus.hpp"
#include "sxsenti/evaluation.hpp"
#include "sxsenti/training.hpp"

namespace sxsenti {

enum class ErrorCategory : std::uint8_t { difficult, negative_tendency, advertising, ambiguous_label, doubtful_label };

inline constexpr std::size_t kNumErrorCategories = 5;

std::string_view to_string(ErrorCategory c) noexcept;
std::optional<ErrorCategory> parse_error_category(std::string_view text) noexcept;

struct AnnotationRecord {
  std::string uid;
  std::string text;
  Sentiment gold = Sentiment::neutral;
  Sentiment predicted = Sentiment::neutral;
  std::optional<ErrorCategory> category;
  std::string note;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

inline constexpr std::string_view kAnnotationHeader = "uid\ttext\tgold\tpredicted\tcategory\tnote";

/// Stratified sample of `n` dev tweets with the model's predictions; categories empty.
/// Throws Error when n exceeds the corpus size.
std::vector<AnnotationRecord> sample_for_annotation(const Corpus& dev, SentimentModel& model, std::size_t n,
                                                    std::uint64_t seed);

/// Header line then one tab-separated record per line. Tabs and newlines in
/// free text become spaces.
void write_annotations(std::ostream& out, std::span<const AnnotationRecord> records);
/// Throws ParseError (1-based line) on a bad header, label or category.
std::vector<AnnotationRecord> parse_annotations(std::istream& in);

struct CategoryStats {
  std::size_t count = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
};

struct CategoryReport {
  std::array<CategoryStats, kNumErrorCategories> categories{};
  std::size_t uncategorized = 0;
  std::size_t total = 0;

  const CategoryStats& of(ErrorCategory c) const { return categories[static_cast<std::size_t>(c)]; }
};

CategoryReport category_report(std::span<const AnnotationRecord> records);
std::string category_report_json(const CategoryReport& report);
std::string category_report_table(const CategoryReport& report);

struct AblationResult {
  TrainReport with_normalization;
  TrainReport without_normalization;
  EvalReport dev_with;
  EvalReport dev_without;
  /// with - without, in macro-F1.
  double delta = 0.0;
};

/// Trains twice under the same seed, normalization on and off; everything else equal.
AblationResult run_ablation(const Corpus& train, const Corpus& dev, const TrainConfig& config,
                            const PretrainedTable& embeddings, const TrainOptions& options = {});

std::string ablation_json(const AblationResult& result);

}  // namespace sxsenti
