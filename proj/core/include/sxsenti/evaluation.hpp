#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "sxsenti/corpus.hpp"

namespace sxsenti {

/// counts[gold][predicted].
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const noexcept;
  std::size_t gold_support(Sentiment gold) const noexcept;
  std::size_t predicted_count(Sentiment predicted) const noexcept;
  std::size_t correct() const noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws Error when the lengths differ or are zero.
ConfusionMatrix confusion(std::span<const Sentiment> preds, std::span<const Sentiment> golds);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 0/0 evaluates to 0 everywhere.
ClassMetrics class_prf(const ConfusionMatrix& cm, Sentiment cls);

/// Harmonic mean, 0 when p + r == 0.
double f1_from_pr(double precision, double recall);

/// Unweighted mean of the class F1 scores.
double macro_f1(std::span<const double> f1s);
/// Support-weighted mean; 0 when every support is 0.
double weighted_f1(std::span<const double> f1s, std::span<const std::size_t> supports);

struct EvalReport {
  ConfusionMatrix confusion;
  std::array<ClassMetrics, kNumClasses> classes{};
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;

  const ClassMetrics& of(Sentiment s) const { return classes[index_of(s)]; }
};

EvalReport evaluate(std::span<const Sentiment> preds, std::span<const Sentiment> golds);
EvalReport make_report(const ConfusionMatrix& cm);

std::string report_json(const EvalReport& report);
/// Rows Positive/Negative/Neutral, columns Precision/Recall/F1, then the aggregates.
std::string report_table(const EvalReport& report);

}  // namespace sxsenti
