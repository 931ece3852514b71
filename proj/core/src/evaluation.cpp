#include "sxsenti/evaluation.hpp"

#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "sxsenti/error.hpp"

namespace sxsenti {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return n;
}

std::size_t ConfusionMatrix::gold_support(Sentiment gold) const noexcept {
  const auto& row = counts[index_of(gold)];
  return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::predicted_count(Sentiment predicted) const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts) n += row[index_of(predicted)];
  return n;
}

std::size_t ConfusionMatrix::correct() const noexcept {
  std::size_t n = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) n += counts[c][c];
  return n;
}

ConfusionMatrix confusion(std::span<const Sentiment> preds, std::span<const Sentiment> golds) {
  if (preds.size() != golds.size()) {
    throw Error("confusion: " + std::to_string(preds.size()) + " predictions for " + std::to_string(golds.size()) +
                " gold labels");
  }
  if (preds.empty()) throw Error("confusion: nothing to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) ++cm.counts[index_of(golds[i])][index_of(preds[i])];
  return cm;
}

ClassMetrics class_prf(const ConfusionMatrix& cm, Sentiment cls) {
  const std::size_t tp = cm.counts[index_of(cls)][index_of(cls)];
  ClassMetrics m;
  m.precision = ratio(tp, cm.predicted_count(cls));
  m.recall = ratio(tp, cm.gold_support(cls));
  m.f1 = f1_from_pr(m.precision, m.recall);
  return m;
}

double f1_from_pr(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

double macro_f1(std::span<const double> f1s) {
  if (f1s.empty()) return 0.0;
  return std::accumulate(f1s.begin(), f1s.end(), 0.0) / static_cast<double>(f1s.size());
}

double weighted_f1(std::span<const double> f1s, std::span<const std::size_t> supports) {
  if (f1s.size() != supports.size()) throw Error("weighted_f1: size mismatch");
  double num = 0.0;
  std::size_t den = 0;
  for (std::size_t i = 0; i < f1s.size(); ++i) {
    num += static_cast<double>(supports[i]) * f1s[i];
    den += supports[i];
  }
  return den == 0 ? 0.0 : num / static_cast<double>(den);
}

EvalReport make_report(const ConfusionMatrix& cm) {
  EvalReport r;
  r.confusion = cm;
  std::array<double, kNumClasses> f1s{};
  std::array<std::size_t, kNumClasses> supports{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    r.classes[c] = class_prf(cm, sentiment_at(c));
    f1s[c] = r.classes[c].f1;
    supports[c] = cm.gold_support(sentiment_at(c));
  }
  r.macro_f1 = macro_f1(f1s);
  r.weighted_f1 = weighted_f1(f1s, supports);
  r.accuracy = ratio(cm.correct(), cm.total());
  return r;
}

EvalReport evaluate(std::span<const Sentiment> preds, std::span<const Sentiment> golds) {
  return make_report(confusion(preds, golds));
}

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  j["weighted_f1"] = report.weighted_f1;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto& m = report.classes[c];
    j["classes"][std::string(to_string(sentiment_at(c)))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
        {"support", report.confusion.gold_support(sentiment_at(c))}};
  }
  j["labels"] = {"negative", "neutral", "positive"};
  j["confusion"] = report.confusion.counts;
  return j.dump(2);
}

std::string report_table(const EvalReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %9s %9s %9s\n", "", "Precision", "Recall", "F1");
  out += line;
  const std::pair<const char*, Sentiment> rows[] = {
      {"Positive", Sentiment::positive}, {"Negative", Sentiment::negative}, {"Neutral", Sentiment::neutral}};
  for (const auto& [name, s] : rows) {
    const auto& m = report.of(s);
    std::snprintf(line, sizeof line, "%-10s %9.3f %9.3f %9.3f\n", name, m.precision, m.recall, m.f1);
    out += line;
  }
  std::snprintf(line, sizeof line, "\nmacro-F1 %.4f  weighted-F1 %.4f  accuracy %.4f\n", report.macro_f1,
                report.weighted_f1, report.accuracy);
  out += line;
  return out;
}

}  // namespace sxsenti
