#include "sxsenti/analysis.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sxsenti/error.hpp"

namespace sxsenti {
namespace {

constexpr std::array<std::string_view, kNumErrorCategories> kCategoryNames{
    "difficult", "negative_tendency", "advertising", "ambiguous_label", "doubtful_label"};

std::string clean_field(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::vector<Sentiment> golds_of(const Corpus& corpus) {
  std::vector<Sentiment> out;
  for (const Tweet& t : corpus) out.push_back(t.sentiment);
  return out;
}

nlohmann::ordered_json eval_json(const EvalReport& r) { return nlohmann::ordered_json::parse(report_json(r)); }

}  // namespace

std::string_view to_string(ErrorCategory c) noexcept { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<ErrorCategory> parse_error_category(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == text) return static_cast<ErrorCategory>(i);
  }
  return std::nullopt;
}

std::vector<AnnotationRecord> sample_for_annotation(const Corpus& dev, SentimentModel& model, std::size_t n,
                                                    std::uint64_t seed) {
  if (n > dev.size()) {
    throw Error("cannot sample " + std::to_string(n) + " tweets from a corpus of " + std::to_string(dev.size()));
  }
  const Corpus sample = stratified_sample(dev, n, seed);
  const auto preds = predict_all(model, sample);
  std::vector<AnnotationRecord> records;
  records.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    AnnotationRecord r;
    r.uid = sample[i].uid;
    for (const Token& t : sample[i].tokens) {
      if (!r.text.empty()) r.text += ' ';
      r.text += t.text;
    }
    r.gold = sample[i].sentiment;
    r.predicted = preds[i];
    records.push_back(std::move(r));
  }
  return records;
}

void write_annotations(std::ostream& out, std::span<const AnnotationRecord> records) {
  out << kAnnotationHeader << '\n';
  for (const AnnotationRecord& r : records) {
    out << clean_field(r.uid) << '\t' << clean_field(r.text) << '\t' << to_string(r.gold) << '\t'
        << to_string(r.predicted) << '\t' << (r.category ? to_string(*r.category) : std::string_view{}) << '\t'
        << clean_field(r.note) << '\n';
  }
}

std::vector<AnnotationRecord> parse_annotations(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "annotation file is empty");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kAnnotationHeader) throw ParseError(line_no, "unexpected annotation header");

  std::vector<AnnotationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() < 5 || f.size() > 6) {
      throw ParseError(line_no, "expected 5 or 6 tab-separated fields, got " + std::to_string(f.size()));
    }
    AnnotationRecord r;
    r.uid = std::string(f[0]);
    if (r.uid.empty()) throw ParseError(line_no, "empty uid");
    r.text = std::string(f[1]);
    const auto gold = parse_sentiment(f[2]);
    const auto pred = parse_sentiment(f[3]);
    if (!gold) throw ParseError(line_no, "invalid gold label '" + std::string(f[2]) + "'");
    if (!pred) throw ParseError(line_no, "invalid predicted label '" + std::string(f[3]) + "'");
    r.gold = *gold;
    r.predicted = *pred;
    if (!f[4].empty()) {
      r.category = parse_error_category(f[4]);
      if (!r.category) throw ParseError(line_no, "invalid category '" + std::string(f[4]) + "'");
    }
    if (f.size() == 6) r.note = std::string(f[5]);
    records.push_back(std::move(r));
  }
  return records;
}

CategoryReport category_report(std::span<const AnnotationRecord> records) {
  CategoryReport report;
  report.total = records.size();
  for (const AnnotationRecord& r : records) {
    if (!r.category) {
      ++report.uncategorized;
      continue;
    }
    CategoryStats& s = report.categories[static_cast<std::size_t>(*r.category)];
    ++s.count;
    if (r.gold == r.predicted) ++s.correct;
    ++s.confusion.counts[index_of(r.gold)][index_of(r.predicted)];
  }
  for (CategoryStats& s : report.categories) {
    s.accuracy = s.count == 0 ? 0.0 : static_cast<double>(s.correct) / static_cast<double>(s.count);
  }
  return report;
}

std::string category_report_json(const CategoryReport& report) {
  nlohmann::ordered_json j;
  j["total"] = report.total;
  j["uncategorized"] = report.uncategorized;
  for (std::size_t i = 0; i < kNumErrorCategories; ++i) {
    const CategoryStats& s = report.categories[i];
    j["categories"][std::string(kCategoryNames[i])] = {
        {"count", s.count}, {"correct", s.correct}, {"accuracy", s.accuracy}, {"confusion", s.confusion.counts}};
  }
  return j.dump(2);
}

std::string category_report_table(const CategoryReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-18s %6s %8s\n", "category", "count", "accuracy");
  out += line;
  for (std::size_t i = 0; i < kNumErrorCategories; ++i) {
    const CategoryStats& s = report.categories[i];
    std::snprintf(line, sizeof line, "%-18s %6zu %8.3f\n", std::string(kCategoryNames[i]).c_str(), s.count, s.accuracy);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-18s %6zu\n%-18s %6zu\n", "uncategorized", report.uncategorized, "total",
                report.total);
  out += line;
  return out;
}

AblationResult run_ablation(const Corpus& train, const Corpus& dev, const TrainConfig& config,
                            const PretrainedTable& embeddings, const TrainOptions& options) {
  AblationResult result;
  const auto golds = golds_of(dev);
  TrainConfig with = config;
  with.normalize = true;
  TrainConfig without = config;
  without.normalize = false;

  TrainOptions opts = options;
  opts.checkpoint.clear();
  TrainResult a = train_model(train, dev, with, embeddings, opts);
  result.with_normalization = a.report;
  result.dev_with = evaluate(predict_all(a.model, dev), golds);

  TrainResult b = train_model(train, dev, without, embeddings, opts);
  result.without_normalization = b.report;
  result.dev_without = evaluate(predict_all(b.model, dev), golds);

  result.delta = result.dev_with.macro_f1 - result.dev_without.macro_f1;
  return result;
}

std::string ablation_json(const AblationResult& r) {
  nlohmann::ordered_json j;
  j["macro_f1_with_normalization"] = r.dev_with.macro_f1;
  j["macro_f1_without_normalization"] = r.dev_without.macro_f1;
  j["delta"] = r.delta;
  j["with_normalization"] = {{"train", nlohmann::ordered_json::parse(train_report_json(r.with_normalization))},
                             {"dev", eval_json(r.dev_with)}};
  j["without_normalization"] = {{"train", nlohmann::ordered_json::parse(train_report_json(r.without_normalization))},
                                {"dev", eval_json(r.dev_without)}};
  return j.dump(2);
}

}  // namespace sxsenti
