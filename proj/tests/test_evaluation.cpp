#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sxsenti/error.hpp"
#include "sxsenti/evaluation.hpp"

using namespace sxsenti;

namespace {

constexpr Sentiment P = Sentiment::positive, N = Sentiment::negative, U = Sentiment::neutral;

std::vector<Sentiment> to_labels(const std::vector<int>& v) {
  std::vector<Sentiment> out;
  for (int x : v) out.push_back(sentiment_at(static_cast<std::size_t>(x)));
  return out;
}

}  // namespace

TEST(Confusion, SpecExample) {
  const std::vector<Sentiment> preds{P, P, N}, golds{P, N, N};
  const ConfusionMatrix cm = confusion(preds, golds);
  EXPECT_EQ(cm.counts[index_of(P)][index_of(P)], 1u);
  EXPECT_EQ(cm.counts[index_of(N)][index_of(P)], 1u);
  EXPECT_EQ(cm.counts[index_of(N)][index_of(N)], 1u);
  EXPECT_EQ(cm.total(), 3u);
  const ClassMetrics m = class_prf(cm, P);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
  const ClassMetrics u = class_prf(cm, U);
  EXPECT_EQ(u.precision, 0.0);
  EXPECT_EQ(u.recall, 0.0);
  EXPECT_EQ(u.f1, 0.0);
}

TEST(Confusion, Errors) {
  const std::vector<Sentiment> a{P, N}, b{P};
  EXPECT_THROW(confusion(a, b), Error);
  EXPECT_THROW(confusion(std::vector<Sentiment>{}, std::vector<Sentiment>{}), Error);
}

TEST(Confusion, PerfectIsDiagonal) {
  const std::vector<Sentiment> g{P, N, U, U, P};
  const EvalReport r = evaluate(g, g);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) EXPECT_EQ(r.confusion.counts[i][j], 0u);
  for (const ClassMetrics& c : r.classes) {
    EXPECT_EQ(c.precision, 1.0);
    EXPECT_EQ(c.recall, 1.0);
    EXPECT_EQ(c.f1, 1.0);
  }
  EXPECT_EQ(r.macro_f1, 1.0);
  EXPECT_EQ(r.weighted_f1, 1.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Aggregates, SpecArithmetic) {
  EXPECT_NEAR(f1_from_pr(0.807, 0.647), 0.7182, 1e-4);
  EXPECT_DOUBLE_EQ(f1_from_pr(0.3, 0.3), 0.3);
  EXPECT_EQ(f1_from_pr(1, 0), 0.0);
  EXPECT_EQ(f1_from_pr(0, 0), 0.0);
  EXPECT_NEAR(macro_f1(std::vector<double>{0.794, 0.445, 0.136}), 0.458, 1e-3);
  const std::vector<double> f{1.0, 0.0};
  const std::vector<std::size_t> s{9, 1};
  EXPECT_DOUBLE_EQ(weighted_f1(f, s), 0.9);
  EXPECT_DOUBLE_EQ(macro_f1(f), 0.5);
  EXPECT_EQ(weighted_f1(f, std::vector<std::size_t>{0, 0}), 0.0);
}

TEST(Aggregates, MatchBruteForceOnRandomPairs) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> cls(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> p(1000), g(1000);
    for (int i = 0; i < 1000; ++i) {
      p[i] = cls(rng);
      g[i] = cls(rng);
    }
    const EvalReport r = evaluate(to_labels(p), to_labels(g));
    const auto counts = oracle::count_pairs(p, g);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(r.confusion.counts[i][j], counts[i][j]);
    double macro = 0, weighted = 0, correct = 0;
    std::array<double, 3> support{};
    for (int i = 0; i < 1000; ++i) {
      support[static_cast<std::size_t>(g[i])] += 1;
      correct += p[i] == g[i];
    }
    for (int c = 0; c < 3; ++c) {
      const oracle::Prf o = oracle::prf(p, g, c);
      const ClassMetrics& m = r.classes[static_cast<std::size_t>(c)];
      EXPECT_NEAR(m.precision, o.p, 1e-12);
      EXPECT_NEAR(m.recall, o.r, 1e-12);
      EXPECT_NEAR(m.f1, o.f, 1e-12);
      macro += o.f / 3;
      weighted += o.f * support[static_cast<std::size_t>(c)] / 1000;
    }
    EXPECT_NEAR(r.macro_f1, macro, 1e-12);
    EXPECT_NEAR(r.weighted_f1, weighted, 1e-12);
    EXPECT_NEAR(r.accuracy, correct / 1000, 1e-12);
  }
}

TEST(Aggregates, Properties) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> cls(0, 2);
  std::uniform_int_distribution<int> len(1, 60);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    std::vector<int> p(n), g(n);
    for (int i = 0; i < n; ++i) {
      p[i] = cls(rng);
      g[i] = cls(rng);
    }
    const EvalReport r = evaluate(to_labels(p), to_labels(g));
    std::size_t tp = 0;
    for (Sentiment s : kAllSentiments) {
      std::size_t row = 0, col = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        row += r.confusion.counts[index_of(s)][j];
        col += r.confusion.counts[j][index_of(s)];
      }
      EXPECT_EQ(row, r.confusion.gold_support(s));
      EXPECT_EQ(col, r.confusion.predicted_count(s));
      tp += r.confusion.counts[index_of(s)][index_of(s)];
      const ClassMetrics& m = r.of(s);
      EXPECT_LE(std::min(m.precision, m.recall), m.f1 + 1e-15);
      EXPECT_LE(m.f1, std::max(m.precision, m.recall) + 1e-15);
    }
    // Micro precision = micro recall = accuracy.
    EXPECT_DOUBLE_EQ(static_cast<double>(tp) / n, r.accuracy);

    std::vector<double> f{r.classes[0].f1, r.classes[1].f1, r.classes[2].f1};
    std::vector<double> rev{f[2], f[0], f[1]};
    EXPECT_NEAR(macro_f1(f), macro_f1(rev), 1e-15);
    EXPECT_NEAR(weighted_f1(f, std::vector<std::size_t>{5, 5, 5}), macro_f1(f), 1e-15);
  }
}

TEST(Report, JsonAndTable) {
  const std::vector<Sentiment> preds{P, P, N, U}, golds{P, N, N, U};
  const EvalReport r = evaluate(preds, golds);
  const std::string j = report_json(r);
  EXPECT_NE(j.find("\"macro_f1\""), std::string::npos);
  EXPECT_NE(j.find("\"weighted_f1\""), std::string::npos);
  EXPECT_NE(j.find("\"confusion\""), std::string::npos);
  const std::string t = report_table(r);
  const auto pos = t.find("Positive"), neg = t.find("Negative"), neu = t.find("Neutral");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(pos, neg);
  EXPECT_LT(neg, neu);
  EXPECT_NE(t.find("Precision"), std::string::npos);
  EXPECT_NE(t.find("Recall"), std::string::npos);
}
