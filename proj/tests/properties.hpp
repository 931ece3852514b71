#pragma once

// Randomized property checks shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sxsenti/corpus.hpp"
#include "sxsenti/layers.hpp"
#include "sxsenti/models.hpp"
#include "sxsenti/normalizer.hpp"

namespace props {

struct Outcome {
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string first;

  bool ok() const { return failures == 0 && instances > 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
};

inline sxsenti::Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  sxsenti::Tensor t(std::move(shape));
  for (double& v : t.values()) v = u(rng);
  return t;
}

// Garbage in the padded tail never changes the pooled values.
inline Outcome masked_pool_invariance(std::uint64_t seed, std::size_t n) {
  using namespace sxsenti;
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t i = 0; i < n; ++i, ++o.instances) {
    const std::size_t B = 1 + rng() % 4, T = 1 + rng() % 8, F = 1 + rng() % 5;
    Tensor x = random_tensor({B, T, F}, rng);
    std::vector<std::size_t> len(B);
    for (auto& l : len) l = 1 + rng() % T;
    MaskedMaxOverTime pool;
    const Tensor before = pool.forward(x, len);
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t t = len[b]; t < T; ++t)
        for (std::size_t f = 0; f < F; ++f) x.at(b, t, f) = 1e6 * (1.0 + static_cast<double>(rng() % 7));
    if (pool.forward(x, len) != before) o.fail("pool changed at instance " + std::to_string(i));
  }
  return o;
}

inline std::vector<std::vector<sxsenti::TokenId>> random_sequences(std::size_t n, std::size_t vocab,
                                                                   std::size_t max_len, std::mt19937_64& rng) {
  std::vector<std::vector<sxsenti::TokenId>> out(n);
  for (auto& s : out) {
    s.resize(1 + rng() % max_len);
    for (auto& t : s) t = static_cast<sxsenti::TokenId>(1 + rng() % (vocab - 1));
  }
  return out;
}

// Eval logits of a tweet do not depend on the rest of its batch or on extra padding.
inline Outcome batch_padding_invariance(sxsenti::ModelKind kind, std::uint64_t seed, std::size_t n) {
  using namespace sxsenti;
  std::mt19937_64 rng(seed);
  ModelConfig cfg;
  if (kind == ModelKind::cnn) {
    CnnConfig c;
    c.vocab_size = 30;
    c.embedding_dim = 6;
    c.filters_per_width = 4;
    cfg = c;
  } else {
    GruConfig c;
    c.vocab_size = 30;
    c.embedding_dim = 5;
    c.hidden = 6;
    cfg = c;
  }
  Outcome o;
  for (std::size_t i = 0; i < n; ++i, ++o.instances) {
    auto net = make_classifier(cfg, seed + i);
    const auto seqs = random_sequences(1 + rng() % 6, 30, 10, rng);
    std::vector<std::size_t> rows(seqs.size());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    const std::size_t extra = rng() % 6;
    const Tensor batched = net->forward(make_padded_batch(seqs, rows, {}, net->min_width() + extra), Mode::eval);
    for (std::size_t r = 0; r < seqs.size(); ++r) {
      const std::vector<std::vector<TokenId>> one{seqs[r]};
      const std::vector<std::size_t> r0{0};
      const Tensor alone = net->forward(make_padded_batch(one, r0, {}, net->min_width()), Mode::eval);
      for (std::size_t k = 0; k < 3; ++k)
        if (std::abs(batched.at(r, k) - alone.at(0, k)) > 1e-9) {
          o.fail("instance " + std::to_string(i) + " row " + std::to_string(r));
          k = 3;
        }
    }
  }
  return o;
}

inline sxsenti::Corpus random_labelled_corpus(std::mt19937_64& rng, std::size_t size) {
  using namespace sxsenti;
  Corpus c(size);
  for (std::size_t i = 0; i < size; ++i) {
    c[i].uid = std::to_string(i);
    c[i].sentiment = sentiment_at(rng() % 3);
    c[i].tokens = {{"w" + std::to_string(rng() % 50), LangTag::lang1}};
  }
  return c;
}

// Selected class proportions stay within 1/n of the corpus proportions.
inline Outcome stratified_bounds(std::uint64_t seed, std::size_t trials) {
  using namespace sxsenti;
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t i = 0; i < trials; ++i, ++o.instances) {
    const Corpus c = random_labelled_corpus(rng, 3 + rng() % 400);
    const std::size_t n = 1 + rng() % c.size();
    const Corpus s = stratified_sample(c, n, rng());
    const LabelDistribution full = label_distribution(c);
    std::array<std::size_t, 3> got{};
    for (const Tweet& t : s) ++got[index_of(t.sentiment)];
    bool bad = s.size() != n;
    for (std::size_t k = 0; k < 3; ++k)
      if (std::abs(static_cast<double>(got[k]) / n - full.proportions[k]) > 1.0 / n + 1e-12) bad = true;
    if (bad) o.fail("trial " + std::to_string(i) + " n=" + std::to_string(n));
  }
  return o;
}

inline sxsenti::UnigramModel property_unigrams() {
  return sxsenti::UnigramModel(std::map<std::string, std::uint64_t>{
      {"the", 900}, {"good", 300}, {"day", 250}, {"love", 200}, {"this", 400}, {"so", 350}, {"happy", 120},
      {"hello", 60}, {"world", 80}, {"best", 90}, {"fun", 70}, {"now", 150}, {"hola", 40}, {"bad", 45}});
}

inline std::string random_token(std::mt19937_64& rng) {
  static const std::vector<std::string> words{"good", "day", "love", "this", "hola", "feliz", "helo", "wrld",
                                              "happy", "bad", "fun", "amigo", "x", "the"};
  const std::string w = words[rng() % words.size()];
  switch (rng() % 16) {
    case 0: return "#" + w + words[rng() % words.size()];
    case 1: return "@" + w;
    case 2: return "https://t.co/" + w;
    case 3: return std::to_string(rng() % 1000);
    case 4: return std::to_string(rng() % 100) + "%";
    case 5: return "$" + std::to_string(rng() % 100);
    case 6: return std::to_string(1 + rng() % 12) + ":" + std::to_string(10 + rng() % 50);
    case 7: {
      std::string u = w;
      for (char& ch : u) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      return u;
    }
    case 8: return w + std::string(2 + rng() % 4, w.back());
    case 9: return "*" + w + "*";
    case 10: return std::string(2 + rng() % 4, "!?."[rng() % 3]);
    case 11: return w.substr(0, 1) + "**" + w.substr(1);
    case 12: return w + "@mail.com";
    default: return w;
  }
}

// normalize(serialize(normalize(x))) == normalize(x), compared as serialized surfaces.
inline Outcome normalizer_idempotence(std::uint64_t seed, std::size_t n) {
  using namespace sxsenti;
  std::mt19937_64 rng(seed);
  const UnigramModel uni = property_unigrams();
  Outcome o;
  for (std::size_t i = 0; i < n; ++i, ++o.instances) {
    std::vector<Token> tweet(1 + rng() % 8);
    for (Token& t : tweet) {
      t.text = random_token(rng);
      t.lang = rng() % 3 == 0 ? LangTag::lang2 : (rng() % 2 ? LangTag::lang1 : LangTag::other);
    }
    for (bool aware : {true, false}) {
      const NormalizerOptions opt{aware};
      const std::vector<Token> once = serialize_tagged(tweet, uni, opt);
      const std::vector<Token> twice = serialize_tagged(once, uni, opt);
      if (once != twice) {
        std::string text;
        for (const Token& t : tweet) text += t.text + " ";
        o.fail("instance " + std::to_string(i) + ": " + text);
      }
    }
  }
  return o;
}

}  // namespace props
