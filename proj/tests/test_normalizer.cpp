#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "golden.hpp"
#include "oracles.hpp"
#include "sxsenti/error.hpp"
#include "sxsenti/normalizer.hpp"

using namespace sxsenti;

namespace {

UnigramModel golden_model() { return UnigramModel::load(SXSENTI_TEST_DATA_DIR "/golden_unigrams.txt"); }

std::vector<Token> tagged(std::initializer_list<std::pair<const char*, LangTag>> items) {
  std::vector<Token> out;
  for (const auto& [t, l] : items) out.push_back({t, l});
  return out;
}

NormalizedToken nt(std::string s, std::vector<StyleAnnotation> a = {}) { return {std::move(s), std::move(a)}; }

}  // namespace

TEST(Normalizer, EntityMapping) {
  EXPECT_EQ(map_entity("http://t.co/ab1"), EntityKind::url);
  EXPECT_EQ(map_entity("www.example.com"), EntityKind::url);
  EXPECT_EQ(map_entity("@maria_88"), EntityKind::user);
  EXPECT_EQ(map_entity("50%"), EntityKind::percent);
  EXPECT_EQ(map_entity("hola"), std::nullopt);
  EXPECT_EQ(map_entity("12:30"), EntityKind::time);
  EXPECT_EQ(map_entity("10/10/2015"), EntityKind::date);
  EXPECT_EQ(map_entity("$10"), EntityKind::money);
  EXPECT_EQ(map_entity("42"), EntityKind::number);
  EXPECT_EQ(map_entity("ana@mail.com"), EntityKind::email);
  EXPECT_EQ(map_entity("#tbt"), EntityKind::hashtag);
  EXPECT_EQ(map_entity("(555)123-4567"), EntityKind::phone);
  EXPECT_EQ(map_entity("!!!"), std::nullopt);
  EXPECT_EQ(map_entity("@"), std::nullopt);
}

TEST(Normalizer, DescriptiveTokensAreUnique) {
  std::set<std::string_view> seen;
  for (int k = 0; k <= static_cast<int>(EntityKind::hashtag); ++k) {
    EXPECT_TRUE(seen.insert(descriptive_token(static_cast<EntityKind>(k))).second);
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Normalizer, StyleAnnotations) {
  const UnigramModel m({{"nice", 5}, {"good", 4}});
  EXPECT_EQ(annotate_style("WOW", m), nt("wow", {StyleAnnotation::allcaps}));
  EXPECT_EQ(annotate_style("!!!", m), nt("!", {StyleAnnotation::repeated}));
  EXPECT_EQ(annotate_style("*great*", m), nt("great", {StyleAnnotation::emphasized}));
  EXPECT_EQ(annotate_style("f**k", m), nt("f**k", {StyleAnnotation::censored}));
  EXPECT_EQ(annotate_style("niiiice", m), nt("nice", {StyleAnnotation::elongated}));
  EXPECT_EQ(annotate_style("A", m), nt("A"));
  EXPECT_EQ(annotate_style("hello", m), nt("hello"));
  // Neither reduction is known: fall back to single letters.
  EXPECT_EQ(annotate_style("zzzap", m), nt("zap", {StyleAnnotation::elongated}));
}

TEST(Normalizer, SegmentationExamples) {
  const UnigramModel m({{"love", 10}, {"my", 20}, {"life", 8}, {"hello", 5}});
  EXPECT_EQ(segment_words("lovemylife", m), (std::vector<std::string>{"love", "my", "life"}));
  EXPECT_EQ(segment_words("hello", m), (std::vector<std::string>{"hello"}));
  EXPECT_EQ(segment_words("xzqv", m), (std::vector<std::string>{"xzqv"}));
}

TEST(Normalizer, SegmentationMatchesExhaustiveSearch) {
  const std::map<std::string, std::uint64_t> f{{"a", 30},   {"an", 12},  {"ant", 4},  {"the", 40}, {"then", 6},
                                               {"hen", 3},  {"he", 15},  {"at", 9},   {"tea", 5},  {"team", 2},
                                               {"me", 11},  {"mat", 7},  {"eat", 8},  {"ten", 4},  {"net", 3}};
  const UnigramModel m(f);
  std::mt19937_64 rng(17);
  const std::string letters = "athenm";
  std::size_t compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::string s;
    const std::size_t len = 1 + rng() % 10;
    for (std::size_t i = 0; i < len; ++i) s += letters[rng() % letters.size()];
    const auto got = segment_words(s, m);
    std::string joined;
    for (const auto& p : got) joined += p;
    ASSERT_EQ(joined, s);
    const auto ref = oracle::exhaustive_segment(s, f);
    // Compare scores; pieces must match whenever the optimum is unique.
    double total = 0;
    for (const auto& [w, c] : f) total += double(c);
    auto score = [&](const std::vector<std::string>& ps) {
      double sc = 0;
      for (const auto& p : ps) {
        const auto it = f.find(p);
        sc += it == f.end() ? -std::log(total * 10) : std::log(double(it->second) / total);
      }
      return sc;
    };
    EXPECT_NEAR(score(got), score(ref), 1e-9) << s;
    ++compared;
  }
  EXPECT_EQ(compared, 400u);
}

TEST(Normalizer, SpellCorrectionExamples) {
  const UnigramModel m({{"good", 10}, {"god", 3}, {"bat", 2}, {"hat", 2}});
  EXPECT_EQ(spell_correct("good", m), "good");
  EXPECT_EQ(spell_correct("goood", m), "good");
  EXPECT_EQ(spell_correct("qqqqq", m), "qqqqq");
  EXPECT_EQ(spell_correct("bhat", m), "bat");  // frequency tie -> lexicographic
}

TEST(Normalizer, SpellCorrectionMatchesBruteForce) {
  std::map<std::string, std::uint64_t> f;
  std::mt19937_64 rng(5);
  const std::string letters = "abcde";
  auto word = [&](std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += letters[rng() % letters.size()];
    return s;
  };
  for (int i = 0; i < 60; ++i) f[word(2 + rng() % 4)] = 1 + rng() % 5;
  const UnigramModel m(f);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string w = word(1 + rng() % 6);
    EXPECT_EQ(spell_correct(w, m), oracle::brute_spell(w, f)) << w;
  }
}

TEST(Normalizer, Tokenizer) {
  EXPECT_EQ(tokenize_raw("@ana hola!!!"), (std::vector<std::string>{"@ana", "hola", "!!!"}));
  EXPECT_EQ(tokenize_raw("see http://t.co/x :)"), (std::vector<std::string>{"see", "http://t.co/x", ":)"}));
  EXPECT_TRUE(tokenize_raw("").empty());
  EXPECT_EQ(tokenize_raw("  (wow) #tbt, ok?"),
            (std::vector<std::string>{"(", "wow", ")", "#tbt", ",", "ok", "?"}));
}

TEST(Normalizer, SpecExamples) {
  const UnigramModel m({{"love", 10}, {"my", 20}, {"life", 8}, {"good", 5}});
  EXPECT_EQ(normalize_tokens(tagged({{"JAJAJA", LangTag::lang2}, {"GOOOD", LangTag::lang1}}), m, {true}),
            (std::vector<NormalizedToken>{nt("JAJAJA"), nt("good", {StyleAnnotation::allcaps, StyleAnnotation::elongated})}));
  EXPECT_EQ(normalize_tokens(tagged({{"#lovemylife", LangTag::other}}), m, {true}),
            (std::vector<NormalizedToken>{nt("<hashtag>"), nt("love"), nt("my"), nt("life"), nt("</hashtag>")}));
  EXPECT_EQ(normalize_tokens(tagged({{"@ana", LangTag::lang2}, {"50%", LangTag::other}}), m, {true}),
            (std::vector<NormalizedToken>{nt("<user>"), nt("<percent>")}));
}

TEST(Normalizer, GoldenCorpus) {
  const UnigramModel m = golden_model();
  const auto cases = load_golden(SXSENTI_TEST_DATA_DIR "/normalizer_golden.tsv");
  ASSERT_GE(cases.size(), 25u);
  for (const GoldenCase& c : cases) {
    EXPECT_EQ(join(serialize(normalize_tokens(c.tokens, m, {c.lang_aware}))), c.expected) << "line " << c.line;
  }
}

TEST(Normalizer, EntityTokensCarryNoAnnotations) {
  const UnigramModel m = golden_model();
  for (const char* t : {"HTTP://T.CO/X", "@ANA", "50%", "$10", "12:30"}) {
    const auto out = normalize_tokens(tagged({{t, LangTag::lang1}}), m, {true});
    ASSERT_EQ(out.size(), 1u) << t;
    EXPECT_TRUE(out[0].annotations.empty()) << t;
  }
}

TEST(Normalizer, UnigramFileFormat) {
  std::istringstream in("the 10\n\nhola 3\nthe 5\n");
  const UnigramModel m = UnigramModel::parse(in);
  EXPECT_EQ(m.frequency("the"), 15u);
  EXPECT_EQ(m.total(), 18u);
  EXPECT_DOUBLE_EQ(m.probability("hola"), 3.0 / 18.0);
  EXPECT_DOUBLE_EQ(m.probability("nope"), 0.0);
  std::istringstream bad("the ten\n");
  EXPECT_THROW(UnigramModel::parse(bad), ParseError);
}
