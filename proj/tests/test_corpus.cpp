#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sxsenti/corpus.hpp"
#include "sxsenti/error.hpp"

using namespace sxsenti;

namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conll(in);
}

Tweet tweet_with(std::vector<LangTag> tags, Sentiment s = Sentiment::neutral) {
  Tweet t{"x", {}, s};
  for (LangTag tag : tags) t.tokens.push_back({"w", tag});
  return t;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Corpus, ParsesSingleRecord) {
  const Corpus c = parse("meta\t1\tpositive\nhola\tlang2\ndude\tlang1\n\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].uid, "1");
  EXPECT_EQ(c[0].sentiment, Sentiment::positive);
  ASSERT_EQ(c[0].tokens.size(), 2u);
  EXPECT_EQ(c[0].tokens[0], (Token{"hola", LangTag::lang2}));
  EXPECT_EQ(c[0].tokens[1], (Token{"dude", LangTag::lang1}));
}

TEST(Corpus, SentimentIsCaseInsensitiveAndUnknownTagsDegrade) {
  const Corpus c = parse("meta\t7\tNEGATIVE\nx\tweird_tag\ny\tne\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].sentiment, Sentiment::negative);
  EXPECT_EQ(c[0].tokens[0].lang, LangTag::unk);
  EXPECT_EQ(c[0].tokens[1].lang, LangTag::ne);
}

TEST(Corpus, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("1\tpositive\nhola\tlang2\n"), 1u);
  EXPECT_EQ(parse_error_line("meta\t1\tpositive\nhola\tlang2\n\nmeta\t2\thappy\nx\tlang1\n"), 4u);
  EXPECT_EQ(parse_error_line("meta\t1\tpositive\n\nmeta\t2\tneutral\nx\tlang1\n"), 1u);
  EXPECT_EQ(parse_error_line("meta\t1\tpositive\na\tlang1\n\nmeta\t1\tneutral\nb\tlang1\n"), 4u);
  EXPECT_EQ(parse_error_line("meta\t1\tpositive\nno_tab_here\n"), 2u);
}

TEST(Corpus, MatchesIndependentScanner) {
  const std::string text =
      "meta\t101\tpositive\nLOL\tlang1\nque\tlang2\nbueno\tlang2\n!!!\tother\n\n"
      "meta\t102\tnegative\nodio\tlang2\nthis\tlang1\n@user1\tother\n\n"
      "meta\t103\tneutral\nMaria\tne\nhelloooo\tlang1\nxd\tambiguous\nsoy\tlang2\n";
  const Corpus c = parse(text);
  const auto ref = oracle::scan_conll(text);
  ASSERT_EQ(c.size(), ref.size());
  ASSERT_EQ(c.size(), 3u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c[i].uid, ref[i].uid);
    EXPECT_EQ(to_string(c[i].sentiment), ref[i].label);
    ASSERT_EQ(c[i].tokens.size(), ref[i].tokens.size());
    for (std::size_t k = 0; k < c[i].tokens.size(); ++k) {
      EXPECT_EQ(c[i].tokens[k].text, ref[i].tokens[k].first);
      EXPECT_EQ(to_string(c[i].tokens[k].lang), ref[i].tokens[k].second);
    }
  }
}

TEST(Corpus, WriteThenParseRoundTrips) {
  const Corpus c = generate_fixture(3, 40);
  std::ostringstream out;
  write_conll(out, c);
  EXPECT_EQ(parse(out.str()), c);
}

TEST(Corpus, LabelDistribution) {
  Corpus c{tweet_with({LangTag::lang1}, Sentiment::positive), tweet_with({LangTag::lang1}, Sentiment::positive),
           tweet_with({LangTag::lang1}, Sentiment::negative), tweet_with({LangTag::lang1}, Sentiment::negative)};
  for (std::size_t i = 0; i < c.size(); ++i) c[i].uid = std::to_string(i);
  const auto d = label_distribution(c);
  EXPECT_EQ(d.total, 4u);
  EXPECT_DOUBLE_EQ(d.proportions[index_of(Sentiment::positive)], 0.5);
  EXPECT_DOUBLE_EQ(d.proportions[index_of(Sentiment::negative)], 0.5);
  EXPECT_DOUBLE_EQ(d.proportions[index_of(Sentiment::neutral)], 0.0);
  EXPECT_THROW(label_distribution(Corpus{}), Error);
}

TEST(Corpus, ModeLanguage) {
  EXPECT_EQ(mode_language(tweet_with({LangTag::lang2, LangTag::lang2, LangTag::lang1})), LangTag::lang2);
  EXPECT_EQ(mode_language(tweet_with({LangTag::lang1, LangTag::lang2})), LangTag::mixed);
  EXPECT_EQ(mode_language(tweet_with({LangTag::ne, LangTag::other})), LangTag::other);
  EXPECT_EQ(mode_language(tweet_with({LangTag::lang1, LangTag::ne, LangTag::ne, LangTag::ne})), LangTag::lang1);
}

TEST(Corpus, ApportionmentMatchesOracle) {
  // Development split proportions from Table 1.
  const std::vector<std::size_t> dev{506, 994, 1498};
  EXPECT_EQ(apportion(300, dev), (std::vector<std::size_t>{51, 99, 150}));
  EXPECT_EQ(oracle::hamilton(300, dev), (std::vector<std::size_t>{51, 99, 150}));
  const std::vector<std::size_t> train(kReferenceTrainCounts.begin(), kReferenceTrainCounts.end());
  EXPECT_EQ(apportion(100, train), (std::vector<std::size_t>{17, 33, 50}));
  EXPECT_EQ(apportion(200, train), (std::vector<std::size_t>{34, 66, 100}));
  for (std::size_t n : {1u, 7u, 13u, 99u, 301u, 1000u}) EXPECT_EQ(apportion(n, dev), oracle::hamilton(n, dev)) << n;
}

TEST(Corpus, StratifiedSample) {
  const Corpus c = generate_fixture(11, 300);
  const Corpus s = stratified_sample(c, 60, 5);
  ASSERT_EQ(s.size(), 60u);
  EXPECT_EQ(s, stratified_sample(c, 60, 5));
  const auto d = label_distribution(s);
  EXPECT_EQ(d.counts, (std::array<std::size_t, 3>{10, 20, 30}));
  std::set<std::string> uids;
  for (const Tweet& t : s) uids.insert(t.uid);
  EXPECT_EQ(uids.size(), 60u);

  const Corpus all = stratified_sample(c, c.size(), 5);
  EXPECT_EQ(all.size(), c.size());
  EXPECT_THROW(stratified_sample(c, c.size() + 1, 5), Error);
}

TEST(Corpus, FixtureProportionsAndCues) {
  const Corpus c = generate_fixture(7, 100);
  const auto d = label_distribution(c);
  EXPECT_EQ(d.counts, (std::array<std::size_t, 3>{17, 33, 50}));
  EXPECT_EQ(c, generate_fixture(7, 100));
  // Cues may be uppercased or elongated, so compare lowercased run-squeezed forms.
  auto key = [](std::string_view s) {
    std::string out;
    for (char ch : s) {
      const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (out.empty() || out.back() != lc) out += lc;
    }
    return out;
  };
  for (const Tweet& t : c) {
    std::array<std::size_t, 3> hits{};
    for (const Token& tok : t.tokens) {
      for (std::size_t k = 0; k < kNumClasses; ++k) {
        for (std::string_view cue : fixture_cue_words(sentiment_at(k))) hits[k] += key(cue) == key(tok.text);
      }
    }
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      if (k == index_of(t.sentiment)) {
        EXPECT_GE(hits[k], 1u) << t.uid;
      } else {
        EXPECT_EQ(hits[k], 0u) << t.uid;
      }
    }
  }
}

TEST(Corpus, ReadsFileFromDisk) {
  const Corpus c = read_corpus(SXSENTI_TEST_DATA_DIR "/mini.conll");
  EXPECT_EQ(c.size(), 4u);
  EXPECT_THROW(read_corpus(SXSENTI_TEST_DATA_DIR "/does_not_exist.conll"), Error);
}
