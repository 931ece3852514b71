#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sxsenti {

/// Per-token language annotation of the SentiMix corpus.
enum class LangTag : std::uint8_t { lang1, lang2, other, ne, ambiguous, mixed, fw, unk };

/// Class order is fixed: it is the logit order of every model and the
/// tie-break order of prediction (lowest index wins).
enum class Sentiment : std::uint8_t { negative = 0, neutral = 1, positive = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Sentiment, kNumClasses> kAllSentiments{
    Sentiment::negative, Sentiment::neutral, Sentiment::positive};

/// Unrecognized tags degrade to LangTag::unk.
LangTag parse_lang_tag(std::string_view text) noexcept;
std::string_view to_string(LangTag tag) noexcept;

/// Case-insensitive; nullopt for anything but positive/negative/neutral.
std::optional<Sentiment> parse_sentiment(std::string_view text) noexcept;
std::string_view to_string(Sentiment s) noexcept;

constexpr std::size_t index_of(Sentiment s) noexcept { return static_cast<std::size_t>(s); }
constexpr Sentiment sentiment_at(std::size_t i) noexcept { return static_cast<Sentiment>(i); }

struct Token {
  std::string text;
  LangTag lang = LangTag::unk;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Tweet {
  std::string uid;
  std::vector<Token> tokens;
  Sentiment sentiment = Sentiment::neutral;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

using Corpus = std::vector<Tweet>;

/// Reads the CoNLL-style corpus: records separated by blank lines, each opening
/// with `meta<TAB>uid<TAB>sentiment` followed by `token<TAB>langtag` lines.
/// Throws ParseError (with the offending line) on malformed input.
Corpus parse_conll(std::istream& in);
Corpus read_corpus(const std::filesystem::path& path);

void write_conll(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

struct LabelDistribution {
  std::array<std::size_t, kNumClasses> counts{};
  std::array<double, kNumClasses> proportions{};
  std::size_t total = 0;
};

/// Throws Error on an empty corpus.
LabelDistribution label_distribution(const Corpus& corpus);

/// Majority of lang1 vs lang2 over the tweet's tokens; `mixed` on a tie,
/// `other` when neither tag occurs.
LangTag mode_language(const Tweet& tweet);

struct ModeLanguageStats {
  std::size_t tweets = 0;
  std::size_t lang1 = 0;
  std::size_t lang2 = 0;
  std::size_t mixed = 0;
  std::size_t other = 0;

  double fraction_lang1() const { return tweets ? static_cast<double>(lang1) / tweets : 0.0; }
  double fraction_lang2() const { return tweets ? static_cast<double>(lang2) / tweets : 0.0; }
};

ModeLanguageStats mode_language_stats(std::span<const Tweet> tweets);

/// Largest-remainder apportionment of `n` seats over integer weights. Leftover
/// seats go to the largest fractional remainders; ties go to the lower index.
std::vector<std::size_t> apportion(std::size_t n, std::span<const std::size_t> weights);

/// Per-class quotas by largest remainder over the corpus label counts; uniform
/// selection without replacement within each class. Selected tweets keep their
/// corpus order. Throws Error when n exceeds the corpus size.
Corpus stratified_sample(const Corpus& corpus, std::size_t n, std::uint64_t seed);

/// Label counts of the SentiMix Spanish-English training split.
inline constexpr std::array<std::size_t, kNumClasses> kReferenceTrainCounts{2023, 3974, 6005};

/// Synthetic corpus with class-disjoint cue words, labels apportioned like the
/// reference training split. Requires n >= 3.
Corpus generate_fixture(std::uint64_t seed, std::size_t n);

/// Cue-word pool of one class in the generated fixture (lowercase forms).
std::span<const std::string_view> fixture_cue_words(Sentiment s);

}  // namespace sxsenti
