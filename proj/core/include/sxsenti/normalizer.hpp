#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sxsenti/corpus.hpp"

namespace sxsenti {

enum class EntityKind : std::uint8_t {
  url, email, percent, money, phone, user, time, date, number, hashtag
};

enum class StyleAnnotation : std::uint8_t { allcaps, elongated, repeated, emphasized, censored };

/// `<url>`, `<user>`, ... The hashtag kind opens a `<hashtag> ... </hashtag>` span.
std::string_view descriptive_token(EntityKind kind) noexcept;
/// `<allcaps>`, `<elongated>`, ...
std::string_view annotation_token(StyleAnnotation a) noexcept;

inline constexpr std::string_view kHashtagClose = "</hashtag>";

std::optional<StyleAnnotation> parse_annotation_token(std::string_view text) noexcept;
/// True for descriptive tokens, annotation tokens and the hashtag close marker.
bool is_marker_token(std::string_view text) noexcept;

struct NormalizedToken {
  std::string surface;
  std::vector<StyleAnnotation> annotations;

  friend bool operator==(const NormalizedToken&, const NormalizedToken&) = default;
};

/// Word frequency table backing segmentation and spell correction.
class UnigramModel {
 public:
  UnigramModel() = default;
  /// Throws Error when a count is zero.
  explicit UnigramModel(const std::map<std::string, std::uint64_t>& counts);

  /// Lines `<word><SPACE><count>`; blank lines ignored; repeated words accumulate.
  static UnigramModel parse(std::istream& in);
  static UnigramModel load(const std::filesystem::path& path);

  /// Counts lowercased tokens of the corpus. Used when no frequency list is supplied.
  static UnigramModel from_corpus(const Corpus& corpus);

  void add(std::string_view word, std::uint64_t count);

  std::uint64_t frequency(std::string_view word) const;
  bool contains(std::string_view word) const { return frequency(word) > 0; }
  double probability(std::string_view word) const;
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return frequency_.size(); }
  bool empty() const noexcept { return frequency_.empty(); }

  /// Words sorted lexicographically, with counts.
  std::vector<std::pair<std::string, std::uint64_t>> entries() const;

  /// In-model words whose code-point length is `length`.
  std::span<const std::u32string> words_of_length(std::size_t length) const;

 private:
  std::unordered_map<std::string, std::uint64_t> frequency_;
  std::unordered_map<std::size_t, std::vector<std::u32string>> by_length_;
  std::uint64_t total_ = 0;
};

/// Entity class of a single token, by precedence
/// url > email > user > hashtag > percent > money > phone > time > date > number.
std::optional<EntityKind> map_entity(std::string_view token);

/// Style labelling of a non-entity token. Emphasis unwrapping, all-caps
/// lowercasing, elongation reduction and punctuation-run collapsing.
NormalizedToken annotate_style(std::string_view token, const UnigramModel& unigrams);

/// Most probable split under the unigram model; unseen pieces score
/// 1 / (10 * total). Falls back to the single segment unless a split is strictly better.
std::vector<std::string> segment_words(std::string_view compound, const UnigramModel& unigrams);

/// Identity for in-model words; otherwise the most frequent in-model word at
/// edit distance 1 (lexicographic tie-break); otherwise the input.
std::string spell_correct(std::string_view word, const UnigramModel& unigrams);

/// Whitespace split with punctuation runs peeled off; URLs, mentions,
/// hashtags, e-mail addresses and emoticons stay whole.
std::vector<std::string> tokenize_raw(std::string_view text);

struct NormalizerOptions {
  /// Skip style annotation, segmentation and spell correction for lang2 tokens.
  bool lang_aware = true;
};

std::vector<NormalizedToken> normalize_tokens(std::span<const Token> tokens,
                                              const UnigramModel& unigrams,
                                              const NormalizerOptions& options);

/// Surface followed by its annotation tokens, e.g. {"wow", "<allcaps>"}.
std::vector<std::string> serialize(std::span<const NormalizedToken> tokens);

/// Serialized surfaces tagged with the language of the token they came from,
/// so the result can be fed back into normalize_tokens.
std::vector<Token> serialize_tagged(std::span<const Token> input, const UnigramModel& unigrams,
                                    const NormalizerOptions& options);

}  // namespace sxsenti
