#include "sxsenti/normalizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <regex>
#include <set>

#include "sxsenti/error.hpp"
#include "sxsenti/utf8.hpp"

namespace sxsenti {

namespace {

constexpr std::array<std::string_view, 10> kEntityTokens{
    "<url>", "<email>", "<percent>", "<money>", "<phone>",
    "<user>", "<time>", "<date>", "<number>", "<hashtag>"};

constexpr std::array<std::string_view, 5> kAnnotationTokens{
    "<allcaps>", "<elongated>", "<repeated>", "<emphasized>", "<censored>"};

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u == '_' ||
         u >= 0x80;
}

// '@' or '#' followed by one or more word characters (UTF-8 letters included).
bool is_sigil_word(std::string_view token, char sigil) {
  if (token.size() < 2 || token.front() != sigil) return false;
  return std::all_of(token.begin() + 1, token.end(), is_word_byte);
}

const std::regex& url_re() {
  static const std::regex re(R"((?:https?://|www\.)\S+)", std::regex::icase);
  return re;
}
const std::regex& email_re() {
  static const std::regex re(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})");
  return re;
}
const std::regex& percent_re() {
  static const std::regex re(R"([+-]?\d+(?:[.,]\d+)?%)");
  return re;
}
const std::regex& money_re() {
  static const std::regex re(
      "(?:\\$|\xC2\xA3|\xE2\x82\xAC)\\d+(?:[.,]\\d+)*[kKmM]?|\\d+(?:[.,]\\d+)*(?:\\$|\xC2\xA3|\xE2\x82\xAC)");
  return re;
}
const std::regex& phone_re() {
  static const std::regex re(R"((?:\+\d{1,3}[-.]?)?(?:\(\d{3}\)|\d{3})[-.]?\d{3}[-.]\d{4})");
  return re;
}
const std::regex& time_re() {
  static const std::regex re(R"(\d{1,2}:\d{2}(?::\d{2})?(?:[ap]\.?m\.?)?|\d{1,2}[ap]\.?m\.?)",
                             std::regex::icase);
  return re;
}
const std::regex& date_re() {
  static const std::regex re(R"(\d{1,4}[/-]\d{1,2}[/-]\d{1,4})");
  return re;
}
const std::regex& number_re() {
  static const std::regex re(R"([+-]?\d+(?:[.,]\d+)*)");
  return re;
}

bool full_match(std::string_view s, const std::regex& re) {
  return std::regex_match(s.begin(), s.end(), re);
}

bool all_punct(const std::u32string& cps) {
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), utf8::is_punct);
}

bool has_letter(const std::u32string& cps) {
  return std::any_of(cps.begin(), cps.end(), utf8::is_letter);
}

void add_annotation(std::vector<StyleAnnotation>& list, StyleAnnotation a) {
  if (std::find(list.begin(), list.end(), a) == list.end()) list.push_back(a);
}

struct Run {
  std::size_t start;
  std::size_t length;
};

std::vector<Run> long_letter_runs(const std::u32string& cps) {
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t j = i + 1;
    while (j < cps.size() && cps[j] == cps[i]) ++j;
    if (j - i >= 3 && utf8::is_letter(cps[i])) runs.push_back({i, j - i});
    i = j;
  }
  return runs;
}

// Each long run is cut to length 1 or 2; the most frequent resulting word wins,
// all-ones when nothing scores. Runs past the twelfth are always cut to 1.
std::u32string reduce_elongation(const std::u32string& cps, const std::vector<Run>& runs,
                                 const UnigramModel& unigrams) {
  const std::size_t free_runs = std::min<std::size_t>(runs.size(), 12);
  auto build = [&](std::uint32_t mask) {
    std::u32string out;
    std::size_t pos = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      out.append(cps, pos, runs[r].start - pos);
      const std::size_t keep = (r < free_runs && (mask >> r) & 1U) ? 2 : 1;
      out.append(keep, cps[runs[r].start]);
      pos = runs[r].start + runs[r].length;
    }
    out.append(cps, pos, std::u32string::npos);
    return out;
  };
  std::u32string best = build(0);
  std::uint64_t best_freq = unigrams.frequency(utf8::encode(best));
  for (std::uint32_t mask = 1; mask < (1U << free_runs); ++mask) {
    std::u32string candidate = build(mask);
    const std::uint64_t f = unigrams.frequency(utf8::encode(candidate));
    if (f > best_freq) {
      best_freq = f;
      best = std::move(candidate);
    }
  }
  return best;
}

bool within_one_edit(const std::u32string& a, const std::u32string& b) {
  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  if (la == lb) {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < la && diff < 2; ++i) diff += a[i] != b[i];
    return diff == 1;
  }
  const std::u32string& shorter = la < lb ? a : b;
  const std::u32string& longer = la < lb ? b : a;
  if (longer.size() - shorter.size() != 1) return false;
  std::size_t i = 0;
  while (i < shorter.size() && shorter[i] == longer[i]) ++i;
  return std::equal(shorter.begin() + static_cast<std::ptrdiff_t>(i), shorter.end(),
                    longer.begin() + static_cast<std::ptrdiff_t>(i) + 1);
}

bool has_triple_run(const std::u32string& cps) {
  for (std::size_t i = 2; i < cps.size(); ++i) {
    if (cps[i] == cps[i - 1] && cps[i] == cps[i - 2]) return true;
  }
  return false;
}

struct TaggedToken {
  NormalizedToken token;
  LangTag lang;
};

NormalizedToken normalize_word(std::string_view text, const UnigramModel& unigrams) {
  if (const auto kind = map_entity(text); kind && *kind != EntityKind::hashtag) {
    return {std::string(descriptive_token(*kind)), {}};
  }
  NormalizedToken nt = annotate_style(text, unigrams);
  const bool censored = std::find(nt.annotations.begin(), nt.annotations.end(),
                                  StyleAnnotation::censored) != nt.annotations.end();
  if (!censored && utf8::is_alphabetic(nt.surface)) nt.surface = spell_correct(nt.surface, unigrams);
  return nt;
}

std::vector<TaggedToken> normalize_tagged(std::span<const Token> tokens, const UnigramModel& unigrams,
                                          const NormalizerOptions& options) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  auto emit = [&](std::string surface, LangTag lang, std::vector<StyleAnnotation> ann = {}) {
    out.push_back({{std::move(surface), std::move(ann)}, lang});
  };

  for (const Token& token : tokens) {
    const std::string_view text = token.text;

    // Annotation markers re-attach to the word they follow.
    if (const auto ann = parse_annotation_token(text)) {
      if (!out.empty()) {
        add_annotation(out.back().token.annotations, *ann);
      } else {
        emit(std::string(text), token.lang);
      }
      continue;
    }
    if (is_marker_token(text)) {
      emit(std::string(text), token.lang);
      continue;
    }

    const bool rewrite = !(options.lang_aware && token.lang == LangTag::lang2);
    const auto kind = map_entity(text);
    if (kind == EntityKind::hashtag) {
      emit(std::string(descriptive_token(EntityKind::hashtag)), token.lang);
      std::string_view body = text;
      while (!body.empty() && body.front() == '#') body.remove_prefix(1);
      if (rewrite) {
        const std::string lowered = utf8::to_lower(body);
        std::vector<std::string> pieces;
        if (utf8::is_alphabetic(lowered)) {
          pieces = segment_words(lowered, unigrams);
        } else {
          pieces.push_back(lowered);
        }
        for (const std::string& piece : pieces) {
          out.push_back({normalize_word(piece, unigrams), token.lang});
        }
      } else {
        emit(std::string(body), token.lang);
      }
      emit(std::string(kHashtagClose), token.lang);
      continue;
    }
    if (kind) {
      emit(std::string(descriptive_token(*kind)), token.lang);
      continue;
    }
    if (!rewrite) {
      emit(std::string(text), token.lang);
      continue;
    }
    out.push_back({normalize_word(text, unigrams), token.lang});
  }
  return out;
}

}  // namespace

std::string_view descriptive_token(EntityKind kind) noexcept {
  return kEntityTokens[static_cast<std::size_t>(kind)];
}

std::string_view annotation_token(StyleAnnotation a) noexcept {
  return kAnnotationTokens[static_cast<std::size_t>(a)];
}

std::optional<StyleAnnotation> parse_annotation_token(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kAnnotationTokens.size(); ++i) {
    if (kAnnotationTokens[i] == text) return static_cast<StyleAnnotation>(i);
  }
  return std::nullopt;
}

bool is_marker_token(std::string_view text) noexcept {
  if (text == kHashtagClose) return true;
  if (parse_annotation_token(text)) return true;
  return std::find(kEntityTokens.begin(), kEntityTokens.end(), text) != kEntityTokens.end();
}

UnigramModel::UnigramModel(const std::map<std::string, std::uint64_t>& counts) {
  for (const auto& [word, count] : counts) {
    if (count == 0) throw Error("unigram count for '" + word + "' must be positive");
    add(word, count);
  }
}

void UnigramModel::add(std::string_view word, std::uint64_t count) {
  if (word.empty() || count == 0) return;
  auto [it, inserted] = frequency_.try_emplace(std::string(word), 0);
  it->second += count;
  total_ += count;
  if (inserted && utf8::is_alphabetic(word)) {
    std::u32string cps = utf8::decode(word);
    by_length_[cps.size()].push_back(std::move(cps));
  }
}

UnigramModel UnigramModel::parse(std::istream& in) {
  UnigramModel model;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t space = line.rfind(' ');
    if (space == std::string::npos || space == 0) {
      throw ParseError(line_no, "expected '<word> <count>'");
    }
    const std::string_view word(line.data(), space);
    const std::string_view count_text(line.data() + space + 1, line.size() - space - 1);
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count == 0) {
      throw ParseError(line_no, "invalid count '" + std::string(count_text) + "'");
    }
    model.add(word, count);
  }
  return model;
}

UnigramModel UnigramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open unigram file " + path.string());
  return parse(in);
}

UnigramModel UnigramModel::from_corpus(const Corpus& corpus) {
  UnigramModel model;
  for (const Tweet& tweet : corpus) {
    for (const Token& token : tweet.tokens) {
      const std::string lowered = utf8::to_lower(token.text);
      if (!utf8::is_alphabetic(lowered) || has_triple_run(utf8::decode(lowered))) continue;
      model.add(lowered, 1);
    }
  }
  return model;
}

std::uint64_t UnigramModel::frequency(std::string_view word) const {
  const auto it = frequency_.find(std::string(word));
  return it == frequency_.end() ? 0 : it->second;
}

double UnigramModel::probability(std::string_view word) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(frequency(word)) / static_cast<double>(total_);
}

std::vector<std::pair<std::string, std::uint64_t>> UnigramModel::entries() const {
  std::vector<std::pair<std::string, std::uint64_t>> out(frequency_.begin(), frequency_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::span<const std::u32string> UnigramModel::words_of_length(std::size_t length) const {
  const auto it = by_length_.find(length);
  if (it == by_length_.end()) return {};
  return it->second;
}

std::optional<EntityKind> map_entity(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (full_match(token, url_re())) return EntityKind::url;
  if (full_match(token, email_re())) return EntityKind::email;
  if (is_sigil_word(token, '@')) return EntityKind::user;
  if (is_sigil_word(token, '#')) return EntityKind::hashtag;
  // Everything below needs a digit; skip the regex work for plain words.
  if (std::none_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  if (full_match(token, percent_re())) return EntityKind::percent;
  if (full_match(token, money_re())) return EntityKind::money;
  if (full_match(token, phone_re())) return EntityKind::phone;
  if (full_match(token, time_re())) return EntityKind::time;
  if (full_match(token, date_re())) return EntityKind::date;
  if (full_match(token, number_re())) return EntityKind::number;
  return std::nullopt;
}

NormalizedToken annotate_style(std::string_view token, const UnigramModel& unigrams) {
  NormalizedToken out;
  std::u32string cps = utf8::decode(token);

  if (all_punct(cps)) {
    std::u32string collapsed;
    for (char32_t c : cps) {
      if (collapsed.empty() || collapsed.back() != c) collapsed.push_back(c);
    }
    if (collapsed.size() != cps.size()) out.annotations.push_back(StyleAnnotation::repeated);
    out.surface = utf8::encode(collapsed);
    return out;
  }

  if (cps.size() >= 3 && (cps.front() == U'*' || cps.front() == U'_') && cps.back() == cps.front()) {
    const char32_t wrap = cps.front();
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    while (lo < hi && cps[lo] == wrap) ++lo;
    while (hi > lo && cps[hi - 1] == wrap) --hi;
    const std::u32string inner = cps.substr(lo, hi - lo);
    if (has_letter(inner) && inner.find(U'*') == std::u32string::npos) {
      out.annotations.push_back(StyleAnnotation::emphasized);
      cps = inner;
    }
  }

  if (has_letter(cps) && cps.find(U'*') != std::u32string::npos) {
    out.annotations.push_back(StyleAnnotation::censored);
    out.surface = utf8::encode(cps);
    return out;
  }

  if (cps.size() >= 2 && std::all_of(cps.begin(), cps.end(),
                                     [](char32_t c) { return utf8::is_letter(c) && utf8::is_upper(c); })) {
    for (char32_t& c : cps) c = utf8::to_lower(c);
    out.annotations.push_back(StyleAnnotation::allcaps);
  }

  if (const auto runs = long_letter_runs(cps); !runs.empty()) {
    cps = reduce_elongation(cps, runs, unigrams);
    out.annotations.push_back(StyleAnnotation::elongated);
  }

  out.surface = utf8::encode(cps);
  return out;
}

std::vector<std::string> segment_words(std::string_view compound, const UnigramModel& unigrams) {
  const std::u32string cps = utf8::decode(compound);
  const std::size_t n = cps.size();
  if (n == 0) return {};
  if (unigrams.total() == 0) return {std::string(compound)};

  const double total = static_cast<double>(unigrams.total());
  const double unseen = -std::log(total * 10.0);
  auto log_prob = [&](const std::string& piece) {
    const std::uint64_t f = unigrams.frequency(piece);
    return f > 0 ? std::log(static_cast<double>(f) / total) : unseen;
  };

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, kNegInf);
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t end = 1; end <= n; ++end) {
    // Ascending start: the longest final piece is tried first and only a
    // strictly better score replaces it.
    for (std::size_t start = 0; start < end; ++start) {
      const double score = best[start] + log_prob(utf8::encode(cps.substr(start, end - start)));
      if (score > best[end]) {
        best[end] = score;
        back[end] = start;
      }
    }
  }

  std::vector<std::string> pieces;
  for (std::size_t end = n; end > 0; end = back[end]) {
    pieces.push_back(utf8::encode(cps.substr(back[end], end - back[end])));
  }
  std::reverse(pieces.begin(), pieces.end());
  return pieces;
}

std::string spell_correct(std::string_view word, const UnigramModel& unigrams) {
  if (unigrams.contains(word)) return std::string(word);
  const std::u32string cps = utf8::decode(word);

  std::string best;
  std::uint64_t best_freq = 0;
  for (std::size_t len = cps.empty() ? 0 : cps.size() - 1; len <= cps.size() + 1; ++len) {
    for (const std::u32string& candidate : unigrams.words_of_length(len)) {
      if (!within_one_edit(cps, candidate)) continue;
      std::string text = utf8::encode(candidate);
      const std::uint64_t f = unigrams.frequency(text);
      if (f > best_freq || (f == best_freq && text < best)) {
        best_freq = f;
        best = std::move(text);
      }
    }
  }
  return best_freq > 0 ? best : std::string(word);
}

std::vector<std::string> tokenize_raw(std::string_view text) {
  static const std::set<std::string_view> kEmoticons{
      ":)", ":(", ":-)", ":-(", ":D", ":-D", ":P", ":-P", ":p", ";)", ";-)", ":/", ":'(",
      ":o", ":O", "<3", "xD", "XD", "=)", "=(", ":|", ":*", "^^", "^_^", "-_-", ":v"};

  auto protected_chunk = [&](std::string_view chunk) {
    return kEmoticons.count(chunk) > 0 || full_match(chunk, url_re()) ||
           full_match(chunk, email_re()) || is_sigil_word(chunk, '@') || is_sigil_word(chunk, '#');
  };
  auto punct = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && utf8::is_punct(u);
  };

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) break;
    const std::string_view chunk = text.substr(i, j - i);
    i = j;

    if (protected_chunk(chunk)) {
      out.emplace_back(chunk);
      continue;
    }
    std::size_t tail = chunk.size();
    while (tail > 0 && punct(chunk[tail - 1])) --tail;
    if (tail == 0) {
      out.emplace_back(chunk);
      continue;
    }
    if (tail < chunk.size() && protected_chunk(chunk.substr(0, tail))) {
      out.emplace_back(chunk.substr(0, tail));
      out.emplace_back(chunk.substr(tail));
      continue;
    }
    std::size_t head = 0;
    while (head < tail && punct(chunk[head])) {
      const bool sigil = chunk[head] == '@' || chunk[head] == '#';
      if (sigil && head + 1 < tail && is_word_byte(chunk[head + 1])) break;
      ++head;
    }
    if (head > 0) out.emplace_back(chunk.substr(0, head));
    out.emplace_back(chunk.substr(head, tail - head));
    if (tail < chunk.size()) out.emplace_back(chunk.substr(tail));
  }
  return out;
}

std::vector<NormalizedToken> normalize_tokens(std::span<const Token> tokens,
                                              const UnigramModel& unigrams,
                                              const NormalizerOptions& options) {
  std::vector<NormalizedToken> out;
  for (auto& tagged : normalize_tagged(tokens, unigrams, options)) out.push_back(std::move(tagged.token));
  return out;
}

std::vector<std::string> serialize(std::span<const NormalizedToken> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const NormalizedToken& t : tokens) {
    out.push_back(t.surface);
    for (StyleAnnotation a : t.annotations) out.emplace_back(annotation_token(a));
  }
  return out;
}

std::vector<Token> serialize_tagged(std::span<const Token> input, const UnigramModel& unigrams,
                                    const NormalizerOptions& options) {
  std::vector<Token> out;
  for (const TaggedToken& t : normalize_tagged(input, unigrams, options)) {
    out.push_back(Token{t.token.surface, t.lang});
    for (StyleAnnotation a : t.token.annotations) out.push_back(Token{std::string(annotation_token(a)), t.lang});
  }
  return out;
}

}  // namespace sxsenti
