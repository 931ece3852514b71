#include "sxsenti/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "sxsenti/error.hpp"
#include "sxsenti/rng.hpp"
#include "sxsenti/utf8.hpp"

namespace sxsenti {

namespace {

struct TagName {
  LangTag tag;
  std::string_view name;
};

constexpr std::array<TagName, 8> kTagNames{{
    {LangTag::lang1, "lang1"},
    {LangTag::lang2, "lang2"},
    {LangTag::other, "other"},
    {LangTag::ne, "ne"},
    {LangTag::ambiguous, "ambiguous"},
    {LangTag::mixed, "mixed"},
    {LangTag::fw, "fw"},
    {LangTag::unk, "unk"},
}};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

LangTag parse_lang_tag(std::string_view text) noexcept {
  for (const auto& [tag, name] : kTagNames) {
    if (name == text) return tag;
  }
  return LangTag::unk;
}

std::string_view to_string(LangTag tag) noexcept {
  return kTagNames[static_cast<std::size_t>(tag)].name;
}

std::optional<Sentiment> parse_sentiment(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; });
  if (lower == "negative") return Sentiment::negative;
  if (lower == "neutral") return Sentiment::neutral;
  if (lower == "positive") return Sentiment::positive;
  return std::nullopt;
}

std::string_view to_string(Sentiment s) noexcept {
  switch (s) {
    case Sentiment::negative: return "negative";
    case Sentiment::neutral: return "neutral";
    case Sentiment::positive: return "positive";
  }
  return "neutral";
}

Corpus parse_conll(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::optional<Tweet> current;
  std::size_t record_line = 0;

  auto finish = [&] {
    if (!current) return;
    if (current->tokens.empty()) {
      throw ParseError(record_line, "record '" + current->uid + "' has no tokens");
    }
    corpus.push_back(std::move(*current));
    current.reset();
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      finish();
      continue;
    }

    const auto fields = split_tabs(line);
    if (!current) {
      if (fields.size() != 3 || fields[0] != "meta") {
        throw ParseError(line_no, "expected 'meta<TAB>uid<TAB>sentiment', got '" + raw + "'");
      }
      if (fields[1].empty()) throw ParseError(line_no, "empty uid");
      const auto sentiment = parse_sentiment(fields[2]);
      if (!sentiment) {
        throw ParseError(line_no, "unknown sentiment '" + std::string(fields[2]) + "'");
      }
      std::string uid(fields[1]);
      if (!seen.insert(uid).second) throw ParseError(line_no, "duplicate uid '" + uid + "'");
      current = Tweet{std::move(uid), {}, *sentiment};
      record_line = line_no;
      continue;
    }

    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(line_no, "expected 'token<TAB>langtag', got '" + raw + "'");
    }
    current->tokens.push_back(Token{std::string(fields[0]), parse_lang_tag(fields[1])});
  }
  finish();
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return parse_conll(in);
}

void write_conll(std::ostream& out, const Corpus& corpus) {
  bool first = true;
  for (const Tweet& tweet : corpus) {
    if (!first) out << '\n';
    first = false;
    out << "meta\t" << tweet.uid << '\t' << to_string(tweet.sentiment) << '\n';
    for (const Token& token : tweet.tokens) {
      out << token.text << '\t' << to_string(token.lang) << '\n';
    }
  }
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path.string());
  write_conll(out, corpus);
}

LabelDistribution label_distribution(const Corpus& corpus) {
  if (corpus.empty()) throw Error("label distribution of an empty corpus is undefined");
  LabelDistribution dist;
  for (const Tweet& tweet : corpus) ++dist.counts[index_of(tweet.sentiment)];
  dist.total = corpus.size();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    dist.proportions[c] = static_cast<double>(dist.counts[c]) / static_cast<double>(dist.total);
  }
  return dist;
}

LangTag mode_language(const Tweet& tweet) {
  std::size_t en = 0;
  std::size_t es = 0;
  for (const Token& token : tweet.tokens) {
    if (token.lang == LangTag::lang1) ++en;
    if (token.lang == LangTag::lang2) ++es;
  }
  if (en == 0 && es == 0) return LangTag::other;
  if (en == es) return LangTag::mixed;
  return en > es ? LangTag::lang1 : LangTag::lang2;
}

ModeLanguageStats mode_language_stats(std::span<const Tweet> tweets) {
  ModeLanguageStats stats;
  stats.tweets = tweets.size();
  for (const Tweet& tweet : tweets) {
    switch (mode_language(tweet)) {
      case LangTag::lang1: ++stats.lang1; break;
      case LangTag::lang2: ++stats.lang2; break;
      case LangTag::mixed: ++stats.mixed; break;
      default: ++stats.other; break;
    }
  }
  return stats;
}

std::vector<std::size_t> apportion(std::size_t n, std::span<const std::size_t> weights) {
  std::size_t total = 0;
  for (std::size_t w : weights) total += w;
  std::vector<std::size_t> seats(weights.size(), 0);
  if (total == 0) return seats;

  __extension__ typedef unsigned __int128 u128;
  // Exact integer arithmetic: quota_i = n * w_i / total, remainder kept as numerator.
  std::vector<std::size_t> remainders(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const u128 scaled = static_cast<u128>(n) * weights[i];
    seats[i] = static_cast<std::size_t>(scaled / total);
    remainders[i] = static_cast<std::size_t>(scaled % total);
    assigned += seats[i];
  }
  std::vector<std::size_t> order(weights.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++seats[order[k % order.size()]];
  return seats;
}

Corpus stratified_sample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n > corpus.size()) {
    throw Error("sample size " + std::to_string(n) + " exceeds corpus size " +
                std::to_string(corpus.size()));
  }
  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    members[index_of(corpus[i].sentiment)].push_back(i);
  }
  std::array<std::size_t, kNumClasses> counts{};
  for (std::size_t c = 0; c < kNumClasses; ++c) counts[c] = members[c].size();
  const auto quotas = apportion(n, counts);

  Rng rng(derive_seed(seed, 0x5a3b1e));
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& pool = members[c];
    // Partial Fisher-Yates: the first quota slots become a uniform subset.
    for (std::size_t k = 0; k < quotas[c]; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.below(pool.size() - k));
      std::swap(pool[k], pool[j]);
      chosen.push_back(pool[k]);
    }
  }
  std::sort(chosen.begin(), chosen.end());

  Corpus sample;
  sample.reserve(chosen.size());
  for (std::size_t i : chosen) sample.push_back(corpus[i]);
  return sample;
}

namespace {

struct PoolWord {
  std::string_view text;
  LangTag lang;
};

constexpr std::array<PoolWord, 12> kPositiveCues{{
    {"love", LangTag::lang1}, {"great", LangTag::lang1}, {"happy", LangTag::lang1},
    {"awesome", LangTag::lang1}, {"best", LangTag::lang1}, {"amazing", LangTag::lang1},
    {"feliz", LangTag::lang2}, {"genial", LangTag::lang2}, {"amor", LangTag::lang2},
    {"bonito", LangTag::lang2}, {"alegre", LangTag::lang2}, {"gracias", LangTag::lang2},
}};
constexpr std::array<PoolWord, 12> kNegativeCues{{
    {"hate", LangTag::lang1}, {"awful", LangTag::lang1}, {"sad", LangTag::lang1},
    {"worst", LangTag::lang1}, {"angry", LangTag::lang1}, {"terrible", LangTag::lang1},
    {"odio", LangTag::lang2}, {"triste", LangTag::lang2}, {"malo", LangTag::lang2},
    {"horrible", LangTag::lang2}, {"asco", LangTag::lang2}, {"enojado", LangTag::lang2},
}};
constexpr std::array<PoolWord, 12> kNeutralCues{{
    {"today", LangTag::lang1}, {"meeting", LangTag::lang1}, {"schedule", LangTag::lang1},
    {"weather", LangTag::lang1}, {"news", LangTag::lang1}, {"office", LangTag::lang1},
    {"tarde", LangTag::lang2}, {"reunion", LangTag::lang2}, {"clima", LangTag::lang2},
    {"noticias", LangTag::lang2}, {"oficina", LangTag::lang2}, {"horario", LangTag::lang2},
}};
constexpr std::array<PoolWord, 20> kFillers{{
    {"the", LangTag::lang1}, {"and", LangTag::lang1}, {"is", LangTag::lang1},
    {"to", LangTag::lang1},  {"my", LangTag::lang1},  {"with", LangTag::lang1},
    {"at", LangTag::lang1},  {"on", LangTag::lang1},  {"just", LangTag::lang1},
    {"this", LangTag::lang1}, {"la", LangTag::lang2}, {"el", LangTag::lang2},
    {"de", LangTag::lang2},  {"que", LangTag::lang2}, {"en", LangTag::lang2},
    {"con", LangTag::lang2}, {"por", LangTag::lang2}, {"mi", LangTag::lang2},
    {"y", LangTag::lang2},   {"los", LangTag::lang2},
}};
constexpr std::array<std::string_view, 6> kEntities{
    "@amigo", "http://t.co/x1", "#tbt", "10", "5pm", "50%"};

const std::array<std::string_view, 12>& cue_text(Sentiment s) {
  static const auto make = [](const std::array<PoolWord, 12>& pool) {
    std::array<std::string_view, 12> out{};
    for (std::size_t i = 0; i < pool.size(); ++i) out[i] = pool[i].text;
    return out;
  };
  static const std::array<std::array<std::string_view, 12>, kNumClasses> texts{
      make(kNegativeCues), make(kNeutralCues), make(kPositiveCues)};
  return texts[index_of(s)];
}

const std::array<PoolWord, 12>& cue_pool(Sentiment s) {
  switch (s) {
    case Sentiment::negative: return kNegativeCues;
    case Sentiment::neutral: return kNeutralCues;
    case Sentiment::positive: return kPositiveCues;
  }
  return kNeutralCues;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Stretches one vowel that has no identical neighbour ("love" -> "loooove").
std::string elongate(std::string_view word, Rng& rng) {
  std::vector<std::size_t> spots;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const bool same_prev = i > 0 && word[i - 1] == word[i];
    const bool same_next = i + 1 < word.size() && word[i + 1] == word[i];
    if (is_vowel(word[i]) && !same_prev && !same_next) spots.push_back(i);
  }
  if (spots.empty()) return std::string(word);
  const std::size_t at = spots[rng.below(spots.size())];
  const std::size_t extra = 2 + rng.below(3);
  std::string out(word.substr(0, at + 1));
  out.append(extra, word[at]);
  out.append(word.substr(at + 1));
  return out;
}

std::string uppercase(std::string_view word) {
  std::string out(word);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
  }
  return out;
}

}  // namespace

std::span<const std::string_view> fixture_cue_words(Sentiment s) { return cue_text(s); }

Corpus generate_fixture(std::uint64_t seed, std::size_t n) {
  if (n < 3) throw Error("fixture size must be at least 3");
  Rng rng(derive_seed(seed, 0xf1c7));

  const auto quotas = apportion(n, kReferenceTrainCounts);
  std::vector<Sentiment> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < kNumClasses; ++c) labels.insert(labels.end(), quotas[c], sentiment_at(c));
  rng.shuffle(std::span<Sentiment>(labels));

  Corpus corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sentiment label = labels[i];
    const auto& cues = cue_pool(label);
    const std::size_t length = 4 + rng.below(7);
    const std::size_t cue_count = 1 + rng.below(2);

    Tweet tweet;
    tweet.uid = std::to_string(i + 1);
    tweet.sentiment = label;
    tweet.tokens.reserve(length);
    for (std::size_t k = 0; k < length; ++k) {
      const auto& w = kFillers[rng.below(kFillers.size())];
      tweet.tokens.push_back(Token{std::string(w.text), w.lang});
    }
    if (rng.bernoulli(0.25)) {
      tweet.tokens[rng.below(length)] =
          Token{std::string(kEntities[rng.below(kEntities.size())]), LangTag::other};
    }
    for (std::size_t k = 0; k < cue_count; ++k) {
      const auto& w = cues[rng.below(cues.size())];
      std::string text(w.text);
      const double style = rng.uniform();
      if (style < 0.12) {
        text = uppercase(text);
      } else if (style < 0.22) {
        text = elongate(text, rng);
      }
      tweet.tokens[rng.below(length)] = Token{std::move(text), w.lang};
    }
    // A cue may have overwritten another cue; guarantee at least one survives.
    const auto& own = cue_text(label);
    const bool has_cue = std::any_of(tweet.tokens.begin(), tweet.tokens.end(), [&](const Token& t) {
      return std::find(own.begin(), own.end(), utf8::to_lower(t.text)) != own.end();
    });
    if (!has_cue) {
      const auto& w = cues[rng.below(cues.size())];
      tweet.tokens[0] = Token{std::string(w.text), w.lang};
    }
    corpus.push_back(std::move(tweet));
  }
  return corpus;
}

}  // namespace sxsenti
