#include "sxsenti/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "sxsenti/error.hpp"
#include "sxsenti/rng.hpp"
#include "sxsenti/utf8.hpp"

namespace sxsenti {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{std::string(kPadToken), std::string(kUnkToken)}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.size() < 2 || words_[0] != kPadToken || words_[1] != kUnkToken) {
    throw Error("vocabulary must start with <pad> and <unk>");
  }
  index_of_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_of_.emplace(words_[i], static_cast<TokenId>(i)).second) {
      throw Error("duplicate vocabulary entry '" + words_[i] + "'");
    }
  }
}

std::optional<TokenId> Vocabulary::find(std::string_view word) const {
  const auto it = index_of_.find(std::string(word));
  if (it == index_of_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> tokenized, std::size_t max_size) {
  if (max_size < 3) throw Error("vocabulary size must be at least 3");
  std::map<std::string, std::size_t> counts;
  for (const auto& tokens : tokenized) {
    for (const std::string& t : tokens) {
      std::string lowered = utf8::to_lower(t);
      if (lowered == kPadToken || lowered == kUnkToken) continue;
      ++counts[std::move(lowered)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is ordered lexicographically, so a stable sort by count keeps the tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> words{std::string(kPadToken), std::string(kUnkToken)};
  for (auto& [word, count] : ranked) {
    if (words.size() >= max_size) break;
    words.push_back(std::move(word));
  }
  return Vocabulary(std::move(words));
}

std::vector<TokenId> encode(std::span<const std::string> surfaces, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  ids.reserve(surfaces.size());
  for (const std::string& s : surfaces) {
    ids.push_back(vocab.find(utf8::to_lower(s)).value_or(Vocabulary::kUnkIndex));
  }
  return ids;
}

std::vector<std::string> decode(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(vocab.word(id));
  return out;
}

const std::vector<double>* PretrainedTable::find(std::string_view word) const {
  const auto it = vectors.find(std::string(word));
  return it == vectors.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool parse_unsigned(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

PretrainedTable load_embeddings_text(std::istream& in, std::optional<std::size_t> expected_dim) {
  PretrainedTable table;
  std::optional<std::size_t> dim = expected_dim;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;

    if (first) {
      first = false;
      std::size_t count = 0;
      std::size_t header_dim = 0;
      if (fields.size() == 2 && parse_unsigned(fields[0], count) && parse_unsigned(fields[1], header_dim)) {
        if (dim && *dim != header_dim) {
          throw ParseError(line_no, "header declares dimension " + std::to_string(header_dim) +
                                        ", expected " + std::to_string(*dim));
        }
        dim = header_dim;
        continue;
      }
    }

    const std::size_t width = fields.size() - 1;
    if (width == 0) throw ParseError(line_no, "word without vector");
    if (!dim) dim = width;
    if (width != *dim) {
      throw ParseError(line_no, "vector has " + std::to_string(width) + " values, expected " +
                                    std::to_string(*dim));
    }
    std::vector<double> vec(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (!parse_double(fields[k + 1], vec[k])) {
        throw ParseError(line_no, "non-numeric value '" + std::string(fields[k + 1]) + "'");
      }
    }
    table.vectors.try_emplace(std::string(fields[0]), std::move(vec));
  }
  table.dim = dim.value_or(0);
  return table;
}

PretrainedTable load_embeddings_file(const std::filesystem::path& path,
                                     std::optional<std::size_t> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return load_embeddings_text(in, expected_dim);
}

Tensor init_embedding_matrix(const Vocabulary& vocab, const PretrainedTable& table, std::size_t dim,
                             std::uint64_t seed) {
  if (dim == 0) throw Error("embedding dimension must be positive");
  if (table.size() > 0 && table.dim != dim) {
    throw Error("pretrained dimension " + std::to_string(table.dim) + " differs from model dimension " +
                std::to_string(dim));
  }
  Tensor matrix({vocab.size(), dim});
  Rng rng(derive_seed(seed, 0xe3b));
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto row = matrix.row(i);
    // Draw for every row so OOV rows do not depend on table coverage.
    for (double& v : row) v = rng.uniform(-kOovInitRange, kOovInitRange);
    if (i == static_cast<std::size_t>(Vocabulary::kPadIndex)) {
      std::fill(row.begin(), row.end(), 0.0);
    } else if (const auto* vec = table.find(vocab.words()[i])) {
      std::copy(vec->begin(), vec->end(), row.begin());
    }
  }
  return matrix;
}

}  // namespace sxsenti
