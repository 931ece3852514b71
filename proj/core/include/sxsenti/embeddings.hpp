#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sxsenti/tensor.hpp"

namespace sxsenti {

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

using TokenId = std::int32_t;

class Vocabulary {
 public:
  static constexpr TokenId kPadIndex = 0;
  static constexpr TokenId kUnkIndex = 1;

  /// Only the two specials.
  Vocabulary();

  /// `words` must start with the two specials and hold no duplicates.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(TokenId id) const { return words_.at(static_cast<std::size_t>(id)); }

  /// Exact lookup (no case folding); nullopt when absent.
  std::optional<TokenId> find(std::string_view word) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId> index_of_;
};

/// Specials first, then the `max_size - 2` most frequent lowercased surfaces,
/// ties broken lexicographically. Throws Error when max_size < 3.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> tokenized, std::size_t max_size);

/// Lowercased lookup; unknown surfaces map to the unk index.
std::vector<TokenId> encode(std::span<const std::string> surfaces, const Vocabulary& vocab);
std::vector<std::string> decode(std::span<const TokenId> ids, const Vocabulary& vocab);

struct PretrainedTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  std::size_t size() const noexcept { return vectors.size(); }
  const std::vector<double>* find(std::string_view word) const;
};

/// Plain-text vectors, `<word> <v1> ... <vd>` per line, with an optional
/// `<count> <dim>` header. First occurrence of a word wins.
PretrainedTable load_embeddings_text(std::istream& in, std::optional<std::size_t> expected_dim = {});
PretrainedTable load_embeddings_file(const std::filesystem::path& path,
                                     std::optional<std::size_t> expected_dim = {});

inline constexpr double kOovInitRange = 0.25;

/// |vocab| x dim matrix: pretrained rows copied, other rows uniform in
/// [-0.25, 0.25] under `seed`, the pad row zero. Throws Error when the table
/// is non-empty and its dimension differs from `dim`.
Tensor init_embedding_matrix(const Vocabulary& vocab, const PretrainedTable& table, std::size_t dim,
                             std::uint64_t seed);

}  // namespace sxsenti
