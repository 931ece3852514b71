#include <gtest/gtest.h>

#include <sstream>

#include "sxsenti/embeddings.hpp"
#include "sxsenti/error.hpp"

using namespace sxsenti;

namespace {

std::vector<std::vector<std::string>> docs(std::initializer_list<std::pair<const char*, int>> freq) {
  std::vector<std::vector<std::string>> out(1);
  for (const auto& [w, n] : freq)
    for (int i = 0; i < n; ++i) out[0].emplace_back(w);
  return out;
}

std::size_t error_line(const std::string& text, std::optional<std::size_t> dim = {}) {
  std::istringstream in(text);
  try {
    load_embeddings_text(in, dim);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Embeddings, LoadsWithHeader) {
  std::istringstream in("2 3\nhola 1 2 3\ncasa 4 5 6\n");
  const PretrainedTable t = load_embeddings_text(in);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dim, 3u);
  EXPECT_EQ(*t.find("casa"), (std::vector<double>{4, 5, 6}));
}

TEST(Embeddings, LoadErrorsAndFirstWins) {
  EXPECT_EQ(error_line("hola 1 2 3\ncasa 4 5\n"), 2u);
  EXPECT_EQ(error_line("hola 1 x 3\n"), 1u);
  EXPECT_EQ(error_line("hola 1 2 3\n", 4), 1u);
  std::istringstream in("a 1 1\nb 2 2\nc 3 3\nd 4 4\nx 5 5\ne 6 6\nf 7 7\ng 8 8\nx 9 9\n");
  const PretrainedTable t = load_embeddings_text(in);
  EXPECT_EQ(*t.find("x"), (std::vector<double>{5, 5}));
}

TEST(Embeddings, VocabularyOrderAndTies) {
  const Vocabulary v = build_vocabulary(docs({{"a", 3}, {"b", 2}, {"c", 1}}), 4);
  EXPECT_EQ(v.words(), (std::vector<std::string>{"<pad>", "<unk>", "a", "b"}));
  const Vocabulary t = build_vocabulary(docs({{"y", 2}, {"x", 2}}), 4);
  EXPECT_EQ(t.words(), (std::vector<std::string>{"<pad>", "<unk>", "x", "y"}));
  EXPECT_THROW(build_vocabulary(docs({{"a", 1}}), 2), Error);
}

TEST(Embeddings, VocabularyCapIsExact) {
  std::vector<std::vector<std::string>> corpus(1);
  for (int i = 0; i < 20000; ++i) corpus[0].push_back("w" + std::to_string(i));
  EXPECT_EQ(build_vocabulary(corpus, 15000).size(), 15000u);
}

TEST(Embeddings, EncodeLowercasesAndMapsUnknown) {
  const Vocabulary v = build_vocabulary(docs({{"a", 3}, {"b", 2}, {"c", 1}}), 4);
  const std::vector<std::string> in{"a", "zzz"};
  EXPECT_EQ(encode(in, v), (std::vector<TokenId>{2, 1}));
  EXPECT_TRUE(encode(std::vector<std::string>{}, v).empty());
  EXPECT_EQ(encode(std::vector<std::string>{"A"}, v), (std::vector<TokenId>{2}));
  const std::vector<TokenId> ids{2, 3, 0};
  EXPECT_EQ(encode(decode(ids, v), v), ids);
}

TEST(Embeddings, MatrixInit) {
  const Vocabulary v = build_vocabulary(docs({{"hola", 3}, {"casa", 2}, {"perro", 1}}), 10);
  std::istringstream in("hola 0.5 -0.5 2\n");
  const PretrainedTable table = load_embeddings_text(in);
  const Tensor m = init_embedding_matrix(v, table, 3, 9);
  EXPECT_EQ(m.shape(), (std::vector<std::size_t>{v.size(), 3}));
  const auto hola = static_cast<std::size_t>(*v.find("hola"));
  EXPECT_EQ(m.at(hola, 0), 0.5);
  EXPECT_EQ(m.at(hola, 2), 2.0);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.at(0, j), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (i == hola) continue;
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_LE(std::abs(m.at(i, j)), 0.25);
    }
  }
  EXPECT_EQ(m, init_embedding_matrix(v, table, 3, 9));
  EXPECT_NE(m, init_embedding_matrix(v, table, 3, 10));
  EXPECT_THROW(init_embedding_matrix(v, table, 4, 9), Error);
}
