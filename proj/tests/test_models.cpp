#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sxsenti/error.hpp"
#include "sxsenti/models.hpp"

using namespace sxsenti;

namespace {

CnnConfig small_cnn(std::size_t vocab) {
  CnnConfig c;
  c.vocab_size = vocab;
  c.embedding_dim = 8;
  c.filter_widths = {2, 3};
  c.filters_per_width = 5;
  return c;
}

GruConfig small_gru(std::size_t vocab) {
  GruConfig c;
  c.vocab_size = vocab;
  c.embedding_dim = 6;
  c.hidden = 5;
  return c;
}

std::vector<std::vector<TokenId>> random_sequences(std::size_t n, std::size_t vocab, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(1, 9);
  std::uniform_int_distribution<TokenId> id(1, static_cast<TokenId>(vocab - 1));
  std::vector<std::vector<TokenId>> out(n);
  for (auto& s : out) {
    s.resize(len(rng));
    for (auto& t : s) t = id(rng);
  }
  return out;
}

SentimentModel tiny_model(const ModelConfig& config) {
  SentimentModel m;
  m.vocab = Vocabulary({"<pad>", "<unk>", "good", "bad", "meh", "day"});
  m.net = make_classifier(config, 5);
  m.preprocessing.normalize = false;
  return m;
}

std::string serialize(const SentimentModel& m) {
  std::ostringstream out;
  write_checkpoint(m, out);
  return out.str();
}

void expect_checkpoint_error(const std::string& bytes, std::optional<ModelKind> kind = {}) {
  std::istringstream in(bytes);
  EXPECT_THROW(read_checkpoint(in, kind), CheckpointError);
}

}  // namespace

TEST(Batch, PadsToMinimumWidth) {
  const std::vector<std::vector<TokenId>> seqs{{2, 3}, {4, 5, 6}};
  const std::vector<std::size_t> rows{0, 1}, labels{2, 0};
  const Batch b = make_padded_batch(seqs, rows, labels, 4);
  EXPECT_EQ(b.width, 4u);
  EXPECT_EQ(b.ids, (std::vector<TokenId>{2, 3, 0, 0, 4, 5, 6, 0}));
  EXPECT_EQ(b.lengths, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(make_padded_batch(seqs, rows, labels, 1).width, 3u);
  const std::vector<std::vector<TokenId>> bad{{}};
  const std::vector<std::size_t> r0{0};
  EXPECT_THROW(make_padded_batch(bad, r0, {}, 1), Error);
}

TEST(Config, Validation) {
  CnnConfig c;
  c.filter_widths = {3, 2};
  EXPECT_THROW(c.validate(), Error);
  c.filter_widths = {2, 3, 4};
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(CnnClassifier(small_cnn(10), 1).min_width(), 4u);
  CnnConfig wide = small_cnn(10);
  wide.filter_widths = {2, 6};
  EXPECT_EQ(CnnClassifier(wide, 1).min_width(), 6u);
}

TEST(Classifier, ZeroWeightsGiveBias) {
  std::mt19937_64 rng(1);
  const auto seqs = random_sequences(4, 10, rng);
  const std::vector<std::size_t> rows{0, 1, 2, 3};
  for (const ModelConfig& cfg : {ModelConfig{small_cnn(10)}, ModelConfig{small_gru(10)}}) {
    auto net = make_classifier(cfg, 3);
    for (Parameter* p : net->parameters()) p->value.fill(0.0);
    Parameter* out_bias = net->parameters().back();
    out_bias->value = Tensor({3}, {0.25, -1.0, 2.0});
    const Tensor logits = net->forward(make_padded_batch(seqs, rows, {}, net->min_width()), Mode::eval);
    for (std::size_t b = 0; b < 4; ++b) {
      EXPECT_EQ(logits.at(b, 0), 0.25);
      EXPECT_EQ(logits.at(b, 1), -1.0);
      EXPECT_EQ(logits.at(b, 2), 2.0);
    }
  }
}

TEST(Classifier, ParameterNames) {
  auto cnn = make_classifier(small_cnn(10), 1);
  std::vector<std::string> names;
  for (Parameter* p : cnn->parameters()) names.push_back(p->name);
  EXPECT_EQ(names, (std::vector<std::string>{"embedding.weight", "conv2.weight", "conv2.bias", "conv3.weight",
                                             "conv3.bias", "output.weight", "output.bias"}));
  auto gru = make_classifier(small_gru(10), 1);
  EXPECT_EQ(gru->parameters().front()->name, "embedding.weight");
  EXPECT_EQ(gru->parameters().back()->name, "output.bias");
}

TEST(Classifier, InitIsSeededAndPadRowZero) {
  auto a = make_classifier(small_cnn(10), 7);
  auto b = make_classifier(small_cnn(10), 7);
  auto c = make_classifier(small_cnn(10), 8);
  EXPECT_EQ(a->snapshot(), b->snapshot());
  EXPECT_NE(a->snapshot(), c->snapshot());
  const Tensor& emb = a->parameters().front()->value;
  for (std::size_t j = 0; j < emb.dim(1); ++j) EXPECT_EQ(emb.at(0, j), 0.0);
}

TEST(Classifier, PaddingInvariance) {
  std::mt19937_64 rng(2);
  const auto seqs = random_sequences(6, 10, rng);
  const std::vector<std::size_t> rows{0, 1, 2, 3, 4, 5};
  for (const ModelConfig& cfg : {ModelConfig{small_cnn(10)}, ModelConfig{small_gru(10)}}) {
    auto net = make_classifier(cfg, 4);
    const Tensor tight = net->forward(make_padded_batch(seqs, rows, {}, net->min_width()), Mode::eval);
    const Tensor wide = net->forward(make_padded_batch(seqs, rows, {}, 15), Mode::eval);
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      const std::vector<std::vector<TokenId>> one{seqs[i]};
      const std::vector<std::size_t> r{0};
      const Tensor alone = net->forward(make_padded_batch(one, r, {}, net->min_width()), Mode::eval);
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(tight.at(i, k), alone.at(0, k), 1e-9);
        EXPECT_NEAR(wide.at(i, k), alone.at(0, k), 1e-9);
      }
    }
  }
}

TEST(Classifier, EvalIsDeterministicTrainIsNot) {
  std::mt19937_64 rng(3);
  const auto seqs = random_sequences(8, 10, rng);
  const std::vector<std::size_t> rows{0, 1, 2, 3, 4, 5, 6, 7};
  auto net = make_classifier(small_cnn(10), 4);
  const Batch b = make_padded_batch(seqs, rows, {}, net->min_width());
  EXPECT_EQ(net->forward(b, Mode::eval), net->forward(b, Mode::eval));
  EXPECT_NE(net->forward(b, Mode::train), net->forward(b, Mode::train));
}

TEST(Prediction, ArgmaxTiesGoLow) {
  EXPECT_EQ(argmax_class(std::vector<double>{1, 1, 0}), Sentiment::negative);
  EXPECT_EQ(argmax_class(std::vector<double>{0, 2, 2}), Sentiment::neutral);
  EXPECT_EQ(argmax_class(std::vector<double>{0, 0, 3}), Sentiment::positive);
}

TEST(Prediction, EmptyTweetThrows) {
  SentimentModel m = tiny_model(small_cnn(6));
  Tweet t;
  t.uid = "x";
  EXPECT_THROW(predict(m, t), Error);
  t.tokens = {{"good", LangTag::lang1}};
  EXPECT_NO_THROW(predict(m, t));
}

TEST(Prediction, BatchedMatchesSingle) {
  SentimentModel m = tiny_model(small_gru(6));
  Corpus corpus;
  const char* words[] = {"good", "bad", "meh", "day", "zzz"};
  for (int i = 0; i < 70; ++i) {
    Tweet t;
    t.uid = std::to_string(i);
    for (int j = 0; j <= i % 6; ++j) t.tokens.push_back({words[(i * 7 + j) % 5], LangTag::lang1});
    corpus.push_back(t);
  }
  const auto all = predict_all(m, corpus, 16);
  ASSERT_EQ(all.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(all[i], predict(m, corpus[i]));
}

TEST(Checkpoint, RoundTripBothKinds) {
  std::mt19937_64 rng(5);
  const auto seqs = random_sequences(5, 6, rng);
  for (const ModelConfig& cfg : {ModelConfig{small_cnn(6)}, ModelConfig{small_gru(6)}}) {
    SentimentModel m = tiny_model(cfg);
    m.preprocessing.normalize = true;
    m.preprocessing.lang_aware = false;
    m.preprocessing.unigrams = UnigramModel(std::map<std::string, std::uint64_t>{{"good", 5}, {"day", 2}});
    m.net->round_to_float32();
    const std::string bytes = serialize(m);
    EXPECT_EQ(bytes.substr(0, 8), "SXSENTI1");

    std::istringstream in(bytes);
    SentimentModel back = read_checkpoint(in, m.net->kind());
    EXPECT_EQ(back.vocab, m.vocab);
    EXPECT_EQ(back.net->config(), m.net->config());
    EXPECT_EQ(back.net->snapshot(), m.net->snapshot());
    EXPECT_TRUE(back.preprocessing.normalize);
    EXPECT_FALSE(back.preprocessing.lang_aware);
    EXPECT_EQ(back.preprocessing.unigrams.frequency("good"), 5u);
    EXPECT_EQ(serialize(back), bytes);

    EXPECT_EQ(predict_logits(*back.net, seqs), predict_logits(*m.net, seqs));
  }
}

TEST(Checkpoint, RejectsCorruption) {
  SentimentModel m = tiny_model(small_cnn(6));
  const std::string good = serialize(m);

  std::string magic = good;
  magic[0] = 'X';
  expect_checkpoint_error(magic);
  expect_checkpoint_error(good.substr(0, good.size() - 3));
  expect_checkpoint_error(good.substr(0, 12));
  expect_checkpoint_error(good + "junk");
  expect_checkpoint_error("");
  expect_checkpoint_error(good, ModelKind::gru);

  // Manifest length pointing past the end.
  std::string len = good;
  len[8 + 6] = '\x7f';
  expect_checkpoint_error(len);

  // Garbled manifest JSON.
  std::string json = good;
  json[16] = '#';
  expect_checkpoint_error(json);

  EXPECT_THROW(load_checkpoint("/nonexistent/dir/model.bin"), Error);
}
