#include <benchmark/benchmark.h>

#include <random>

#include "sxsenti/layers.hpp"
#include "sxsenti/models.hpp"
#include "sxsenti/normalizer.hpp"

using namespace sxsenti;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = u(rng);
  return t;
}

void BM_Conv1dForwardBackward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  Conv1d conv(100, width, 200);
  conv.weight().value = random_tensor({100, width, 200}, 1);
  const Tensor x = random_tensor({64, 30, 200}, 2);
  for (auto _ : state) {
    const Tensor y = conv.forward(x);
    benchmark::DoNotOptimize(conv.backward(y));
  }
}
BENCHMARK(BM_Conv1dForwardBackward)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GruStep(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  GruCell cell(300, hidden);
  cell.input_weights().value = random_tensor({3 * hidden, 300}, 3);
  cell.recurrent_weights().value = random_tensor({3 * hidden, hidden}, 4);
  const Tensor x = random_tensor({32, 300}, 5), h = random_tensor({32, hidden}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(cell.step(x, h, nullptr));
}
BENCHMARK(BM_GruStep)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_CnnClassifierEval(benchmark::State& state) {
  CnnConfig cfg;
  cfg.vocab_size = 5000;
  auto net = make_classifier(cfg, 1);
  std::mt19937_64 rng(7);
  std::vector<std::vector<TokenId>> seqs(64);
  for (auto& s : seqs) {
    s.resize(5 + rng() % 25);
    for (auto& t : s) t = static_cast<TokenId>(2 + rng() % 4998);
  }
  for (auto _ : state) benchmark::DoNotOptimize(predict_logits(*net, seqs));
}
BENCHMARK(BM_CnnClassifierEval)->Unit(benchmark::kMillisecond);

void BM_NormalizeTweet(benchmark::State& state) {
  const UnigramModel uni(std::map<std::string, std::uint64_t>{
      {"the", 900}, {"best", 90}, {"day", 250}, {"ever", 80}, {"love", 200}, {"this", 400}, {"so", 350}});
  const std::vector<Token> tweet{{"@amigo", LangTag::other}, {"LOVE", LangTag::lang1},  {"thiiiis", LangTag::lang1},
                                 {"#bestdayever", LangTag::other}, {"helo", LangTag::lang1}, {"!!!", LangTag::other},
                                 {"que", LangTag::lang2},     {"bonitooo", LangTag::lang2}, {"5:30", LangTag::other}};
  for (auto _ : state) benchmark::DoNotOptimize(normalize_tokens(tweet, uni, NormalizerOptions{true}));
}
BENCHMARK(BM_NormalizeTweet);

}  // namespace
BENCHMARK_MAIN();
