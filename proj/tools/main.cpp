// sxsenti command line: corpus stats, normalization, training, evaluation,
// prediction, ablation and the error-analysis workflow.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sxsenti/analysis.hpp"
#include "sxsenti/corpus.hpp"
#include "sxsenti/error.hpp"
#include "sxsenti/evaluation.hpp"
#include "sxsenti/gradcheck.hpp"
#include "sxsenti/models.hpp"
#include "sxsenti/normalizer.hpp"
#include "sxsenti/training.hpp"

using namespace sxsenti;

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("SXSENTI_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw Error(std::string("SXSENTI_SEED is not an integer: ") + env);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename F>
void with_output(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write(out);
  if (!out) throw Error("failed writing " + path);
}

std::vector<Sentiment> golds_of(const Corpus& corpus) {
  std::vector<Sentiment> out;
  for (const Tweet& t : corpus) out.push_back(t.sentiment);
  return out;
}

struct TrainFlags {
  std::string model;
  std::string train;
  std::string dev;
  std::string embeddings;
  std::string config;
  std::string unigrams;
  std::string report;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr;
  std::optional<std::string> optimizer;
  std::optional<std::size_t> max_vocab;
  bool no_normalize = false;
  bool no_lang_aware = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--model", model, "cnn or gru")->check(CLI::IsMember({"cnn", "gru"}));
    cmd.add_option("--train", train, "training corpus")->required()->check(CLI::ExistingFile);
    cmd.add_option("--dev", dev, "development corpus")->required()->check(CLI::ExistingFile);
    cmd.add_option("--embeddings", embeddings, "pretrained vectors, text format")->check(CLI::ExistingFile);
    cmd.add_option("--config", config, "TrainConfig JSON")->check(CLI::ExistingFile);
    cmd.add_option("--unigrams", unigrams, "word frequency list for the normalizer")->check(CLI::ExistingFile);
    cmd.add_option("--report", report, "write the JSON report here as well");
    cmd.add_option("--seed", seed, "defaults to $SXSENTI_SEED, else 0");
    cmd.add_option("--epochs", epochs);
    cmd.add_option("--batch-size", batch_size);
    cmd.add_option("--lr", lr, "learning rate");
    cmd.add_option("--optimizer", optimizer)->check(CLI::IsMember({"adam", "adamw"}));
    cmd.add_option("--max-vocab", max_vocab);
    cmd.add_flag("--no-normalize", no_normalize, "train on raw tokens");
    cmd.add_flag("--no-lang-aware", no_lang_aware, "normalize Spanish tokens too");
  }

  TrainConfig resolve() const {
    const ModelKind flag_kind = model.empty() ? ModelKind::cnn : *parse_model_kind(model);
    TrainConfig c = TrainConfig::defaults(flag_kind);
    c.seed = default_seed();
    if (!config.empty()) c = train_config_from_json(read_file(config), c);
    if (!model.empty() && c.kind != flag_kind) throw Error("--model " + model + " contradicts the config file");
    if (seed) c.seed = *seed;
    if (epochs) c.epochs = *epochs;
    if (batch_size) c.batch_size = *batch_size;
    if (lr) c.learning_rate = *lr;
    if (optimizer) c.optimizer = *parse_optimizer_kind(*optimizer);
    if (max_vocab) c.max_vocab = *max_vocab;
    if (no_normalize) c.normalize = false;
    if (no_lang_aware) c.lang_aware = false;
    c.validate();
    return c;
  }

  PretrainedTable load_embeddings(const TrainConfig& c) const {
    if (embeddings.empty()) return {};
    return load_embeddings_file(embeddings, embedding_dim_of(c.model));
  }

  TrainOptions options() const {
    TrainOptions o;
    if (!unigrams.empty()) o.unigrams = UnigramModel::load(unigrams);
    return o;
  }
};

int cmd_stats(const std::string& path, bool json) {
  const Corpus corpus = read_corpus(path);
  const LabelDistribution d = label_distribution(corpus);
  const ModeLanguageStats m = mode_language_stats(corpus);
  if (json) {
    std::printf("{\n  \"tweets\": %zu,\n  \"labels\": {", d.total);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      std::printf("%s\"%s\": {\"count\": %zu, \"proportion\": %.6f}", c ? ", " : "",
                  std::string(to_string(sentiment_at(c))).c_str(), d.counts[c], d.proportions[c]);
    }
    std::printf("},\n  \"mode_language\": {\"lang1\": %zu, \"lang2\": %zu, \"mixed\": %zu, \"other\": %zu, "
                "\"fraction_lang1\": %.6f, \"fraction_lang2\": %.6f}\n}\n",
                m.lang1, m.lang2, m.mixed, m.other, m.fraction_lang1(), m.fraction_lang2());
    return 0;
  }
  std::printf("tweets    %zu\n", d.total);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::printf("%-9s %6zu  %5.1f%%\n", std::string(to_string(sentiment_at(c))).c_str(), d.counts[c],
                100.0 * d.proportions[c]);
  }
  std::printf("\nmode language\n");
  std::printf("lang1     %6zu  %5.1f%%\n", m.lang1, 100.0 * m.fraction_lang1());
  std::printf("lang2     %6zu  %5.1f%%\n", m.lang2, 100.0 * m.fraction_lang2());
  std::printf("mixed     %6zu\nother     %6zu\n", m.mixed, m.other);
  return 0;
}

int cmd_normalize(const std::string& path, bool lang_aware, const std::string& unigram_path, const std::string& out,
                  bool conll) {
  const Corpus corpus = read_corpus(path);
  const UnigramModel unigrams = unigram_path.empty() ? UnigramModel::from_corpus(corpus) : UnigramModel::load(unigram_path);
  Corpus normalized;
  normalized.reserve(corpus.size());
  for (const Tweet& t : corpus) {
    normalized.push_back({t.uid, serialize_tagged(t.tokens, unigrams, NormalizerOptions{lang_aware}), t.sentiment});
  }
  with_output(out, [&](std::ostream& os) {
    if (conll) {
      write_conll(os, normalized);
      return;
    }
    for (const Tweet& t : normalized) {
      for (std::size_t i = 0; i < t.tokens.size(); ++i) os << (i ? " " : "") << t.tokens[i].text;
      os << '\n';
    }
  });
  return 0;
}

int cmd_train(const TrainFlags& flags, const std::string& out) {
  const TrainConfig config = flags.resolve();
  const Corpus train = read_corpus(flags.train);
  const Corpus dev = read_corpus(flags.dev);
  TrainOptions options = flags.options();
  options.checkpoint = out;
  options.hooks.on_epoch = [](const EpochStats& s, SentimentModel&) {
    std::fprintf(stderr, "epoch %zu  loss %.6f  dev macro-F1 %.4f\n", s.epoch, s.mean_loss, s.dev_macro_f1);
    return true;
  };
  const TrainResult result = train_model(train, dev, config, flags.load_embeddings(config), options);
  const std::string json = train_report_json(result.report);
  if (!flags.report.empty()) with_output(flags.report, [&](std::ostream& os) { os << json << '\n'; });
  std::cout << json << '\n';
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& data, bool json) {
  SentimentModel model = load_checkpoint(checkpoint);
  const Corpus corpus = read_corpus(data);
  const EvalReport report = evaluate(predict_all(model, corpus), golds_of(corpus));
  std::cout << (json ? report_json(report) + "\n" : report_table(report));
  return 0;
}

int cmd_predict(const std::string& checkpoint, const std::string& text, const std::string& data, const std::string& out) {
  SentimentModel model = load_checkpoint(checkpoint);
  Corpus corpus;
  if (!data.empty()) {
    corpus = read_corpus(data);
  } else {
    Tweet t;
    t.uid = "text";
    for (std::string& w : tokenize_raw(text)) t.tokens.push_back({std::move(w), LangTag::unk});
    if (t.tokens.empty()) throw Error("--text holds no tokens");
    corpus.push_back(std::move(t));
  }
  const auto preds = predict_all(model, corpus);
  with_output(out, [&](std::ostream& os) {
    os << "Uid,Sentiment\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) os << corpus[i].uid << ',' << to_string(preds[i]) << '\n';
  });
  return 0;
}

int cmd_ablate(const TrainFlags& flags) {
  const TrainConfig config = flags.resolve();
  const Corpus train = read_corpus(flags.train);
  const Corpus dev = read_corpus(flags.dev);
  const AblationResult r = run_ablation(train, dev, config, flags.load_embeddings(config), flags.options());
  const std::string json = ablation_json(r);
  if (!flags.report.empty()) with_output(flags.report, [&](std::ostream& os) { os << json << '\n'; });
  std::cout << json << '\n';
  std::fprintf(stderr, "macro-F1 with normalization %.4f, without %.4f, delta %+.4f\n", r.dev_with.macro_f1,
               r.dev_without.macro_f1, r.delta);
  return 0;
}

int cmd_sample(const std::string& checkpoint, const std::string& data, std::size_t n, std::uint64_t seed,
               const std::string& out) {
  SentimentModel model = load_checkpoint(checkpoint);
  const Corpus corpus = read_corpus(data);
  const auto records = sample_for_annotation(corpus, model, n, seed);
  with_output(out, [&](std::ostream& os) { write_annotations(os, records); });
  return 0;
}

int cmd_report(const std::string& path, bool json) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  const CategoryReport report = category_report(parse_annotations(in));
  std::cout << (json ? category_report_json(report) + "\n" : category_report_table(report));
  return 0;
}

int cmd_gradcheck(std::uint64_t seed, double tolerance) {
  bool ok = true;
  for (const GradSuiteCase& c : run_gradient_suite(seed)) {
    const bool pass = c.result.max_relative_error < tolerance;
    ok = ok && pass;
    std::printf("%-26s %4s  max rel err %.3e  (%zu components, worst %s[%zu])\n", c.name.c_str(),
                pass ? "ok" : "FAIL", c.result.max_relative_error, c.result.components, c.result.worst_target.c_str(),
                c.result.worst_index);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentiment classification for Spanish-English code-switched tweets"};
  app.require_subcommand(1);

  std::string corpus_path, unigrams, out, checkpoint, data, text, annotations;
  bool json = false, lang_aware = false, conll = false;
  std::size_t n = 300;
  std::optional<std::uint64_t> seed;
  std::uint64_t grad_seed = 42;
  double tolerance = 1e-4;
  TrainFlags train_flags, ablate_flags;

  auto* stats = app.add_subcommand("stats", "label distribution and mode-language statistics");
  stats->add_option("corpus", corpus_path)->required()->check(CLI::ExistingFile);
  stats->add_flag("--json", json);

  auto* normalize = app.add_subcommand("normalize", "write the normalized corpus");
  normalize->add_option("corpus", corpus_path)->required()->check(CLI::ExistingFile);
  normalize->add_flag("--lang-aware", lang_aware, "leave Spanish (lang2) tokens untouched");
  normalize->add_option("--unigrams", unigrams)->check(CLI::ExistingFile);
  normalize->add_option("--out", out, "defaults to stdout");
  normalize->add_flag("--conll", conll, "keep the tagged corpus format instead of one tweet per line");

  auto* train = app.add_subcommand("train", "train a classifier, keep the best epoch");
  train_flags.add_to(*train);
  train->add_option("--out", out, "checkpoint path")->required();

  auto* eval = app.add_subcommand("eval", "class-wise scores of a checkpoint");
  eval->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("--data", data)->required()->check(CLI::ExistingFile);
  eval->add_flag("--json", json);

  auto* predict = app.add_subcommand("predict", "write Uid,Sentiment predictions");
  predict->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  auto* text_opt = predict->add_option("--text", text, "raw tweet text");
  auto* data_opt = predict->add_option("--data", data)->check(CLI::ExistingFile);
  text_opt->excludes(data_opt);
  predict->add_option("--out", out, "defaults to stdout");

  auto* ablate = app.add_subcommand("ablate", "train with and without normalization");
  ablate_flags.add_to(*ablate);

  auto* sample = app.add_subcommand("sample", "stratified sample for manual error analysis");
  sample->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  sample->add_option("--data", data)->required()->check(CLI::ExistingFile);
  sample->add_option("--n", n);
  sample->add_option("--seed", seed);
  sample->add_option("--out", out, "defaults to stdout");

  auto* report = app.add_subcommand("report", "summarize an annotated sample");
  report->add_option("--annotations", annotations)->required()->check(CLI::ExistingFile);
  report->add_flag("--json", json);

  std::size_t fixture_n = 200;
  auto* fixture = app.add_subcommand("fixture", "write a synthetic labelled corpus");
  fixture->add_option("--n", fixture_n);
  fixture->add_option("--seed", seed);
  fixture->add_option("--out", out, "defaults to stdout");

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of every layer");
  gradcheck->add_option("--seed", grad_seed);
  gradcheck->add_option("--tolerance", tolerance);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) return cmd_stats(corpus_path, json);
    if (*normalize) return cmd_normalize(corpus_path, lang_aware, unigrams, out, conll);
    if (*train) return cmd_train(train_flags, out);
    if (*eval) return cmd_eval(checkpoint, data, json);
    if (*predict) {
      if (text.empty() && data.empty()) throw Error("predict needs --text or --data");
      return cmd_predict(checkpoint, text, data, out);
    }
    if (*ablate) return cmd_ablate(ablate_flags);
    if (*sample) return cmd_sample(checkpoint, data, n, seed ? *seed : default_seed(), out);
    if (*report) return cmd_report(annotations, json);
    if (*fixture) {
      const Corpus corpus = generate_fixture(seed ? *seed : default_seed(), fixture_n);
      with_output(out, [&](std::ostream& os) { write_conll(os, corpus); });
      return 0;
    }
    if (*gradcheck) return cmd_gradcheck(grad_seed, tolerance);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sxsenti: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
