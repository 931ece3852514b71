#include <array>
#include <cstring>
#include <fstream>
#include <limits>

#include "json_io.hpp"
#include "sxsenti/error.hpp"
#include "sxsenti/models.hpp"

namespace sxsenti {
namespace {

constexpr std::uint64_t kMaxManifestBytes = std::uint64_t{1} << 31;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw CheckpointError("checkpoint truncated in header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void put_floats(std::ostream& out, const Tensor& t) {
  std::vector<char> buf(t.size() * 4);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const float f = static_cast<float>(t[i]);
    std::uint32_t bits = 0;
    std::memcpy(&bits, &f, 4);
    for (int k = 0; k < 4; ++k) buf[i * 4 + k] = static_cast<char>((bits >> (8 * k)) & 0xff);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void get_floats(std::istream& in, Tensor& t, const std::string& name) {
  std::vector<unsigned char> buf(t.size() * 4);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw CheckpointError("checkpoint truncated in tensor " + name);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::uint32_t bits = 0;
    for (int k = 3; k >= 0; --k) bits = (bits << 8) | buf[i * 4 + k];
    float f = 0;
    std::memcpy(&f, &bits, 4);
    t[i] = f;
  }
}

}  // namespace

void write_checkpoint(const SentimentModel& model, std::ostream& out) {
  if (!model.net) throw CheckpointError("cannot save a model without a network");
  auto& net = *model.net;
  Json tensors = Json::array();
  const auto params = net.parameters();
  for (const Parameter* p : params) tensors.push_back({{"name", p->name}, {"shape", p->value.shape()}});

  Json unigrams = Json::array();
  for (const auto& [word, count] : model.preprocessing.unigrams.entries()) unigrams.push_back({word, count});

  const Json manifest{
      {"version", kCheckpointVersion},
      {"kind", std::string(to_string(net.kind()))},
      {"config", config_to_json(net.config())},
      {"normalization",
       {{"enabled", model.preprocessing.normalize}, {"lang_aware", model.preprocessing.lang_aware}, {"unigrams", unigrams}}},
      {"vocabulary", model.vocab.words()},
      {"tensors", tensors},
  };
  const std::string text = manifest.dump();
  out.write(kCheckpointMagic.data(), static_cast<std::streamsize>(kCheckpointMagic.size()));
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Parameter* p : params) put_floats(out, p->value);
  if (!out) throw CheckpointError("failed writing checkpoint");
}

void save_checkpoint(const SentimentModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  write_checkpoint(model, out);
}

SentimentModel read_checkpoint(std::istream& in, std::optional<ModelKind> expected_kind) {
  std::string magic(kCheckpointMagic.size(), '\0');
  if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size())) || magic != kCheckpointMagic) {
    throw CheckpointError("not a checkpoint (bad magic)");
  }
  const std::uint64_t length = get_u64(in);
  if (length > kMaxManifestBytes) throw CheckpointError("manifest length out of range");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw CheckpointError("checkpoint truncated in manifest");

  SentimentModel model;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> declared;
  try {
    const Json manifest = Json::parse(text);
    const int version = manifest.at("version").get<int>();
    if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    const auto kind = parse_model_kind(manifest.at("kind").get<std::string>());
    if (!kind) throw CheckpointError("unknown model kind in checkpoint");
    if (expected_kind && *expected_kind != *kind) {
      throw CheckpointError("checkpoint holds a " + std::string(to_string(*kind)) + " model, expected " +
                            std::string(to_string(*expected_kind)));
    }
    const Json& norm = manifest.at("normalization");
    model.preprocessing.normalize = norm.at("enabled").get<bool>();
    model.preprocessing.lang_aware = norm.at("lang_aware").get<bool>();
    for (const Json& entry : norm.at("unigrams")) {
      model.preprocessing.unigrams.add(entry.at(0).get<std::string>(), entry.at(1).get<std::uint64_t>());
    }
    model.vocab = Vocabulary(manifest.at("vocabulary").get<std::vector<std::string>>());
    ModelConfig config = config_from_json(*kind, manifest.at("config"));
    model.net = make_classifier(config, 0);
    for (const Json& t : manifest.at("tensors")) {
      declared.emplace_back(t.at("name").get<std::string>(), t.at("shape").get<std::vector<std::size_t>>());
    }
  } catch (const CheckpointError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint manifest: ") + e.what());
  } catch (const Error& e) {
    throw CheckpointError(std::string("invalid checkpoint: ") + e.what());
  }

  const auto params = model.net->parameters();
  if (declared.size() != params.size()) throw CheckpointError("checkpoint tensor count does not match the model");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (declared[i].first != params[i]->name || declared[i].second != params[i]->value.shape()) {
      throw CheckpointError("checkpoint tensor " + declared[i].first + " does not match model parameter " +
                            params[i]->name + " " + params[i]->value.shape_string());
    }
  }
  if (model.vocab.size() != model.net->parameters().front()->value.dim(0)) {
    throw CheckpointError("vocabulary size does not match the embedding matrix");
  }
  for (Parameter* p : params) get_floats(in, p->value, p->name);
  if (in.peek() != std::char_traits<char>::eof()) throw CheckpointError("trailing bytes after checkpoint tensors");
  return model;
}

SentimentModel load_checkpoint(const std::filesystem::path& path, std::optional<ModelKind> expected_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, expected_kind);
}

}  // namespace sxsenti
