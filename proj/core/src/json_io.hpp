#pragma once

// nlohmann conversions shared by checkpoint and training code. Not installed.

#include <json.hpp>

#include "sxsenti/models.hpp"

namespace sxsenti {

using Json = nlohmann::json;

inline Json config_to_json(const ModelConfig& config) {
  if (const auto* c = std::get_if<CnnConfig>(&config)) {
    return Json{{"vocab_size", c->vocab_size},       {"embedding_dim", c->embedding_dim},
                {"filter_widths", c->filter_widths}, {"filters_per_width", c->filters_per_width},
                {"dropout", c->dropout},             {"classes", c->classes}};
  }
  const auto& g = std::get<GruConfig>(config);
  return Json{{"vocab_size", g.vocab_size}, {"embedding_dim", g.embedding_dim}, {"hidden", g.hidden},
              {"dropout", g.dropout},       {"classes", g.classes}};
}

// Missing keys keep their defaults.
inline ModelConfig config_from_json(ModelKind kind, const Json& j) {
  if (kind == ModelKind::cnn) {
    CnnConfig c;
    c.vocab_size = j.value("vocab_size", c.vocab_size);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.filter_widths = j.value("filter_widths", c.filter_widths);
    c.filters_per_width = j.value("filters_per_width", c.filters_per_width);
    c.dropout = j.value("dropout", c.dropout);
    c.classes = j.value("classes", c.classes);
    return c;
  }
  GruConfig g;
  g.vocab_size = j.value("vocab_size", g.vocab_size);
  g.embedding_dim = j.value("embedding_dim", g.embedding_dim);
  g.hidden = j.value("hidden", g.hidden);
  g.dropout = j.value("dropout", g.dropout);
  g.classes = j.value("classes", g.classes);
  return g;
}

}  // namespace sxsenti
