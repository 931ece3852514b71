#pragma once

// Loader for tests/data/normalizer_golden.tsv, shared with the acceptance run.

#include <fstream>
#include <string>
#include <vector>

#include "sxsenti/corpus.hpp"

struct GoldenCase {
  std::size_t line = 0;
  bool lang_aware = true;
  std::vector<sxsenti::Token> tokens;
  std::string expected;
};

inline std::vector<GoldenCase> load_golden(const std::string& path) {
  std::ifstream in(path);
  std::vector<GoldenCase> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty() || line[0] == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 + 1);
    GoldenCase c;
    c.line = no;
    c.lang_aware = line.substr(0, t1) == "1";
    c.expected = line.substr(t2 + 1);
    std::string toks = line.substr(t1 + 1, t2 - t1 - 1);
    std::size_t pos = 0;
    while (pos <= toks.size()) {
      auto sp = toks.find(' ', pos);
      if (sp == std::string::npos) sp = toks.size();
      const std::string item = toks.substr(pos, sp - pos);
      const auto bar = item.rfind('|');
      c.tokens.push_back({item.substr(0, bar), sxsenti::parse_lang_tag(item.substr(bar + 1))});
      pos = sp + 1;
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}
