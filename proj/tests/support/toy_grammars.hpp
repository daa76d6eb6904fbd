#pragma once

#include <random>
#include <string>
#include <vector>

#include "support/builders.hpp"

namespace cxg::toy {

inline std::string lock_unit(const std::string& unit, const std::string& category, const std::string& ref,
                             const std::string& word) {
  std::string feats = build::cats("category", category) + ", " + build::atom("referent", ref) + ", " +
                      build::preds("form", "{string(" + word + ", ?s" + word.substr(1) + ")}", false);
  return R"({"unit": ")" + unit + R"(", "comprehension-lock": [)" + feats + R"(], "production-lock": [)" + feats +
         "]}";
}

// n-unit then v-unit, adjacent: :arg0(verb, noun).
inline Construction pair() {
  return build::construction(
      R"({"name": "pair-cxn", "conditional": [)" + lock_unit("?l", "n", "?a", "?lw") + ", " +
      lock_unit("?r", "v", "?b", "?rw") + R"(, {"unit": "?p", "comprehension-lock": [)" +
      build::preds("form", "{adjacent(?lw, ?rw)}") + R"(], "production-lock": [)" +
      build::preds("meaning", "{:arg0(?b, ?a)}") + R"(]}], "contributing": [{"unit": "?p", "features": [)" +
      build::cats("category", "clause") + "]}]}");
}

inline std::vector<Construction> pool() {
  return {build::lexical("a", "alpha", "n"), build::lexical("b", "beta", "n"), build::lexical("c", "gamma", "v"),
          [] {
            Construction alt = build::lexical("a", "alt", "v");
            alt.name = "a-alt-cxn";
            return alt;
          }(),
          pair()};
}

inline Grammar random_grammar(std::mt19937_64& rng) {
  auto all = pool();
  std::shuffle(all.begin(), all.end(), rng);
  Grammar g;
  std::size_t n = 1 + rng() % all.size();
  for (std::size_t i = 0; i < n; ++i) {
    all[i].score = static_cast<double>(rng() % 11) / 10.0;
    g.constructions.push_back(all[i]);
  }
  return g;
}

inline std::string random_utterance(std::mt19937_64& rng, std::size_t max_tokens) {
  static const char* words[] = {"a", "b", "c"};
  std::string u;
  std::size_t n = 1 + rng() % max_tokens;
  for (std::size_t i = 0; i < n; ++i) u += std::string(i ? " " : "") + words[rng() % 3];
  return u;
}

}  // namespace cxg::toy
