#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cxg/construction.hpp"
#include "cxg/learning.hpp"

namespace cxg {

inline constexpr int kGrammarFormatVersion = 1;

/// Throws ParseError (JSON or predicate syntax, with line and column) or
/// ValidationError (schema violations, unknown fields, invalid constructions).
Grammar grammar_from_json(std::string_view text);
/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string grammar_to_json(const Grammar& grammar);

Grammar load_grammar(const std::string& path);
void save_grammar(const Grammar& grammar, const std::string& path);

/// Scene documents: [{"id": "obj-1", "attributes": {"shape": "car", ...}}, ...].
/// Throws ParseError or ValidationError (duplicate ids, unknown fields).
Scene scene_from_json(std::string_view text);
std::string scene_to_json(const Scene& scene);
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

/// Whole file as a string; ParseError if it cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// Non-blank lines, trimmed; lines starting with '#' are skipped.
std::vector<std::string> read_corpus(const std::string& path);

}  // namespace cxg
