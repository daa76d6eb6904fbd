#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cxg/predicate.hpp"

namespace cxg {

/// Surface tokens of an utterance: whitespace-separated, with trailing
/// , . ? ! split off as tokens of their own.
std::vector<std::string> split_tokens(std::string_view utterance);

/// Identifier base for a token: its lower-cased alphanumeric characters
/// (empty for pure punctuation).
std::string token_base(std::string_view token);

/// string(id, "token") per token plus adjacent(id_i, id_i+1) per consecutive
/// pair. Ids are base + "-" + occurrence count, counted per lower-cased token.
PredicateSet tokenize(std::string_view utterance);

/// Orders the string predicates along the adjacency chain and detokenizes.
/// Throws CyclicOrder, UnderspecifiedOrder or DanglingAdjacency.
std::string render_utterance(const PredicateSet& form);

/// Joins tokens with single spaces, without a space before , . ? !
std::string detokenize(const std::vector<std::string>& tokens);

}  // namespace cxg
