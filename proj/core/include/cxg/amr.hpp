#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cxg/predicate.hpp"

namespace cxg {

struct AmrInstance {
  Term variable;
  std::string concept_name;

  friend bool operator==(const AmrInstance&, const AmrInstance&) = default;
};

struct AmrRelation {
  std::string role;  // lower-cased, with leading ':'
  Term parent;
  Term child;  // an instance variable, or a constant attribute value

  friend bool operator==(const AmrRelation&, const AmrRelation&) = default;
};

/// Rooted AMR graph. Instances and relations are kept in declaration order,
/// which is also the order the canonical printer uses.
struct AmrGraph {
  std::vector<AmrInstance> instances;
  std::vector<AmrRelation> relations;
  Term root;

  const AmrInstance* find_instance(const Term& var) const;
  bool is_instance(const Term& var) const { return find_instance(var) != nullptr; }

  friend bool operator==(const AmrGraph&, const AmrGraph&) = default;
};

/// Throws SyntaxError, DuplicateVariable or UndeclaredReference.
AmrGraph parse_penman(std::string_view text);

/// Canonical Penman: relations in declaration order, two-space indentation
/// per nesting level, closing parentheses on the last line.
std::string print_penman(const AmrGraph& g);

/// concept(var) per instance and role(parent, child) per relation.
PredicateSet to_predicates(const AmrGraph& g);

/// Inverse of to_predicates. Children of each node are ordered by
/// (role, child). Throws NoRoot, MultipleRoots or MalformedPredicate.
AmrGraph from_predicates(const PredicateSet& set);

/// True iff predicates linked through shared terms form one component.
bool is_connected(const PredicateSet& set);

/// Renames instances AMR-style: first letter of the concept, with 2, 3, ...
/// appended on clashes, assigned in declaration order. Variables become
/// plain constants.
AmrGraph with_conventional_names(const AmrGraph& g);

/// Turns every instance term (the argument of a unary concept predicate) into
/// a variable, so that sets written with constant AMR names compare under
/// equal_modulo_renaming with engine output.
PredicateSet lift_instances(const PredicateSet& set);

/// Same graph up to the names of instance variables.
bool isomorphic(const AmrGraph& a, const AmrGraph& b);

/// Splits an .amr document into Penman blocks: blank-line separated, lines
/// starting with '#' ignored.
std::vector<std::string> split_amr_blocks(std::string_view document);
std::vector<AmrGraph> read_amr_file(const std::string& path);

}  // namespace cxg
