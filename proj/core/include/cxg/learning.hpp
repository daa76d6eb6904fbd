#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cxg/construction.hpp"

namespace cxg {

// ---------------------------------------------------------------- scenes & programs

struct SceneObject {
  std::string id;
  std::map<std::string, std::string> attributes;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Scene {
  std::vector<SceneObject> objects;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Attribute name -> admissible values, in a fixed order.
using AttributeVocabulary = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// A program is a predicate set over segment-scene/1, filter/3, unique/2,
/// query/3 and count/2. Its target is the one output variable no other
/// primitive consumes.
Term program_target(const PredicateSet& program);

/// Throws EvaluationFailure on malformed programs, unique over a set whose
/// size is not 1, and queries of missing attributes.
std::string evaluate_program(const PredicateSet& program, const Scene& scene);

/// Substitutes every bind(?v, c) and drops the bind predicates.
PredicateSet resolve_binds(const PredicateSet& meaning);

/// All shortest chains (segment-scene, then filter/unique/query/count) of at
/// most max_length primitives whose evaluation on `scene` equals `answer`.
/// Variables are ?v0, ?v1, ... along the chain. Deterministic order.
std::vector<PredicateSet> compose_programs(const Scene& scene, const std::string& answer,
                                           const AttributeVocabulary& vocabulary, std::size_t max_length = 4);

// ---------------------------------------------------------------- anti-unification

struct UtteranceAlignment {
  std::vector<std::string> prefix;
  std::vector<std::string> suffix;
  std::vector<std::string> filler1;
  std::vector<std::string> filler2;
};

/// Throws NoAlignment unless the token sequences differ in one contiguous
/// region each, both regions are non-empty and share no token, and some
/// word (not punctuation) is shared outside the regions.
UtteranceAlignment anti_unify_utterances(const std::string& u1, const std::string& u2);

struct ProgramAlignment {
  PredicateSet pattern;  // m1 with the differing constant replaced by `slot`
  Term slot;
  Term filler1;
  Term filler2;
};

inline const std::string kSlotVariable = "?x";

/// Throws NoAlignment unless the programs are equal modulo renaming after
/// replacing exactly one constant argument in each.
ProgramAlignment anti_unify_programs(const PredicateSet& m1, const PredicateSet& m2);

// ---------------------------------------------------------------- construction builders

/// Whole utterance <-> whole program.
Construction make_holophrase(const std::string& name, const std::vector<std::string>& tokens,
                             const PredicateSet& program);

/// Skeleton tokens around one slot, slot unit typed by `slot_category`.
/// `program` mentions the slot as variable `slot`.
Construction make_item_construction(const std::string& name, const std::vector<std::string>& prefix,
                                    const std::vector<std::string>& suffix, const std::string& slot_category,
                                    const PredicateSet& program, const Term& slot);

/// Filler tokens <-> bind(?x, value), category `category`.
Construction make_lexical_construction(const std::string& name, const std::vector<std::string>& tokens,
                                       const Term& value, const std::string& category);

/// Lower-cased alphanumeric tokens joined by '-', punctuation dropped.
std::string name_stem(const std::vector<std::string>& tokens);

/// The category carried by a lexical construction (its name minus "-cxn").
std::string construction_category(const Construction& cxn);

/// Category required of the slot unit of an item-based construction, if any.
std::optional<std::string> slot_category(const Construction& cxn);

// ---------------------------------------------------------------- pattern finding

struct Observation {
  std::string utterance;
  PredicateSet program;
  std::string answer;
};

struct LearnResult {
  std::vector<Construction> constructions;
  std::vector<std::pair<std::string, std::string>> links;  // filler category, slot category
  bool generalized = false;
};

/// Keeps the hypotheses that also appear (modulo renaming) among the programs
/// memory already holds for `utterance`. All of them if memory has none for
/// it or none agree.
std::vector<PredicateSet> consistent_hypotheses(const std::vector<PredicateSet>& hypotheses,
                                                const std::string& utterance, const std::vector<Observation>& memory);

/// Generalizes `observation` against `memory` (newest aligning entry wins) or
/// falls back to a holophrase. Existing constructions in `inventory` are
/// reused rather than duplicated. Pure: the caller adds the results.
LearnResult pattern_find(const Observation& observation, const std::vector<Observation>& memory,
                         const std::vector<Construction>& inventory);

// ---------------------------------------------------------------- entrenchment

struct EntrenchmentPolicy {
  double initial = 0.5;
  double reward = 0.1;
  double punish = -0.1;
  double inhibit = -0.1;
  double floor = 0.0;
  double ceiling = 1.0;
  bool evict = true;
  bool adjust_links = true;
};

/// Unused constructions whose hashed lock could consume, in `initial`, the
/// same predicates as one construction applied in `solution`, or predicates
/// straddling several of them. A match nested inside a single applied
/// construction's span does not count.
std::set<std::string> competitors(const std::vector<Construction>& inventory, const TransientStructure& solution,
                                  const TransientStructure& initial, Direction direction);

/// Applies the policy to `grammar`, adjusting the links between categories
/// of used constructions as well. Returns the names of evicted constructions.
std::vector<std::string> update_entrenchment(Grammar& grammar, const std::set<std::string>& used, bool success,
                                             const std::set<std::string>& competitor_names,
                                             const EntrenchmentPolicy& policy);

}  // namespace cxg
