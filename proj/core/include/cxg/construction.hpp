#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cxg/categorial_network.hpp"
#include "cxg/matching.hpp"
#include "cxg/predicate.hpp"

namespace cxg {

enum class Direction { Comprehension, Production };

std::string_view to_string(Direction d);

using CategorySet = std::set<std::string>;

/// A feature holds a predicate set (form, meaning), a set of category symbols,
/// or a single atom (referent, boundary word ids).
using FeatureValue = std::variant<PredicateSet, CategorySet, Term>;

struct Feature {
  std::string name;
  FeatureValue value;
  /// Matched against the root unit instead of a regular unit. Only valid for
  /// form and meaning.
  bool hashed = false;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct Unit {
  Term name;
  std::map<std::string, FeatureValue> features;

  const FeatureValue* find(const std::string& feature) const;
  /// The predicate set under `feature`, or an empty set.
  const PredicateSet& predicates(const std::string& feature) const;

  friend bool operator==(const Unit&, const Unit&) = default;
};

inline const std::string kRootUnit = "input";
inline const std::string kForm = "form";
inline const std::string kMeaning = "meaning";

/// The search state: a root "input" unit holding unprocessed form and meaning,
/// the units built so far, and the names of the constructions applied with
/// the root predicates each one consumed.
struct TransientStructure {
  std::vector<Unit> units;
  std::vector<std::string> history;
  std::vector<PredicateSet> consumed;

  static TransientStructure initial(const PredicateSet& form, const PredicateSet& meaning);
  static TransientStructure for_comprehension(const PredicateSet& form) { return initial(form, {}); }
  static TransientStructure for_production(const PredicateSet& meaning) { return initial({}, meaning); }

  const Unit& root() const { return units.front(); }
  Unit& root() { return units.front(); }
  const Unit* find_unit(const Term& name) const;
  Unit* find_unit(const Term& name);

  /// Union of `feature` over every non-root unit.
  PredicateSet collect(const std::string& feature) const;

  friend bool operator==(const TransientStructure&, const TransientStructure&) = default;
};

/// Flattens the units and features into one predicate set, with generated unit
/// names turned into variables. The application history is not included.
PredicateSet flatten(const TransientStructure& ts);

/// Structural identity up to renaming of variables and generated unit names.
bool equal_modulo_renaming(const TransientStructure& a, const TransientStructure& b);

struct ConditionalUnit {
  Term name;
  std::vector<Feature> production_lock;
  std::vector<Feature> comprehension_lock;

  const std::vector<Feature>& lock(Direction d) const {
    return d == Direction::Production ? production_lock : comprehension_lock;
  }

  friend bool operator==(const ConditionalUnit&, const ConditionalUnit&) = default;
};

struct ContributingUnit {
  Term name;
  std::vector<Feature> features;

  friend bool operator==(const ContributingUnit&, const ContributingUnit&) = default;
};

struct Construction {
  std::string name;
  std::vector<ConditionalUnit> conditional;
  std::vector<ContributingUnit> contributing;
  double score = 0.5;

  friend bool operator==(const Construction&, const Construction&) = default;
};

struct Grammar {
  std::string name;
  std::vector<Construction> constructions;
  CategorialNetwork network;

  const Construction* find(std::string_view cxn_name) const;
  Construction* find(std::string_view cxn_name);

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

/// Throws InvalidConstruction naming the violated invariant.
void validate_construction(const Construction& cxn);

/// Every way `cxn` can apply to `ts` in `direction`, in binding order. The
/// construction is renamed apart with a fresh id from `ids`. `network`, when
/// given, widens category matching to linked categories.
std::vector<TransientStructure> apply_construction(const Construction& cxn, const TransientStructure& ts,
                                                   Direction direction, IdSource& ids,
                                                   const CategorialNetwork* network = nullptr);

/// True iff apply_construction would return at least one structure.
bool applicable(const Construction& cxn, const TransientStructure& ts, Direction direction,
                const CategorialNetwork* network = nullptr);

/// Root predicates each way of matching only the hashed part of the lock for
/// `direction` would consume. Empty if the construction has no hashed lock in
/// that direction or the hashed part does not match.
std::vector<PredicateSet> hashed_consumption(const Construction& cxn, const TransientStructure& ts,
                                             Direction direction);

}  // namespace cxg
