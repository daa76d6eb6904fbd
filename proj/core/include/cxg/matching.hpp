#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cxg/predicate.hpp"

namespace cxg {

/// Monotone source of fresh identifiers. One instance per search; never
/// shared between concurrent searches.
class IdSource {
 public:
  explicit IdSource(std::uint64_t first = 1) : next_(first) {}
  std::uint64_t issue() noexcept { return next_++; }
  std::uint64_t peek() const noexcept { return next_; }

 private:
  std::uint64_t next_;
};

Term substitute(const Term& t, const Bindings& b);
Predicate substitute(const Predicate& p, const Bindings& b);
PredicateSet substitute(const PredicateSet& set, const Bindings& b);

/// All extensions of `seed` under which every pattern predicate maps to a
/// distinct target predicate. Target variables are treated as opaque values.
/// Solutions are ordered lexicographically by the target index assigned to
/// each pattern predicate, in pattern order.
std::vector<Bindings> match_subset(const PredicateSet& pattern, const PredicateSet& target,
                                   const Bindings& seed = {});

/// Span form used when the pattern may hold duplicates that a set would merge
/// (e.g. identical locks on two different units).
std::vector<Bindings> match_subset(std::span<const Predicate> pattern, const PredicateSet& target,
                                   const Bindings& seed = {});

/// Cheap applicability probe: true iff match_subset would be non-empty.
bool has_subset_match(std::span<const Predicate> pattern, const PredicateSet& target,
                      const Bindings& seed = {});

/// True iff a bijection between the variables of a and b makes them equal.
bool equal_modulo_renaming(const PredicateSet& a, const PredicateSet& b);

/// Hash that is invariant under variable renaming; equal sets modulo renaming
/// always collide.
std::uint64_t renaming_invariant_hash(const PredicateSet& s);

/// Replaces each variable ?v with ?v-N for a single freshly issued N.
PredicateSet rename_fresh(const PredicateSet& set, IdSource& ids);
/// The bindings rename_fresh would apply, for renaming several structures
/// consistently.
Bindings fresh_renaming(std::span<const Term> variables, IdSource& ids);

}  // namespace cxg
