#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cxg {

/// An atomic symbol. Variables are written with a leading '?'; everything else
/// (identifiers, quoted strings, numbers) is a constant.
class Term {
 public:
  enum class Kind : std::uint8_t { Constant, Variable };

  Term() = default;

  /// Classifies by the leading '?'. Throws on an empty symbol.
  static Term parse(std::string_view symbol);
  static Term constant(std::string_view symbol);
  static Term variable(std::string_view symbol);

  Kind kind() const noexcept { return kind_; }
  bool is_variable() const noexcept { return kind_ == Kind::Variable; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  const std::string& symbol() const noexcept { return symbol_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string symbol) : kind_(kind), symbol_(std::move(symbol)) {}

  Kind kind_ = Kind::Constant;
  std::string symbol_;
};

class Predicate {
 public:
  Predicate() = default;
  /// Lower-cases the name. Throws MalformedPredicate on an empty name or no
  /// arguments.
  Predicate(std::string_view name, std::vector<Term> args);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Term>& args() const noexcept { return args_; }
  std::size_t arity() const noexcept { return args_.size(); }
  const Term& arg(std::size_t i) const { return args_.at(i); }

  friend bool operator==(const Predicate&, const Predicate&) = default;
  friend auto operator<=>(const Predicate&, const Predicate&) = default;

 private:
  std::string name_;
  std::vector<Term> args_;
};

/// Set of predicates kept sorted, so iteration order is canonical.
class PredicateSet {
 public:
  using const_iterator = std::vector<Predicate>::const_iterator;

  PredicateSet() = default;
  PredicateSet(std::initializer_list<Predicate> preds);
  explicit PredicateSet(std::vector<Predicate> preds);

  bool insert(Predicate p);
  bool erase(const Predicate& p);
  bool contains(const Predicate& p) const;
  void merge(const PredicateSet& other);
  bool is_subset_of(const PredicateSet& other) const;

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const_iterator begin() const noexcept { return elements_.begin(); }
  const_iterator end() const noexcept { return elements_.end(); }
  const Predicate& operator[](std::size_t i) const { return elements_[i]; }
  std::span<const Predicate> elements() const noexcept { return elements_; }

  /// Every variable occurring in the set, sorted and unique.
  std::vector<Term> variables() const;

  friend bool operator==(const PredicateSet&, const PredicateSet&) = default;

 private:
  std::vector<Predicate> elements_;
};

/// Variable-to-term map. Kept as a flat vector: binding maps during matching
/// rarely exceed a few dozen entries.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<Term, Term>> entries);

  /// The value bound to `var`, or nullptr.
  const Term* find(const Term& var) const;
  /// Adds var -> value. Returns false if var is already bound to a different
  /// value. A variable bound to itself is not recorded.
  bool bind(const Term& var, const Term& value);
  /// Applies the map to a single term.
  const Term& resolve(const Term& t) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<std::pair<Term, Term>>& entries() const noexcept { return entries_; }

  /// Order-insensitive comparison.
  friend bool operator==(const Bindings& a, const Bindings& b);

 private:
  std::vector<std::pair<Term, Term>> entries_;
};

// Text syntax: name(arg, arg) with "?"-prefixed variables and double-quoted
// string constants; sets are comma-separated inside braces.
Predicate parse_predicate(std::string_view text);
PredicateSet parse_predicate_set(std::string_view text);
std::string to_string(const Term& t);
std::string to_string(const Predicate& p);
std::string to_string(const PredicateSet& s);
std::string to_string(const Bindings& b);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Predicate& p);
std::ostream& operator<<(std::ostream& os, const PredicateSet& s);
std::ostream& operator<<(std::ostream& os, const Bindings& b);

}  // namespace cxg
