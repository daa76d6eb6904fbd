#include "cxg/matching.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_map>

namespace cxg {

Term substitute(const Term& t, const Bindings& b) { return b.resolve(t); }

Predicate substitute(const Predicate& p, const Bindings& b) {
  std::vector<Term> args;
  args.reserve(p.arity());
  for (const auto& a : p.args()) args.push_back(b.resolve(a));
  return Predicate(p.name(), std::move(args));
}

PredicateSet substitute(const PredicateSet& set, const Bindings& b) {
  if (b.empty()) return set;
  std::vector<Predicate> out;
  out.reserve(set.size());
  for (const auto& p : set) out.push_back(substitute(p, b));
  return PredicateSet(std::move(out));
}

// ---------------------------------------------------------------- subset matching

namespace {

bool unify_args(const Predicate& pattern, const Predicate& target, Bindings& b) {
  for (std::size_t k = 0; k < pattern.arity(); ++k) {
    const Term& pa = pattern.arg(k);
    const Term& ta = target.arg(k);
    if (pa.is_variable()) {
      const Term* bound = b.find(pa);
      if (bound) {
        if (!(*bound == ta)) return false;
      } else if (!(pa == ta)) {
        b.bind(pa, ta);
      }
    } else if (!(pa == ta)) {
      return false;
    }
  }
  return true;
}

// Candidate target indices per pattern predicate, filtered on name, arity,
// constants and seed-bound variables.
std::vector<std::vector<std::size_t>> candidates_for(std::span<const Predicate> pattern,
                                                     const PredicateSet& target,
                                                     const Bindings& seed) {
  std::vector<std::vector<std::size_t>> cands(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const Predicate& p = pattern[i];
    for (std::size_t j = 0; j < target.size(); ++j) {
      const Predicate& t = target[j];
      if (t.name() != p.name() || t.arity() != p.arity()) continue;
      Bindings probe = seed;
      if (unify_args(p, t, probe)) cands[i].push_back(j);
    }
  }
  return cands;
}

class SubsetMatcher {
 public:
  SubsetMatcher(std::span<const Predicate> pattern, const PredicateSet& target, bool first_only)
      : pattern_(pattern), target_(target), first_only_(first_only), used_(target.size(), false) {}

  std::vector<Bindings> run(const Bindings& seed) {
    cands_ = candidates_for(pattern_, target_, seed);
    for (const auto& c : cands_)
      if (c.empty()) return {};
    recurse(0, seed);
    return std::move(results_);
  }

 private:
  void recurse(std::size_t i, const Bindings& b) {
    if (first_only_ && !results_.empty()) return;
    if (i == pattern_.size()) {
      results_.push_back(b);
      return;
    }
    for (std::size_t j : cands_[i]) {
      if (used_[j]) continue;
      Bindings next = b;
      if (!unify_args(pattern_[i], target_[j], next)) continue;
      used_[j] = true;
      recurse(i + 1, next);
      used_[j] = false;
      if (first_only_ && !results_.empty()) return;
    }
  }

  std::span<const Predicate> pattern_;
  const PredicateSet& target_;
  bool first_only_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> cands_;
  std::vector<Bindings> results_;
};

}  // namespace

std::vector<Bindings> match_subset(std::span<const Predicate> pattern, const PredicateSet& target,
                                   const Bindings& seed) {
  if (pattern.size() > target.size()) return {};
  return SubsetMatcher(pattern, target, false).run(seed);
}

std::vector<Bindings> match_subset(const PredicateSet& pattern, const PredicateSet& target,
                                   const Bindings& seed) {
  return match_subset(pattern.elements(), target, seed);
}

bool has_subset_match(std::span<const Predicate> pattern, const PredicateSet& target,
                      const Bindings& seed) {
  if (pattern.size() > target.size()) return false;
  return !SubsetMatcher(pattern, target, true).run(seed).empty();
}

// ---------------------------------------------------------------- renaming equivalence

namespace {

// Shape of a predicate with variables abstracted to their first-occurrence
// index within the predicate.
std::string local_signature(const Predicate& p) {
  std::string sig = p.name();
  sig += '(';
  std::vector<const Term*> seen;
  for (const auto& a : p.args()) {
    if (a.is_variable()) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](const Term* t) { return *t == a; });
      std::size_t idx = static_cast<std::size_t>(it - seen.begin());
      if (it == seen.end()) seen.push_back(&a);
      sig += "?" + std::to_string(idx);
    } else {
      sig += a.symbol();
    }
    sig += '\x1f';
  }
  sig += ')';
  return sig;
}

// One round of colour refinement: each variable is coloured by the multiset of
// (signature, position) pairs it occurs in.
std::vector<std::string> refined_signatures(const PredicateSet& s) {
  std::vector<std::string> local;
  local.reserve(s.size());
  for (const auto& p : s) local.push_back(local_signature(p));
  std::unordered_map<std::string, std::vector<std::string>> occurrences;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t k = 0; k < s[i].arity(); ++k)
      if (s[i].arg(k).is_variable())
        occurrences[s[i].arg(k).symbol()].push_back(local[i] + "@" + std::to_string(k));
  std::unordered_map<std::string, std::string> colour;
  for (auto& [var, occ] : occurrences) {
    std::sort(occ.begin(), occ.end());
    std::string c;
    for (const auto& o : occ) c += o + "|";
    colour[var] = std::to_string(std::hash<std::string>{}(c));
  }
  std::vector<std::string> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::string sig = local[i];
    for (const auto& a : s[i].args())
      if (a.is_variable()) sig += "#" + colour[a.symbol()];
    out.push_back(std::move(sig));
  }
  return out;
}

class RenamingMatcher {
 public:
  RenamingMatcher(const PredicateSet& a, const PredicateSet& b,
                  const std::vector<std::string>& sig_a, const std::vector<std::string>& sig_b)
      : a_(a), b_(b), used_(b.size(), false) {
    cands_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (sig_a[i] == sig_b[j]) cands_[i].push_back(j);
    order_ = connected_order();
  }

  bool run() { return recurse(0); }

 private:
  std::vector<std::size_t> connected_order() const {
    std::vector<std::size_t> order;
    std::vector<bool> placed(a_.size(), false);
    std::vector<std::string> bound_vars;
    auto shared = [&](std::size_t i) {
      int n = 0;
      for (const auto& t : a_[i].args())
        if (t.is_variable() && std::find(bound_vars.begin(), bound_vars.end(), t.symbol()) != bound_vars.end())
          ++n;
      return n;
    };
    for (std::size_t step = 0; step < a_.size(); ++step) {
      std::size_t best = a_.size();
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (placed[i]) continue;
        if (best == a_.size()) {
          best = i;
          continue;
        }
        int si = shared(i), sb = shared(best);
        if (si > sb || (si == sb && cands_[i].size() < cands_[best].size())) best = i;
      }
      placed[best] = true;
      order.push_back(best);
      for (const auto& t : a_[best].args())
        if (t.is_variable()) bound_vars.push_back(t.symbol());
    }
    return order;
  }

  bool try_map(const Predicate& p, const Predicate& q, std::vector<std::string>& added) {
    for (std::size_t k = 0; k < p.arity(); ++k) {
      const Term& x = p.arg(k);
      const Term& y = q.arg(k);
      if (x.is_variable() != y.is_variable()) return false;
      if (!x.is_variable()) {
        if (!(x == y)) return false;
        continue;
      }
      auto f = forward_.find(x.symbol());
      auto r = backward_.find(y.symbol());
      if (f != forward_.end() || r != backward_.end()) {
        if (f == forward_.end() || r == backward_.end() || f->second != y.symbol() ||
            r->second != x.symbol())
          return false;
        continue;
      }
      forward_.emplace(x.symbol(), y.symbol());
      backward_.emplace(y.symbol(), x.symbol());
      added.push_back(x.symbol());
    }
    return true;
  }

  void undo(const std::vector<std::string>& added) {
    for (const auto& x : added) {
      auto f = forward_.find(x);
      backward_.erase(f->second);
      forward_.erase(f);
    }
  }

  bool recurse(std::size_t step) {
    if (step == order_.size()) return true;
    std::size_t i = order_[step];
    for (std::size_t j : cands_[i]) {
      if (used_[j]) continue;
      std::vector<std::string> added;
      if (try_map(a_[i], b_[j], added)) {
        used_[j] = true;
        if (recurse(step + 1)) return true;
        used_[j] = false;
      }
      undo(added);
    }
    return false;
  }

  const PredicateSet& a_;
  const PredicateSet& b_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> cands_;
  std::vector<std::size_t> order_;
  std::unordered_map<std::string, std::string> forward_;
  std::unordered_map<std::string, std::string> backward_;
};

}  // namespace

bool equal_modulo_renaming(const PredicateSet& a, const PredicateSet& b) {
  if (a.size() != b.size()) return false;
  auto sig_a = refined_signatures(a);
  auto sig_b = refined_signatures(b);
  auto sorted_a = sig_a, sorted_b = sig_b;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  if (sorted_a != sorted_b) return false;
  return RenamingMatcher(a, b, sig_a, sig_b).run();
}

std::uint64_t renaming_invariant_hash(const PredicateSet& s) {
  auto sigs = refined_signatures(s);
  std::sort(sigs.begin(), sigs.end());
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& sig : sigs) {
    h ^= std::hash<std::string>{}(sig);
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------- fresh renaming

Bindings fresh_renaming(std::span<const Term> variables, IdSource& ids) {
  const std::string suffix = "-" + std::to_string(ids.issue());
  Bindings b;
  for (const auto& v : variables)
    if (v.is_variable()) b.bind(v, Term::variable(v.symbol() + suffix));
  return b;
}

PredicateSet rename_fresh(const PredicateSet& set, IdSource& ids) {
  auto vars = set.variables();
  return substitute(set, fresh_renaming(vars, ids));
}

}  // namespace cxg
