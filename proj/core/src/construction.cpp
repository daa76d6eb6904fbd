#include "cxg/construction.hpp"

#include <algorithm>
#include <cmath>

#include "cxg/error.hpp"

namespace cxg {

std::string_view to_string(Direction d) {
  return d == Direction::Comprehension ? "comprehension" : "production";
}

// ---------------------------------------------------------------- units & structures

const FeatureValue* Unit::find(const std::string& feature) const {
  auto it = features.find(feature);
  return it == features.end() ? nullptr : &it->second;
}

const PredicateSet& Unit::predicates(const std::string& feature) const {
  static const PredicateSet kEmpty;
  const FeatureValue* v = find(feature);
  if (!v) return kEmpty;
  const auto* preds = std::get_if<PredicateSet>(v);
  return preds ? *preds : kEmpty;
}

TransientStructure TransientStructure::initial(const PredicateSet& form, const PredicateSet& meaning) {
  TransientStructure ts;
  Unit root{Term::constant(kRootUnit), {}};
  root.features.emplace(kForm, form);
  root.features.emplace(kMeaning, meaning);
  ts.units.push_back(std::move(root));
  return ts;
}

const Unit* TransientStructure::find_unit(const Term& name) const {
  for (const auto& u : units)
    if (u.name == name) return &u;
  return nullptr;
}

Unit* TransientStructure::find_unit(const Term& name) {
  for (auto& u : units)
    if (u.name == name) return &u;
  return nullptr;
}

PredicateSet TransientStructure::collect(const std::string& feature) const {
  PredicateSet out;
  for (std::size_t i = 1; i < units.size(); ++i) out.merge(units[i].predicates(feature));
  return out;
}

PredicateSet flatten(const TransientStructure& ts) {
  std::vector<Predicate> out;
  for (std::size_t i = 0; i < ts.units.size(); ++i) {
    const Unit& u = ts.units[i];
    Term id = i == 0 ? u.name : Term::variable("?unit:" + u.name.symbol());
    out.emplace_back("unit", std::vector<Term>{id});
    for (const auto& [name, value] : u.features) {
      if (const auto* preds = std::get_if<PredicateSet>(&value)) {
        for (const auto& p : *preds) {
          std::vector<Term> args{id};
          args.insert(args.end(), p.args().begin(), p.args().end());
          out.emplace_back(name + ":" + p.name(), std::move(args));
        }
      } else if (const auto* cats = std::get_if<CategorySet>(&value)) {
        for (const auto& c : *cats)
          out.emplace_back("cat:" + name, std::vector<Term>{id, Term::constant("\"" + c + "\"")});
      } else {
        out.emplace_back("atom:" + name, std::vector<Term>{id, std::get<Term>(value)});
      }
    }
  }
  return PredicateSet(std::move(out));
}

bool equal_modulo_renaming(const TransientStructure& a, const TransientStructure& b) {
  return equal_modulo_renaming(flatten(a), flatten(b));
}

const Construction* Grammar::find(std::string_view cxn_name) const {
  for (const auto& c : constructions)
    if (c.name == cxn_name) return &c;
  return nullptr;
}

Construction* Grammar::find(std::string_view cxn_name) {
  for (auto& c : constructions)
    if (c.name == cxn_name) return &c;
  return nullptr;
}

// ---------------------------------------------------------------- validation

namespace {

[[noreturn]] void invalid(const Construction& cxn, const std::string& what) {
  throw Error(ErrorCode::InvalidConstruction, "construction '" + cxn.name + "': " + what);
}

void validate_features(const Construction& cxn, const std::vector<Feature>& features, bool allow_hashed) {
  std::set<std::string> names;
  for (const auto& f : features) {
    if (f.name.empty()) invalid(cxn, "feature with empty name");
    if (!names.insert(f.name).second) invalid(cxn, "duplicate feature '" + f.name + "'");
    if (f.hashed) {
      if (!allow_hashed) invalid(cxn, "hashed feature '" + f.name + "' outside a lock");
      if (f.name != kForm && f.name != kMeaning) invalid(cxn, "only form and meaning may be hashed");
      if (!std::holds_alternative<PredicateSet>(f.value)) invalid(cxn, "hashed feature must hold predicates");
    }
    if (const auto* cats = std::get_if<CategorySet>(&f.value); cats && cats->empty())
      invalid(cxn, "empty category set in feature '" + f.name + "'");
  }
}

}  // namespace

void validate_construction(const Construction& cxn) {
  if (cxn.name.empty()) throw Error(ErrorCode::InvalidConstruction, "construction without a name");
  if (!std::isfinite(cxn.score) || cxn.score < 0.0 || cxn.score > 1.0)
    invalid(cxn, "score " + std::to_string(cxn.score) + " outside [0, 1]");
  std::set<Term> cond_names;
  bool any_lock = false;
  for (const auto& cu : cxn.conditional) {
    if (!cu.name.is_variable()) invalid(cxn, "conditional unit name must be a variable");
    if (!cond_names.insert(cu.name).second) invalid(cxn, "duplicate conditional unit " + cu.name.symbol());
    validate_features(cxn, cu.production_lock, true);
    validate_features(cxn, cu.comprehension_lock, true);
    any_lock = any_lock || !cu.production_lock.empty() || !cu.comprehension_lock.empty();
  }
  if (!any_lock) invalid(cxn, "all locks are empty");
  std::set<Term> contrib_names;
  for (const auto& u : cxn.contributing) {
    if (!u.name.is_variable()) invalid(cxn, "contributing unit name must be a variable");
    if (!contrib_names.insert(u.name).second) invalid(cxn, "duplicate contributing unit " + u.name.symbol());
    validate_features(cxn, u.features, false);
  }
}

// ---------------------------------------------------------------- application

namespace {

void collect_vars(const FeatureValue& v, std::vector<Term>& out) {
  if (const auto* preds = std::get_if<PredicateSet>(&v)) {
    auto vars = preds->variables();
    out.insert(out.end(), vars.begin(), vars.end());
  } else if (const auto* atom = std::get_if<Term>(&v)) {
    if (atom->is_variable()) out.push_back(*atom);
  }
}

FeatureValue substitute_value(const FeatureValue& v, const Bindings& b) {
  if (const auto* preds = std::get_if<PredicateSet>(&v)) return substitute(*preds, b);
  if (const auto* atom = std::get_if<Term>(&v)) return b.resolve(*atom);
  return v;
}

void substitute_features(std::vector<Feature>& features, const Bindings& b) {
  for (auto& f : features) f.value = substitute_value(f.value, b);
}

Construction renamed_apart(const Construction& cxn, std::uint64_t id) {
  std::vector<Term> vars;
  for (const auto& cu : cxn.conditional) {
    vars.push_back(cu.name);
    for (const auto& f : cu.production_lock) collect_vars(f.value, vars);
    for (const auto& f : cu.comprehension_lock) collect_vars(f.value, vars);
  }
  for (const auto& u : cxn.contributing) {
    vars.push_back(u.name);
    for (const auto& f : u.features) collect_vars(f.value, vars);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  const std::string suffix = "-" + std::to_string(id);
  Bindings b;
  for (const auto& v : vars) b.bind(v, Term::variable(v.symbol() + suffix));

  Construction out = cxn;
  for (auto& cu : out.conditional) {
    cu.name = b.resolve(cu.name);
    substitute_features(cu.production_lock, b);
    substitute_features(cu.comprehension_lock, b);
  }
  for (auto& u : out.contributing) {
    u.name = b.resolve(u.name);
    substitute_features(u.features, b);
  }
  return out;
}

bool needs_existing_unit(const std::vector<Feature>& lock) {
  return std::any_of(lock.begin(), lock.end(), [](const Feature& f) { return !f.hashed; });
}

// Cheap necessary condition: every hashed lock predicate has a root predicate
// with the same name, arity and constants.
bool hashed_lock_plausible(const Construction& cxn, const TransientStructure& ts, Direction dir) {
  for (const auto& cu : cxn.conditional)
    for (const auto& f : cu.lock(dir)) {
      if (!f.hashed) continue;
      const PredicateSet& root = ts.root().predicates(f.name);
      for (const auto& p : std::get<PredicateSet>(f.value)) {
        bool found = std::any_of(root.begin(), root.end(), [&](const Predicate& q) {
          if (q.name() != p.name() || q.arity() != p.arity()) return false;
          for (std::size_t k = 0; k < p.arity(); ++k)
            if (p.arg(k).is_constant() && !(p.arg(k) == q.arg(k))) return false;
          return true;
        });
        if (!found) return false;
      }
    }
  return true;
}

bool categories_match(const CategorySet& wanted, const CategorySet& have, const CategorialNetwork* net) {
  for (const auto& w : wanted) {
    bool ok = have.count(w) > 0;
    if (!ok && net)
      ok = std::any_of(have.begin(), have.end(), [&](const std::string& h) { return net->compatible(h, w); });
    if (!ok) return false;
  }
  return true;
}

std::vector<Bindings> match_features(const std::vector<Feature>& lock, const Unit& unit, Bindings seed,
                                     const CategorialNetwork* net) {
  std::vector<Bindings> current{std::move(seed)};
  for (const auto& f : lock) {
    if (f.hashed) continue;
    const FeatureValue* have = unit.find(f.name);
    if (!have) return {};
    std::vector<Bindings> next;
    for (const auto& b : current) {
      if (const auto* preds = std::get_if<PredicateSet>(&f.value)) {
        const auto* target = std::get_if<PredicateSet>(have);
        if (!target) return {};
        auto sols = match_subset(*preds, *target, b);
        next.insert(next.end(), sols.begin(), sols.end());
      } else if (const auto* cats = std::get_if<CategorySet>(&f.value)) {
        const auto* target = std::get_if<CategorySet>(have);
        if (!target) return {};
        if (categories_match(*cats, *target, net)) next.push_back(b);
      } else {
        const auto* target = std::get_if<Term>(have);
        if (!target) return {};
        Bindings nb = b;
        const Term& want = nb.resolve(std::get<Term>(f.value));
        if (want.is_variable() && !nb.find(want)) {
          if (nb.bind(want, *target)) next.push_back(std::move(nb));
        } else if (want == *target) {
          next.push_back(std::move(nb));
        }
      }
    }
    current = std::move(next);
    if (current.empty()) return {};
  }
  return current;
}

// Hashed lock predicates of one direction, per feature, remembering which
// conditional unit each came from.
struct HashedPattern {
  std::vector<Predicate> preds;
  std::vector<std::size_t> owner;
};

std::map<std::string, HashedPattern> hashed_patterns(const Construction& cxn, Direction dir) {
  std::map<std::string, HashedPattern> out;
  for (std::size_t k = 0; k < cxn.conditional.size(); ++k)
    for (const auto& f : cxn.conditional[k].lock(dir)) {
      if (!f.hashed) continue;
      auto& hp = out[f.name];
      for (const auto& p : std::get<PredicateSet>(f.value)) {
        hp.preds.push_back(p);
        hp.owner.push_back(k);
      }
    }
  return out;
}

class Application {
 public:
  Application(const Construction& cxn, const TransientStructure& ts, Direction dir,
              const CategorialNetwork* net)
      : cxn_(cxn), ts_(ts), dir_(dir), net_(net), patterns_(hashed_patterns(cxn, dir)),
        used_(ts.units.size(), false) {
    for (std::size_t k = 0; k < cxn.conditional.size(); ++k)
      if (needs_existing_unit(cxn.conditional[k].lock(dir))) existing_.push_back(k);
  }

  /// Bindings for every full match; with first_only, stops at the first match
  /// whose result would not conflict.
  std::vector<Bindings> matches(bool first_only) {
    first_only_ = first_only;
    match_units(0, Bindings{});
    return std::move(results_);
  }

  /// Builds the structure for one binding; nullopt on an atom conflict.
  std::optional<TransientStructure> build(Bindings b) const {
    TransientStructure out = ts_;
    std::vector<Term> unit_of(cxn_.conditional.size());
    for (std::size_t k = 0; k < cxn_.conditional.size(); ++k) {
      const Term& var = cxn_.conditional[k].name;
      if (const Term* bound = b.find(var)) {
        unit_of[k] = *bound;
      } else {
        unit_of[k] = Term::constant(var.symbol().substr(1));
        b.bind(var, unit_of[k]);
        out.units.push_back(Unit{unit_of[k], {}});
      }
    }
    PredicateSet taken;
    Equations eqs;
    for (const auto& [feature, hp] : patterns_) {
      auto* root_preds = std::get_if<PredicateSet>(&out.root().features[feature]);
      for (std::size_t i = 0; i < hp.preds.size(); ++i) {
        Predicate consumed = substitute(hp.preds[i], b);
        root_preds->erase(consumed);
        taken.insert(consumed);
        Unit* target = out.find_unit(unit_of[hp.owner[i]]);
        if (!merge(*target, feature, PredicateSet{consumed}, eqs)) return std::nullopt;
      }
    }
    const Direction other = dir_ == Direction::Comprehension ? Direction::Production : Direction::Comprehension;
    for (std::size_t k = 0; k < cxn_.conditional.size(); ++k) {
      Unit* target = out.find_unit(unit_of[k]);
      for (const auto& f : cxn_.conditional[k].lock(other))
        if (!merge(*target, f.name, substitute_value(f.value, b), eqs)) return std::nullopt;
      // Non-hashed features of this direction already hold on the unit.
    }
    for (const auto& cu : cxn_.contributing) {
      Term name = b.resolve(cu.name);
      if (name.is_variable()) {
        Term fresh = Term::constant(name.symbol().substr(1));
        b.bind(name, fresh);
        out.units.push_back(Unit{fresh, {}});
        name = fresh;
      }
      Unit* target = out.find_unit(name);
      for (const auto& f : cu.features)
        if (!merge(*target, f.name, substitute_value(f.value, b), eqs)) return std::nullopt;
    }
    if (!eqs.empty()) {
      const Bindings unify = resolved(eqs);
      for (auto& unit : out.units)
        for (auto& [_, value] : unit.features) value = substitute_value(value, unify);
      taken = substitute(taken, unify);
    }
    out.history.push_back(cxn_.name);
    out.consumed.push_back(std::move(taken));
    return out;
  }

 private:
  // Atom equations between a variable and another term, applied once the
  // whole structure is built.
  using Equations = std::map<Term, Term>;

  static Term follow(const Equations& eqs, Term t) {
    for (auto it = eqs.find(t); it != eqs.end(); it = eqs.find(t)) t = it->second;
    return t;
  }

  static Bindings resolved(const Equations& eqs) {
    Bindings out;
    for (const auto& [var, _] : eqs) out.bind(var, follow(eqs, var));
    return out;
  }

  static bool unify_atoms(const Term& have, const Term& value, Equations& eqs) {
    Term a = follow(eqs, have);
    Term b = follow(eqs, value);
    if (a == b) return true;
    if (b.is_variable()) {
      eqs.emplace(b, a);
      return true;
    }
    if (a.is_variable()) {
      eqs.emplace(a, b);
      return true;
    }
    return false;
  }

  static bool merge(Unit& unit, const std::string& feature, FeatureValue value, Equations& eqs) {
    auto [it, fresh] = unit.features.emplace(feature, value);
    if (fresh) return true;
    FeatureValue& have = it->second;
    if (have.index() != value.index()) return false;
    if (auto* preds = std::get_if<PredicateSet>(&have)) {
      preds->merge(std::get<PredicateSet>(value));
      return true;
    }
    if (auto* cats = std::get_if<CategorySet>(&have)) {
      const auto& more = std::get<CategorySet>(value);
      cats->insert(more.begin(), more.end());
      return true;
    }
    return unify_atoms(std::get<Term>(have), std::get<Term>(value), eqs);
  }

  bool done() const { return first_only_ && !results_.empty(); }

  void match_units(std::size_t i, const Bindings& b) {
    if (done()) return;
    if (i == existing_.size()) {
      match_hashed(b);
      return;
    }
    const ConditionalUnit& cu = cxn_.conditional[existing_[i]];
    for (std::size_t u = 1; u < ts_.units.size() && !done(); ++u) {
      if (used_[u]) continue;
      Bindings seed = b;
      if (!seed.bind(cu.name, ts_.units[u].name)) continue;
      auto sols = match_features(cu.lock(dir_), ts_.units[u], std::move(seed), net_);
      if (sols.empty()) continue;
      used_[u] = true;
      for (const auto& s : sols) {
        match_units(i + 1, s);
        if (done()) break;
      }
      used_[u] = false;
    }
  }

  void match_hashed(const Bindings& b) {
    std::vector<Bindings> current{b};
    for (const auto& [feature, hp] : patterns_) {
      const PredicateSet& root = ts_.root().predicates(feature);
      std::vector<Bindings> next;
      for (const auto& s : current) {
        auto sols = match_subset(std::span<const Predicate>(hp.preds), root, s);
        next.insert(next.end(), sols.begin(), sols.end());
      }
      current = std::move(next);
      if (current.empty()) return;
    }
    for (auto& s : current) {
      if (first_only_ && !build(s)) continue;
      results_.push_back(std::move(s));
      if (done()) return;
    }
  }

  const Construction& cxn_;
  const TransientStructure& ts_;
  Direction dir_;
  const CategorialNetwork* net_;
  std::map<std::string, HashedPattern> patterns_;
  std::vector<std::size_t> existing_;
  std::vector<bool> used_;
  bool first_only_ = false;
  std::vector<Bindings> results_;
};

}  // namespace

std::vector<TransientStructure> apply_construction(const Construction& cxn, const TransientStructure& ts,
                                                   Direction direction, IdSource& ids,
                                                   const CategorialNetwork* network) {
  validate_construction(cxn);
  if (!hashed_lock_plausible(cxn, ts, direction)) return {};
  Construction renamed = renamed_apart(cxn, ids.issue());
  Application app(renamed, ts, direction, network);
  std::vector<TransientStructure> out;
  for (auto& b : app.matches(false))
    if (auto built = app.build(std::move(b))) out.push_back(std::move(*built));
  return out;
}

bool applicable(const Construction& cxn, const TransientStructure& ts, Direction direction,
                const CategorialNetwork* network) {
  if (!hashed_lock_plausible(cxn, ts, direction)) return false;
  // Id 0 is never issued by an IdSource, so this renaming cannot collide with
  // variables already in the structure.
  Construction renamed = renamed_apart(cxn, 0);
  return !Application(renamed, ts, direction, network).matches(true).empty();
}

std::vector<PredicateSet> hashed_consumption(const Construction& cxn, const TransientStructure& ts,
                                             Direction direction) {
  if (!hashed_lock_plausible(cxn, ts, direction)) return {};
  Construction renamed = renamed_apart(cxn, 0);
  auto patterns = hashed_patterns(renamed, direction);
  if (patterns.empty()) return {};
  std::vector<Bindings> current{Bindings{}};
  for (const auto& [feature, hp] : patterns) {
    std::vector<Bindings> next;
    for (const auto& s : current) {
      auto sols = match_subset(std::span<const Predicate>(hp.preds), ts.root().predicates(feature), s);
      next.insert(next.end(), sols.begin(), sols.end());
    }
    current = std::move(next);
  }
  std::vector<PredicateSet> out;
  for (const auto& b : current) {
    PredicateSet consumed;
    for (const auto& [feature, hp] : patterns)
      for (const auto& p : hp.preds) consumed.insert(substitute(p, b));
    out.push_back(std::move(consumed));
  }
  return out;
}

}  // namespace cxg
