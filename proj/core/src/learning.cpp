#include "cxg/learning.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <variant>

#include "cxg/error.hpp"
#include "cxg/form.hpp"
#include "cxg/matching.hpp"

namespace cxg {

namespace {

[[noreturn]] void eval_fail(const std::string& what) { throw Error(ErrorCode::EvaluationFailure, what); }

bool is_primitive(const Predicate& p) {
  const auto& n = p.name();
  return (n == "segment-scene" && p.arity() == 1) || (n == "filter" && p.arity() == 3) ||
         (n == "unique" && p.arity() == 2) || (n == "query" && p.arity() == 3) || (n == "count" && p.arity() == 2);
}

const Term* input_of(const Predicate& p) { return p.name() == "segment-scene" ? nullptr : &p.arg(1); }

using ObjectSet = std::vector<std::size_t>;
using Value = std::variant<ObjectSet, std::size_t, std::string>;

}  // namespace

Term program_target(const PredicateSet& program) {
  std::set<Term> consumed;
  for (const auto& p : program) {
    if (!is_primitive(p)) eval_fail("not a primitive: " + to_string(p));
    if (const Term* in = input_of(p)) consumed.insert(*in);
  }
  std::vector<Term> targets;
  for (const auto& p : program)
    if (!consumed.count(p.arg(0))) targets.push_back(p.arg(0));
  if (targets.size() != 1) eval_fail("program must have exactly one target, found " + std::to_string(targets.size()));
  return targets.front();
}

std::string evaluate_program(const PredicateSet& program, const Scene& scene) {
  const Term target = program_target(program);
  std::map<Term, Value> values;
  std::size_t sources = 0;
  for (const auto& p : program) sources += p.name() == "segment-scene";
  if (sources != 1) eval_fail("program needs exactly one segment-scene");

  std::vector<bool> done(program.size(), false);
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < program.size(); ++i) {
      if (done[i]) continue;
      const Predicate& p = program[i];
      const Term* in = input_of(p);
      if (in && !values.count(*in)) continue;
      if (values.count(p.arg(0))) eval_fail("variable produced twice: " + to_string(p.arg(0)));
      Value out;
      if (p.name() == "segment-scene") {
        ObjectSet all(scene.objects.size());
        for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
        out = std::move(all);
      } else if (p.name() == "filter" || p.name() == "unique" || p.name() == "count") {
        const auto* set = std::get_if<ObjectSet>(&values.at(*in));
        if (!set) eval_fail(p.name() + " expects a set: " + to_string(p));
        if (p.name() == "filter") {
          if (!p.arg(2).is_constant()) eval_fail("unbound filter category: " + to_string(p));
          const std::string& cat = p.arg(2).symbol();
          ObjectSet kept;
          for (std::size_t k : *set)
            for (const auto& [attr, val] : scene.objects[k].attributes)
              if (val == cat) {
                kept.push_back(k);
                break;
              }
          out = std::move(kept);
        } else if (p.name() == "unique") {
          if (set->size() != 1) eval_fail("unique over " + std::to_string(set->size()) + " objects");
          out = set->front();
        } else {
          out = std::to_string(set->size());
        }
      } else {  // query
        const auto* obj = std::get_if<std::size_t>(&values.at(*in));
        if (!obj) eval_fail("query expects an object: " + to_string(p));
        if (!p.arg(2).is_constant()) eval_fail("unbound query attribute: " + to_string(p));
        const auto& attrs = scene.objects[*obj].attributes;
        auto it = attrs.find(p.arg(2).symbol());
        if (it == attrs.end()) eval_fail("object has no attribute " + p.arg(2).symbol());
        out = it->second;
      }
      values.emplace(p.arg(0), std::move(out));
      done[i] = true;
      progress = true;
    }
  }
  if (std::find(done.begin(), done.end(), false) != done.end()) eval_fail("program dataflow is not connected");
  const auto* answer = std::get_if<std::string>(&values.at(target));
  if (!answer) eval_fail("program target is not a value");
  return *answer;
}

PredicateSet resolve_binds(const PredicateSet& meaning) {
  Bindings b;
  std::vector<Predicate> rest;
  for (const auto& p : meaning) {
    if (p.name() == "bind" && p.arity() == 2 && p.arg(0).is_variable())
      b.bind(p.arg(0), p.arg(1));
    else
      rest.push_back(p);
  }
  return substitute(PredicateSet(std::move(rest)), b);
}

std::vector<PredicateSet> compose_programs(const Scene& scene, const std::string& answer,
                                           const AttributeVocabulary& vocabulary, std::size_t max_length) {
  if (max_length < 1) throw Error(ErrorCode::ValidationError, "max length must be at least 1");
  enum class Kind { Set, Object, Value };
  std::vector<Predicate> chain;
  std::vector<PredicateSet> found;
  auto var = [](std::size_t i) { return Term::variable("?v" + std::to_string(i)); };

  std::function<void(Kind, std::size_t)> extend = [&](Kind kind, std::size_t length) {
    if (chain.size() == length) {
      if (kind != Kind::Value) return;
      PredicateSet program(chain);
      try {
        if (evaluate_program(program, scene) == answer) found.push_back(std::move(program));
      } catch (const Error&) {
      }
      return;
    }
    const Term in = var(chain.size() - 1);
    const Term out = var(chain.size());
    if (kind == Kind::Set) {
      for (const auto& [attr, values] : vocabulary)
        for (const auto& v : values) {
          chain.emplace_back("filter", std::vector<Term>{out, in, Term::constant(v)});
          extend(Kind::Set, length);
          chain.pop_back();
        }
      chain.emplace_back("unique", std::vector<Term>{out, in});
      extend(Kind::Object, length);
      chain.pop_back();
      chain.emplace_back("count", std::vector<Term>{out, in});
      extend(Kind::Value, length);
      chain.pop_back();
    } else if (kind == Kind::Object) {
      for (const auto& [attr, values] : vocabulary) {
        chain.emplace_back("query", std::vector<Term>{out, in, Term::constant(attr)});
        extend(Kind::Value, length);
        chain.pop_back();
      }
    }
  };

  for (std::size_t length = 1; length <= max_length && found.empty(); ++length) {
    chain.clear();
    chain.emplace_back("segment-scene", std::vector<Term>{var(0)});
    extend(Kind::Set, length);
  }
  return found;
}

// ---------------------------------------------------------------- anti-unification

UtteranceAlignment anti_unify_utterances(const std::string& u1, const std::string& u2) {
  auto a = split_tokens(u1);
  auto b = split_tokens(u2);
  std::size_t p = 0;
  while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
  std::size_t s = 0;
  while (s + p < a.size() && s + p < b.size() && a[a.size() - 1 - s] == b[b.size() - 1 - s]) ++s;
  UtteranceAlignment out;
  out.prefix.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(p));
  out.suffix.assign(a.end() - static_cast<std::ptrdiff_t>(s), a.end());
  out.filler1.assign(a.begin() + static_cast<std::ptrdiff_t>(p), a.end() - static_cast<std::ptrdiff_t>(s));
  out.filler2.assign(b.begin() + static_cast<std::ptrdiff_t>(p), b.end() - static_cast<std::ptrdiff_t>(s));
  if (out.filler1.empty() || out.filler2.empty())
    throw Error(ErrorCode::NoAlignment, "utterances do not differ in one region each");
  auto is_word = [](const std::string& t) {
    return std::any_of(t.begin(), t.end(), [](unsigned char ch) { return std::isalnum(ch) != 0; });
  };
  if (std::none_of(out.prefix.begin(), out.prefix.end(), is_word) &&
      std::none_of(out.suffix.begin(), out.suffix.end(), is_word))
    throw Error(ErrorCode::NoAlignment, "utterances share no word outside the differing region");
  for (const auto& t : out.filler1)
    if (std::find(out.filler2.begin(), out.filler2.end(), t) != out.filler2.end())
      throw Error(ErrorCode::NoAlignment, "differences form more than one region");
  return out;
}

namespace {

PredicateSet replace_argument(const PredicateSet& set, std::size_t pred, std::size_t arg, const Term& with) {
  std::vector<Predicate> out(set.begin(), set.end());
  std::vector<Term> args = out[pred].args();
  args[arg] = with;
  out[pred] = Predicate(out[pred].name(), std::move(args));
  return PredicateSet(std::move(out));
}

}  // namespace

ProgramAlignment anti_unify_programs(const PredicateSet& m1, const PredicateSet& m2) {
  const Term slot = Term::variable(kSlotVariable);
  if (m1.size() == m2.size()) {
    for (std::size_t i = 0; i < m1.size(); ++i)
      for (std::size_t k = 0; k < m1[i].arity(); ++k) {
        if (!m1[i].arg(k).is_constant()) continue;
        PredicateSet g1 = replace_argument(m1, i, k, slot);
        for (std::size_t j = 0; j < m2.size(); ++j) {
          if (m2[j].name() != m1[i].name() || m2[j].arity() != m1[i].arity()) continue;
          if (!m2[j].arg(k).is_constant() || m2[j].arg(k) == m1[i].arg(k)) continue;
          if (equal_modulo_renaming(g1, replace_argument(m2, j, k, slot)))
            return ProgramAlignment{std::move(g1), slot, m1[i].arg(k), m2[j].arg(k)};
        }
      }
  }
  throw Error(ErrorCode::NoAlignment, "programs do not differ in exactly one constant");
}

// ---------------------------------------------------------------- builders

namespace {

std::string quoted(const std::string& token) { return "\"" + token + "\""; }

// string and adjacency predicates for a token run with variables ?<stem>1.. .
std::vector<Term> token_run(const std::vector<std::string>& tokens, const std::string& stem,
                            std::vector<Predicate>& out) {
  std::vector<Term> ids;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ids.push_back(Term::variable("?" + stem + std::to_string(i + 1)));
    out.emplace_back("string", std::vector<Term>{ids.back(), Term::constant(quoted(tokens[i]))});
    if (i > 0) out.emplace_back("adjacent", std::vector<Term>{ids[i - 1], ids[i]});
  }
  return ids;
}

Feature hashed(const std::string& name, PredicateSet preds) { return Feature{name, std::move(preds), true}; }

}  // namespace

Construction make_holophrase(const std::string& name, const std::vector<std::string>& tokens,
                             const PredicateSet& program) {
  std::vector<Predicate> form;
  token_run(tokens, "t", form);
  Construction c;
  c.name = name;
  const Term unit = Term::variable("?utterance");
  c.conditional.push_back({unit, {hashed(kMeaning, program)}, {hashed(kForm, PredicateSet(std::move(form)))}});
  c.contributing.push_back({unit, {Feature{"category", CategorySet{"utterance"}, false}}});
  return c;
}

Construction make_item_construction(const std::string& name, const std::vector<std::string>& prefix,
                                    const std::vector<std::string>& suffix, const std::string& slot_cat,
                                    const PredicateSet& program, const Term& slot) {
  std::vector<Predicate> form;
  auto pre = token_run(prefix, "p", form);
  auto post = token_run(suffix, "s", form);
  const Term first = Term::variable("?slot-first");
  const Term last = Term::variable("?slot-last");
  if (!pre.empty()) form.emplace_back("adjacent", std::vector<Term>{pre.back(), first});
  if (!post.empty()) form.emplace_back("adjacent", std::vector<Term>{last, post.front()});

  const Term slot_unit = Term::variable("?slot");
  std::vector<Feature> slot_lock{Feature{"category", CategorySet{slot_cat}, false}, Feature{"referent", slot, false},
                                 Feature{"first", first, false}, Feature{"last", last, false}};
  const Term unit = Term::variable("?utterance");
  Construction c;
  c.name = name;
  c.conditional.push_back({slot_unit, slot_lock, slot_lock});
  c.conditional.push_back({unit, {hashed(kMeaning, program)}, {hashed(kForm, PredicateSet(std::move(form)))}});
  c.contributing.push_back({unit, {Feature{"category", CategorySet{"utterance"}, false}}});
  return c;
}

Construction make_lexical_construction(const std::string& name, const std::vector<std::string>& tokens,
                                       const Term& value, const std::string& category) {
  std::vector<Predicate> form;
  auto ids = token_run(tokens, "f", form);
  const Term referent = Term::variable("?r");
  const Term unit = Term::variable("?filler");
  Construction c;
  c.name = name;
  c.conditional.push_back({unit, {hashed(kMeaning, PredicateSet{Predicate("bind", {referent, value})})},
                           {hashed(kForm, PredicateSet(std::move(form)))}});
  c.contributing.push_back({unit,
                            {Feature{"category", CategorySet{category}, false}, Feature{"referent", referent, false},
                             Feature{"first", ids.front(), false}, Feature{"last", ids.back(), false}}});
  return c;
}

std::string name_stem(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    std::string base = token_base(t);
    if (t == kSlotVariable) base = t;
    if (base.empty()) continue;
    if (!out.empty()) out += "-";
    out += base;
  }
  return out;
}

std::string construction_category(const Construction& cxn) {
  for (const auto& u : cxn.contributing)
    for (const auto& f : u.features)
      if (f.name == "category")
        if (const auto* cats = std::get_if<CategorySet>(&f.value); cats && !cats->empty()) return *cats->begin();
  const std::string suffix = "-cxn";
  if (cxn.name.size() > suffix.size() && cxn.name.ends_with(suffix))
    return cxn.name.substr(0, cxn.name.size() - suffix.size());
  return cxn.name;
}

std::optional<std::string> slot_category(const Construction& cxn) {
  for (const auto& u : cxn.conditional)
    for (const auto& f : u.comprehension_lock)
      if (!f.hashed && f.name == "category")
        if (const auto* cats = std::get_if<CategorySet>(&f.value); cats && !cats->empty()) return *cats->begin();
  return std::nullopt;
}

// ---------------------------------------------------------------- pattern finding

namespace {

bool same_body(const Construction& a, const Construction& b) {
  return a.conditional == b.conditional && a.contributing == b.contributing;
}

const Construction* find_named(const std::vector<Construction>& inventory, const std::vector<Construction>& pending,
                               const std::string& name) {
  for (const auto& c : pending)
    if (c.name == name) return &c;
  for (const auto& c : inventory)
    if (c.name == name) return &c;
  return nullptr;
}

std::string numbered(const std::string& stem, int k) { return k == 1 ? stem : stem + "-" + std::to_string(k); }

// Finds an existing construction built by `build(stem_k)` or names a new one.
// Returns the construction's stem and whether it must be added.
template <typename Build>
std::pair<Construction, bool> reuse_or_create(const std::vector<Construction>& inventory,
                                              const std::vector<Construction>& pending, const std::string& stem,
                                              Build build) {
  for (int k = 1;; ++k) {
    Construction candidate = build(numbered(stem, k));
    const Construction* existing = find_named(inventory, pending, candidate.name);
    if (!existing) return {std::move(candidate), true};
    if (same_body(*existing, candidate)) return {std::move(candidate), false};
  }
}

}  // namespace

std::vector<PredicateSet> consistent_hypotheses(const std::vector<PredicateSet>& hypotheses,
                                                const std::string& utterance, const std::vector<Observation>& memory) {
  std::vector<PredicateSet> kept;
  bool seen = false;
  for (const auto& h : hypotheses) {
    bool agrees = false;
    for (const auto& m : memory) {
      if (m.utterance != utterance) continue;
      seen = true;
      if (equal_modulo_renaming(m.program, h)) {
        agrees = true;
        break;
      }
    }
    if (agrees) kept.push_back(h);
  }
  if (!seen || kept.empty()) return hypotheses;
  return kept;
}

LearnResult pattern_find(const Observation& observation, const std::vector<Observation>& memory,
                         const std::vector<Construction>& inventory) {
  LearnResult result;
  for (auto it = memory.rbegin(); it != memory.rend(); ++it) {
    const Observation& past = *it;
    UtteranceAlignment ua;
    ProgramAlignment pa;
    try {
      ua = anti_unify_utterances(observation.utterance, past.utterance);
      pa = anti_unify_programs(observation.program, past.program);
    } catch (const Error&) {
      continue;
    }
    std::vector<std::string> skeleton = ua.prefix;
    skeleton.push_back(kSlotVariable);
    skeleton.insert(skeleton.end(), ua.suffix.begin(), ua.suffix.end());
    const std::string stem = name_stem(skeleton);
    std::string slot_cat;
    auto [item, fresh_item] = reuse_or_create(inventory, result.constructions, stem, [&](const std::string& s) {
      slot_cat = s + "(" + kSlotVariable + ")";
      return make_item_construction(s + "-cxn", ua.prefix, ua.suffix, slot_cat, pa.pattern, pa.slot);
    });
    if (fresh_item) result.constructions.push_back(item);

    for (const auto& [tokens, value] : {std::pair{ua.filler1, pa.filler1}, std::pair{ua.filler2, pa.filler2}}) {
      std::string category;
      auto [lex, fresh_lex] =
          reuse_or_create(inventory, result.constructions, name_stem(tokens), [&](const std::string& s) {
            category = s;
            return make_lexical_construction(s + "-cxn", tokens, value, s);
          });
      if (fresh_lex) result.constructions.push_back(lex);
      result.links.emplace_back(category, slot_cat);
    }
    result.generalized = true;
    return result;
  }

  const auto tokens = split_tokens(observation.utterance);
  auto [holo, fresh] = reuse_or_create(inventory, result.constructions, name_stem(tokens), [&](const std::string& s) {
    return make_holophrase(s + "-cxn", tokens, observation.program);
  });
  if (fresh) result.constructions.push_back(std::move(holo));
  return result;
}

// ---------------------------------------------------------------- entrenchment

std::set<std::string> competitors(const std::vector<Construction>& inventory, const TransientStructure& solution,
                                  const TransientStructure& initial, Direction direction) {
  const std::set<std::string> used(solution.history.begin(), solution.history.end());
  auto rivals = [&](const PredicateSet& k) {
    bool nested = false;
    for (const auto& span : solution.consumed) {
      if (span.empty()) continue;
      if (k == span) return true;
      nested = nested || k.is_subset_of(span);
    }
    return !nested;
  };
  std::set<std::string> out;
  for (const auto& c : inventory) {
    if (used.count(c.name)) continue;
    for (const auto& k : hashed_consumption(c, initial, direction))
      if (rivals(k)) {
        out.insert(c.name);
        break;
      }
  }
  return out;
}

std::vector<std::string> update_entrenchment(Grammar& grammar, const std::set<std::string>& used, bool success,
                                             const std::set<std::string>& competitor_names,
                                             const EntrenchmentPolicy& policy) {
  auto clamp = [&](double v) { return std::clamp(v, policy.floor, policy.ceiling); };
  std::vector<std::string> filler_cats, slot_cats;
  for (auto& c : grammar.constructions) {
    if (used.count(c.name)) {
      c.score = clamp(c.score + (success ? policy.reward : policy.punish));
      if (auto slot = slot_category(c))
        slot_cats.push_back(*slot);
      else
        filler_cats.push_back(construction_category(c));
    } else if (success && competitor_names.count(c.name)) {
      c.score = clamp(c.score + policy.inhibit);
    }
  }
  if (policy.adjust_links)
    for (const auto& f : filler_cats)
      for (const auto& s : slot_cats)
        grammar.network.adjust_weight(f, s, success ? policy.reward : policy.punish);

  std::vector<std::string> evicted;
  if (!policy.evict) return evicted;
  constexpr double kEpsilon = 1e-9;
  auto& cxns = grammar.constructions;
  for (auto it = cxns.begin(); it != cxns.end();) {
    if (it->score <= policy.floor + kEpsilon) {
      evicted.push_back(it->name);
      it = cxns.erase(it);
    } else {
      ++it;
    }
  }
  return evicted;
}

}  // namespace cxg
