#include <doctest.h>

#include <random>

#include "cxg/error.hpp"
#include "cxg/form.hpp"
#include "cxg/learning.hpp"
#include "cxg/search.hpp"
#include "support/builders.hpp"

using namespace cxg;

namespace {

const AttributeVocabulary kVocabulary = {{"shape", {"car", "sheep", "cube"}},
                                         {"color", {"yellow", "red", "blue"}},
                                         {"size", {"small", "large"}}};

SceneObject object(const std::string& id, const std::string& shape, const std::string& color,
                   const std::string& size) {
  return SceneObject{id, {{"shape", shape}, {"color", color}, {"size", size}}};
}

Scene one_yellow_car() {
  return Scene{{object("o1", "car", "yellow", "small"), object("o2", "sheep", "red", "large"),
                object("o3", "cube", "blue", "large")}};
}

PredicateSet query_program(const std::string& filter, const std::string& attribute) {
  return parse_predicate_set("{segment-scene(?v0), filter(?v1, ?v0, " + filter + "), unique(?v2, ?v1), query(?v3, ?v2, " +
                             attribute + ")}");
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

// Steps of a chain program, independent of the predicate encoding.
struct Step {
  std::string op;
  std::string arg;
};

std::optional<std::string> run_chain(const std::vector<Step>& steps, const Scene& scene) {
  std::vector<const SceneObject*> set;
  const SceneObject* obj = nullptr;
  std::optional<std::string> value;
  for (const auto& s : steps) {
    if (s.op == "segment") {
      for (const auto& o : scene.objects) set.push_back(&o);
    } else if (s.op == "filter") {
      std::vector<const SceneObject*> kept;
      for (const auto* o : set)
        for (const auto& [_, v] : o->attributes)
          if (v == s.arg) {
            kept.push_back(o);
            break;
          }
      set = kept;
    } else if (s.op == "unique") {
      if (set.size() != 1) return std::nullopt;
      obj = set[0];
    } else if (s.op == "count") {
      value = std::to_string(set.size());
    } else if (s.op == "query") {
      auto it = obj->attributes.find(s.arg);
      if (it == obj->attributes.end()) return std::nullopt;
      value = it->second;
    }
  }
  return value;
}

PredicateSet encode(const std::vector<Step>& steps) {
  std::vector<Predicate> out;
  auto v = [](std::size_t i) { return Term::variable("?v" + std::to_string(i)); };
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.op == "segment") out.emplace_back("segment-scene", std::vector<Term>{v(i)});
    else if (s.op == "filter") out.emplace_back("filter", std::vector<Term>{v(i), v(i - 1), Term::constant(s.arg)});
    else if (s.op == "query") out.emplace_back("query", std::vector<Term>{v(i), v(i - 1), Term::constant(s.arg)});
    else out.emplace_back(s.op, std::vector<Term>{v(i), v(i - 1)});
  }
  return PredicateSet(std::move(out));
}

// Every type-correct chain up to max_length, shortest matching length only.
std::vector<PredicateSet> brute_force_programs(const Scene& scene, const std::string& answer, std::size_t max_length) {
  std::vector<std::vector<Step>> all{{{"segment", ""}}};
  std::vector<std::string> type{"set"};
  for (std::size_t length = 1; length <= max_length; ++length) {
    std::vector<PredicateSet> hits;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (all[i].size() == length && type[i] == "value") {
        auto r = run_chain(all[i], scene);
        if (r && *r == answer) hits.push_back(encode(all[i]));
      }
    if (!hits.empty()) return hits;
    std::size_t n = all.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (all[i].size() != length) continue;
      auto grow = [&](Step s, const std::string& t) {
        auto next = all[i];
        next.push_back(std::move(s));
        all.push_back(std::move(next));
        type.push_back(t);
      };
      if (type[i] == "set") {
        for (const auto& [_, values] : kVocabulary)
          for (const auto& v : values) grow({"filter", v}, "set");
        grow({"unique", ""}, "object");
        grow({"count", ""}, "value");
      } else if (type[i] == "object") {
        for (const auto& [attr, _] : kVocabulary) grow({"query", attr}, "value");
      }
    }
  }
  return {};
}

Observation observe(const std::string& utterance, const std::string& filter) {
  return Observation{utterance, query_program(filter, "color"), ""};
}

Grammar with(const LearnResult& r, Grammar g = {}) {
  for (const auto& c : r.constructions) g.constructions.push_back(c);
  for (const auto& [a, b] : r.links) g.network.add_link(a, b);
  return g;
}

SearchConfig comprehension() { return SearchConfig::defaults(Direction::Comprehension); }

}  // namespace

TEST_CASE("evaluate_program") {
  CHECK(evaluate_program(query_program("car", "color"), one_yellow_car()) == "yellow");
  CHECK(evaluate_program(parse_predicate_set("{segment-scene(?a), filter(?b, ?a, zebra), count(?c, ?b)}"),
                         one_yellow_car()) == "0");
  Scene two_cars{{object("o1", "car", "yellow", "small"), object("o2", "car", "red", "large")}};
  CHECK(code_of([&] { evaluate_program(query_program("car", "color"), two_cars); }) == ErrorCode::EvaluationFailure);
  CHECK(code_of([&] { evaluate_program(query_program("car", "weight"), one_yellow_car()); }) ==
        ErrorCode::EvaluationFailure);
  CHECK(program_target(query_program("car", "color")) == Term::variable("?v3"));
}

TEST_CASE("compose_programs") {
  auto hyps = compose_programs(one_yellow_car(), "yellow", kVocabulary);
  bool has_worked = false;
  for (const auto& h : hyps) has_worked = has_worked || equal_modulo_renaming(h, query_program("car", "color"));
  CHECK(has_worked);
  for (const auto& h : hyps) CHECK(evaluate_program(h, one_yellow_car()) == "yellow");
  CHECK(compose_programs(one_yellow_car(), "purple", kVocabulary).empty());
  CHECK(compose_programs(one_yellow_car(), "yellow", kVocabulary) == hyps);
}

TEST_CASE("compose_programs equals brute-force enumeration") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 40; ++i) {
    Scene scene;
    std::size_t n = 1 + rng() % 5;
    for (std::size_t k = 0; k < n; ++k)
      scene.objects.push_back(object("o" + std::to_string(k), kVocabulary[0].second[rng() % 3],
                                     kVocabulary[1].second[rng() % 3], kVocabulary[2].second[rng() % 2]));
    std::vector<std::string> answers = {"0", "1", "2", "3", "yellow", "red", "car", "large", "sheep"};
    const std::string answer = answers[rng() % answers.size()];
    std::size_t max_length = 3 + rng() % 2;
    auto got = compose_programs(scene, answer, kVocabulary, max_length);
    auto want = brute_force_programs(scene, answer, max_length);
    INFO("answer " << answer << ", max " << max_length);
    CHECK(std::set<PredicateSet, decltype([](const PredicateSet& a, const PredicateSet& b) {
            return to_string(a) < to_string(b);
          })>(got.begin(), got.end()).size() == got.size());
    REQUIRE(got.size() == want.size());
    for (const auto& w : want) CHECK(std::find(got.begin(), got.end(), w) != got.end());
  }
}

TEST_CASE("anti_unify_utterances") {
  auto a = anti_unify_utterances("What is the colour of the car ?", "What is the colour of the sheep ?");
  CHECK(a.prefix == std::vector<std::string>{"What", "is", "the", "colour", "of", "the"});
  CHECK(a.suffix == std::vector<std::string>{"?"});
  CHECK(a.filler1 == std::vector<std::string>{"car"});
  CHECK(a.filler2 == std::vector<std::string>{"sheep"});
  CHECK(code_of([] { anti_unify_utterances("What is it?", "What is it?"); }) == ErrorCode::NoAlignment);
  CHECK(code_of([] { anti_unify_utterances("red cube", "blue sphere"); }) == ErrorCode::NoAlignment);
  CHECK(code_of([] { anti_unify_utterances("Count cubes?", "Show spheres?"); }) == ErrorCode::NoAlignment);
  auto multi = anti_unify_utterances("How many red things are there?", "How many large metal things are there?");
  CHECK(multi.filler2 == std::vector<std::string>{"large", "metal"});
}

TEST_CASE("anti_unify_programs") {
  auto a = anti_unify_programs(query_program("car", "color"), query_program("sheep", "color"));
  CHECK(a.slot == Term::variable(kSlotVariable));
  CHECK(a.filler1 == Term::constant("car"));
  CHECK(a.filler2 == Term::constant("sheep"));
  CHECK(equal_modulo_renaming(a.pattern, query_program("?x", "color")));
  CHECK(code_of([] { anti_unify_programs(query_program("car", "color"), query_program("car", "color")); }) ==
        ErrorCode::NoAlignment);
  CHECK(code_of([] {
          anti_unify_programs(query_program("car", "color"),
                              parse_predicate_set("{segment-scene(?a), filter(?b, ?a, car), count(?c, ?b)}"));
        }) == ErrorCode::NoAlignment);
  CHECK(code_of([] { anti_unify_programs(query_program("car", "color"), query_program("sheep", "size")); }) ==
        ErrorCode::NoAlignment);
}

TEST_CASE("pattern_find: first observation is a holophrase") {
  auto r = pattern_find(observe("What is the colour of the car ?", "car"), {}, {});
  REQUIRE(r.constructions.size() == 1);
  CHECK(r.links.empty());
  CHECK_FALSE(r.generalized);
  CHECK(r.constructions[0].name == "what-is-the-colour-of-the-car-cxn");
  Grammar g = with(r);
  PredicateSet m = resolve_binds(comprehend("What is the colour of the car ?", g, comprehension()));
  CHECK(equal_modulo_renaming(m, query_program("car", "color")));
}

TEST_CASE("pattern_find: car then sheep yields one item, two lexicals, two links") {
  Observation car = observe("What is the colour of the car ?", "car");
  Observation sheep = observe("What is the colour of the sheep ?", "sheep");
  LearnResult first = pattern_find(car, {}, {});
  Grammar g = with(first);
  LearnResult r = pattern_find(sheep, {car}, g.constructions);
  CHECK(r.generalized);
  int items = 0, lexicals = 0;
  for (const auto& c : r.constructions) (slot_category(c) ? items : lexicals)++;
  CHECK(items == 1);
  CHECK(lexicals == 2);
  CHECK(r.links.size() == 2);
  g = with(r, g);
  // Closure: both sources comprehend to their programs.
  for (const auto& o : {car, sheep}) {
    INFO(o.utterance);
    PredicateSet m = resolve_binds(comprehend(o.utterance, g, comprehension()));
    CHECK(equal_modulo_renaming(m, o.program));
  }
  // A new filler, linked by hand, works at once.
  Construction cube = make_lexical_construction("cube-cxn", {"cube"}, Term::constant("cube"), "cube");
  g.constructions.push_back(cube);
  for (const auto& c : r.constructions)
    if (auto slot = slot_category(c)) g.network.add_link("cube", *slot);
  PredicateSet m = resolve_binds(comprehend("What is the colour of the cube ?", g, comprehension()));
  CHECK(equal_modulo_renaming(m, query_program("cube", "color")));
}

TEST_CASE("pattern_find reuses what the inventory already has") {
  Observation car = observe("What is the colour of the car ?", "car");
  Observation sheep = observe("What is the colour of the sheep ?", "sheep");
  Grammar g = with(pattern_find(car, {}, {}));
  g = with(pattern_find(sheep, {car}, g.constructions), g);
  Observation cube = observe("What is the colour of the cube ?", "cube");
  LearnResult r = pattern_find(cube, {car, sheep}, g.constructions);
  REQUIRE(r.generalized);
  // Only the cube lexical is new; links still connect both fillers to the slot.
  REQUIRE(r.constructions.size() == 1);
  CHECK(r.constructions[0].name == "cube-cxn");
  CHECK(r.links.size() == 2);
}

TEST_CASE("consistent_hypotheses") {
  std::vector<PredicateSet> hyps = {query_program("car", "color"), query_program("small", "color")};
  std::vector<Observation> memory = {observe("What is the colour of the car ?", "car")};
  auto kept = consistent_hypotheses(hyps, "What is the colour of the car ?", memory);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == hyps[0]);
  CHECK(consistent_hypotheses(hyps, "Something else ?", memory).size() == 2);
  memory[0].program = query_program("sheep", "color");
  CHECK(consistent_hypotheses(hyps, "What is the colour of the car ?", memory).size() == 2);
}

TEST_CASE("update_entrenchment: reward, punish, evict") {
  EntrenchmentPolicy policy;
  Grammar g;
  g.constructions = {build::lexical("a", "alpha", "n"), build::lexical("b", "beta", "n", 0.05)};
  update_entrenchment(g, {"a-cxn"}, true, {}, policy);
  CHECK(g.find("a-cxn")->score == doctest::Approx(0.6));
  auto evicted = update_entrenchment(g, {"b-cxn"}, false, {}, policy);
  CHECK(evicted == std::vector<std::string>{"b-cxn"});
  CHECK(g.find("b-cxn") == nullptr);
  for (int i = 0; i < 10; ++i) update_entrenchment(g, {"a-cxn"}, true, {}, policy);
  CHECK(g.find("a-cxn")->score == doctest::Approx(1.0));
  policy.evict = false;
  for (int i = 0; i < 20; ++i) update_entrenchment(g, {"a-cxn"}, false, {}, policy);
  CHECK(g.find("a-cxn")->score == doctest::Approx(0.0));
}

TEST_CASE("link weights follow the outcome") {
  Observation car = observe("What is the colour of the car ?", "car");
  Observation sheep = observe("What is the colour of the sheep ?", "sheep");
  Grammar g = with(pattern_find(car, {}, {}));
  LearnResult r = pattern_find(sheep, {car}, g.constructions);
  g = with(r, g);
  std::string slot;
  for (const auto& c : r.constructions)
    if (auto s = slot_category(c)) slot = *s;
  std::set<std::string> used = {"car-cxn", slot.substr(0, slot.size() - 4) + "-cxn"};
  REQUIRE(g.find(*std::next(used.begin())) != nullptr);
  EntrenchmentPolicy policy;
  update_entrenchment(g, used, true, {}, policy);
  CHECK(g.network.weight("car", slot) == doctest::Approx(0.6));
  CHECK(g.network.weight("sheep", slot) == doctest::Approx(0.5));
  update_entrenchment(g, used, false, {}, policy);
  update_entrenchment(g, used, false, {}, policy);
  CHECK(g.network.weight("car", slot) == doctest::Approx(0.4));
}

TEST_CASE("competing holophrases: the winner climbs, the loser is evicted") {
  const std::string u = "What is the colour of the car ?";
  Grammar g;
  auto tokens = split_tokens(u);
  g.constructions = {make_holophrase("h-a-cxn", tokens, query_program("car", "color")),
                     make_holophrase("h-b-cxn", tokens, query_program("yellow", "color"))};
  EntrenchmentPolicy policy;
  const auto initial = TransientStructure::for_comprehension(tokenize(u));
  for (int round = 0; round < 20; ++round) {
    SolutionResult r = comprehend_full(u, g, comprehension());
    auto rivals = competitors(g.constructions, r.solution, initial, Direction::Comprehension);
    std::set<std::string> used(r.applied.begin(), r.applied.end());
    update_entrenchment(g, used, true, rivals, policy);
  }
  REQUIRE(g.find("h-a-cxn") != nullptr);
  CHECK(g.find("h-a-cxn")->score == doctest::Approx(1.0));
  CHECK(g.find("h-b-cxn") == nullptr);
}

TEST_CASE("competitors") {
  Observation car = observe("What is the colour of the car ?", "car");
  Observation sheep = observe("What is the colour of the sheep ?", "sheep");
  Grammar g = with(pattern_find(car, {}, {}));
  g = with(pattern_find(sheep, {car}, g.constructions), g);
  // A second lexical for "car" with another meaning competes with car-cxn.
  g.constructions.push_back(make_lexical_construction("car-2-cxn", {"car"}, Term::constant("yellow"), "car-2"));
  g.network.add_link("car-2", *slot_category(*g.find("what-is-the-colour-of-the-?x-cxn")));
  g.find("what-is-the-colour-of-the-car-cxn")->score = 0.1;
  const auto initial = TransientStructure::for_comprehension(tokenize(car.utterance));
  SolutionResult r = comprehend_full(car.utterance, g, comprehension());
  std::set<std::string> used(r.applied.begin(), r.applied.end());
  CHECK(used.count("what-is-the-colour-of-the-?x-cxn"));
  auto rivals = competitors(g.constructions, r.solution, initial, Direction::Comprehension);
  // The holophrase straddles the item and the filler; the other car lexical covers the same span.
  CHECK(rivals.count("what-is-the-colour-of-the-car-cxn"));
  CHECK(rivals.count(used.count("car-cxn") ? "car-2-cxn" : "car-cxn"));
  CHECK_FALSE(rivals.count("sheep-cxn"));
}

TEST_CASE("a lexical nested inside a used span is not a competitor") {
  const std::string u = "Is the cube small or large ?";
  auto tokens = split_tokens(u);
  Grammar g;
  g.constructions = {make_holophrase("q-cxn", tokens, query_program("cube", "size")),
                     make_lexical_construction("large-cxn", {"large"}, Term::constant("large"), "large")};
  const auto initial = TransientStructure::for_comprehension(tokenize(u));
  SearchConfig c = comprehension();
  c.goals = {GoalTest::AllProcessed};
  SolutionResult r = comprehend_full(u, g, c);
  CHECK(r.applied == std::vector<std::string>{"q-cxn"});
  CHECK(competitors(g.constructions, r.solution, initial, Direction::Comprehension).empty());
}

TEST_CASE("scores stay in range and updates never grow the inventory") {
  std::mt19937_64 rng(77);
  EntrenchmentPolicy policy;
  Grammar g;
  for (const char* w : {"a", "b", "c", "d", "e", "f"}) g.constructions.push_back(build::lexical(w, w, "n"));
  for (int step = 0; step < 300 && !g.constructions.empty(); ++step) {
    std::set<std::string> used, rivals;
    for (const auto& c : g.constructions) {
      if (rng() % 3 == 0) used.insert(c.name);
      else if (rng() % 2 == 0) rivals.insert(c.name);
    }
    std::size_t before = g.constructions.size();
    update_entrenchment(g, used, rng() % 2 == 0, rivals, policy);
    CHECK(g.constructions.size() <= before);
    for (const auto& c : g.constructions) {
      CHECK(c.score >= 0.0);
      CHECK(c.score <= 1.0);
    }
  }
}
