// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "cxg/amr.hpp"
#include "cxg/error.hpp"
#include "cxg/form.hpp"
#include "cxg/game.hpp"
#include "cxg/grammar_io.hpp"
#include "cxg/search.hpp"
#include "support/oracles.hpp"
#include "support/random_amr.hpp"
#include "support/search_oracle.hpp"
#include "support/toy_grammars.hpp"
#include "support/worked_example.hpp"

using namespace cxg;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kData = CXG_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Grammar& demo() {
  static const Grammar g = load_grammar(kData + "/demo-grammar.json");
  return g;
}

void worked_comprehension(Outcome& o) {
  auto t0 = Clock::now();
  SolutionResult r = comprehend_full(testdata::kSentence, demo(), SearchConfig::defaults(Direction::Comprehension));
  double s = seconds_since(t0);
  o.require(equal_modulo_renaming(r.solution.collect(kMeaning), lift_instances(testdata::meaning())), "meaning");
  o.require(r.applied.size() == 11, "11 applications");
  o.require(!r.applied.empty() && r.applied.back() == "the-comp-x-the-comp-y-cxn", "last construction");
  o.require(s < 1.0, "runtime < 1 s");
  o.detail << " applied=" << r.applied.size() << " time=" << s << "s";
}

void worked_production(Outcome& o) {
  const SearchConfig pc = SearchConfig::defaults(Direction::Production);
  const SearchConfig cc = SearchConfig::defaults(Direction::Comprehension);
  o.require(produce(testdata::meaning(), demo(), pc) == testdata::kSentence, "exact sentence");
  auto corpus = read_corpus(kData + "/demo-corpus.txt");
  o.require(corpus.size() >= 10, ">= 10 corpus sentences");
  std::size_t ok = 0;
  for (const auto& u : corpus) {
    try {
      PredicateSet m = comprehend(u, demo(), cc);
      bool there = produce(m, demo(), pc) == u;
      bool back = equal_modulo_renaming(comprehend(produce(m, demo(), pc), demo(), cc), m);
      if (there && back) ++ok;
      else o.require(false, u);
    } catch (const Error& e) {
      o.require(false, u + ": " + e.what());
    }
  }
  o.detail << " round-trips=" << ok << "/" << corpus.size();
}

void tokenizer(Outcome& o) {
  PredicateSet got = tokenize(testdata::kSentence);
  o.require(got == testdata::form(), "25 predicates exactly");
  std::size_t strings = 0, adjacent = 0;
  for (const auto& p : got) (p.name() == "string" ? strings : adjacent)++;
  o.require(strings == 13 && adjacent == 12, "13 string + 12 adjacent");
  o.detail << " string=" << strings << " adjacent=" << adjacent;
}

void penman(Outcome& o) {
  AmrGraph g = parse_penman(testdata::kPenman);
  o.require(to_predicates(g) == testdata::meaning(), "parsed predicate set");
  o.require(print_penman(with_conventional_names(from_predicates(testdata::meaning()))) == testdata::kPenman,
            "printer inverts");
  std::mt19937_64 rng(314159);
  std::size_t ok = 0;
  for (int i = 0; i < 100; ++i) {
    AmrGraph r = oracle::random_graph(rng);
    if (oracle::same_graph(r, from_predicates(to_predicates(r))) && oracle::same_graph(r, parse_penman(print_penman(r))))
      ++ok;
  }
  o.require(ok == 100, "100 random graphs");
  o.detail << " random=" << ok << "/100";
}

PredicateSet suffix_variables(const PredicateSet& s, const std::string& suffix) {
  std::vector<Predicate> out;
  for (const auto& p : s) {
    std::vector<Term> args;
    for (const auto& t : p.args()) args.push_back(t.is_variable() ? Term::variable(t.symbol() + suffix) : t);
    out.emplace_back(p.name(), std::move(args));
  }
  return PredicateSet(std::move(out));
}

void matching(Outcome& o) {
  oracle::RandomSets gen(777);
  std::size_t ok = 0, nonempty = 0;
  for (int i = 0; i < 500; ++i) {
    PredicateSet pattern = gen.set(6, 0.6);
    PredicateSet target = suffix_variables(gen.set(10, 0.15), "-t");
    auto got = match_subset(pattern, target, Bindings{});
    auto want = oracle::brute_force_match({pattern.begin(), pattern.end()}, {target.begin(), target.end()}, {});
    ok += oracle::keys(got) == oracle::keys(want);
    nonempty += !want.empty();
  }
  o.require(ok == 500, "identical solution sets");
  o.detail << " agree=" << ok << "/500 non-empty=" << nonempty;
}

void search_oracle(Outcome& o) {
  std::mt19937_64 rng(4242);
  const std::set<GoalTest> goals{GoalTest::AllProcessed, GoalTest::ConnectedMeaning};
  std::size_t ok = 0, trials = 40;
  for (std::size_t t = 0; t < trials; ++t) {
    Grammar g = toy::random_grammar(rng);
    const std::string u = toy::random_utterance(rng, 8);
    SearchConfig c;
    c.goals = goals;
    c.all_solutions = true;
    c.max_nodes = 1000000;
    auto initial = TransientStructure::for_comprehension(tokenize(u));
    auto want = oracle::enumerate(initial, g, Direction::Comprehension, goals);
    std::vector<TransientStructure> got;
    try {
      got = search(initial, g, Direction::Comprehension, c).solutions;
    } catch (const SearchExhausted&) {
    }
    ok += oracle::same_solutions(got, want.goals);
  }
  o.require(ok == trials, "all toy cases agree");
  o.detail << " agree=" << ok << "/" << trials;
}

void heuristic(Outcome& o) {
  SearchConfig guided = SearchConfig::defaults(Direction::Comprehension);
  SearchConfig blind = guided;
  blind.w_depth = blind.w_units = 0.0;
  SolutionResult a = comprehend_full(testdata::kSentence, demo(), guided);
  SolutionResult b = comprehend_full(testdata::kSentence, demo(), blind);
  o.require(a.nodes_created <= b.nodes_created, "(1,1) creates no more nodes");
  o.require(equal_modulo_renaming(a.solution.collect(kMeaning), b.solution.collect(kMeaning)), "same solution");
  o.detail << " nodes(1,1)=" << a.nodes_created << " nodes(0,0)=" << b.nodes_created;
}

void learning_dynamics(Outcome& o) {
  GameConfig c = load_game_config(kData + "/game-config.json");
  o.require(c.interactions == 2000 && c.templates.size() == 30 && c.attributes.size() == 4 && c.scene_size == 6 &&
                c.window == 100,
            "experiment set-up");
  auto t0 = Clock::now();
  ExperimentResult r = run_experiment(c);
  double s = seconds_since(t0);
  ExperimentResult again = run_experiment(c);
  std::size_t peak = 0, peak_at = 0;
  for (const auto& rec : r.records)
    if (rec.inventory_size > peak) peak = rec.inventory_size, peak_at = rec.index;
  const std::size_t final_size = r.records.back().inventory_size;
  o.require(r.windowed_success.back() >= 0.95, "final windowed success >= 0.95");
  o.require(peak_at < c.interactions, "peak before the end");
  o.require(static_cast<double>(final_size) <= 0.8 * static_cast<double>(peak), "final <= 0.8 x peak");
  o.require(metrics_csv(r) == metrics_csv(again), "byte-identical rerun");
  o.require(s < 120.0, "runtime < 2 min");
  char buf[160];
  std::snprintf(buf, sizeof buf, " ws=%.3f peak=%zu@%zu final=%zu time=%.1fs", r.windowed_success.back(), peak,
                peak_at, final_size, s);
  o.detail << buf;
}

void one_shot(Outcome& o) {
  auto program = [](const std::string& f) {
    return parse_predicate_set("{segment-scene(?v0), filter(?v1, ?v0, " + f +
                               "), unique(?v2, ?v1), query(?v3, ?v2, color)}");
  };
  Observation car{"What is the colour of the car?", program("car"), "yellow"};
  Observation sheep{"What is the colour of the sheep?", program("sheep"), "red"};
  Agent learner = make_learner();
  auto absorb = [&](const LearnResult& r) {
    for (const auto& x : r.constructions) learner.grammar.constructions.push_back(x);
    for (const auto& [a, b] : r.links) learner.grammar.network.add_link(a, b);
  };
  absorb(pattern_find(car, {}, {}));
  LearnResult r = pattern_find(sheep, {car}, learner.grammar.constructions);
  absorb(r);
  std::size_t items = 0, lexicals = 0;
  std::string slot;
  for (const auto& x : r.constructions) {
    if (auto s = slot_category(x)) ++items, slot = *s;
    else ++lexicals;
  }
  o.require(r.generalized && items == 1 && lexicals == 2 && r.links.size() == 2, "1 item + 2 lexical + 2 links");

  learner.grammar.constructions.push_back(
      make_lexical_construction("cube-cxn", {"cube"}, Term::constant("cube"), "cube"));
  learner.grammar.network.add_link("cube", slot);
  const std::size_t before = learner.grammar.constructions.size();

  GameConfig c = load_game_config(kData + "/game-config.json");
  c.templates = {c.templates.front()};
  Agent tutor = make_tutor(c);
  Scene scene{{{"obj-1", {{"shape", "cube"}, {"color", "blue"}, {"size", "large"}, {"material", "rubber"}}}}};
  std::mt19937_64 rng(9);
  InteractionRecord rec = run_interaction(tutor, learner, scene, rng, c, 1);
  o.require(rec.utterance == "What is the colour of the cube?", "cube question");
  o.require(rec.success && rec.answer == std::optional<std::string>("blue"), "answered blue");
  o.require(rec.learned == 0 && learner.grammar.constructions.size() == before, "no further learning");
  o.detail << " items=" << items << " lexicals=" << lexicals << " links=" << r.links.size()
           << " cube=" << rec.answer.value_or("-");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"worked-example comprehension", worked_comprehension},
      {"worked-example production", worked_production},
      {"tokenizer fidelity", tokenizer},
      {"penman codec", penman},
      {"matching oracle", matching},
      {"search oracle", search_oracle},
      {"heuristic effectiveness", heuristic},
      {"learning dynamics", learning_dynamics},
      {"one-shot generalization", one_shot},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s %zu %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures;
}
