#include <benchmark/benchmark.h>

#include <random>

#include "cxg/amr.hpp"
#include "cxg/form.hpp"
#include "cxg/game.hpp"
#include "cxg/grammar_io.hpp"
#include "cxg/search.hpp"

using namespace cxg;

namespace {

const std::string kData = CXG_DATA_DIR;
const std::string kSentence = "The more you think about it, the less it makes sense.";

const Grammar& demo() {
  static const Grammar g = load_grammar(kData + "/demo-grammar.json");
  return g;
}

// Pattern of k chained edges against the tokenized sentence.
void BM_MatchSubset(benchmark::State& state) {
  const PredicateSet target = tokenize(kSentence);
  std::vector<Predicate> pattern;
  for (int i = 0; i < state.range(0); ++i)
    pattern.emplace_back("adjacent", std::vector<Term>{Term::variable("?t" + std::to_string(i)),
                                                       Term::variable("?t" + std::to_string(i + 1))});
  const PredicateSet p(std::move(pattern));
  for (auto _ : state) benchmark::DoNotOptimize(match_subset(p, target, Bindings{}));
}
BENCHMARK(BM_MatchSubset)->DenseRange(1, 5);

void BM_Tokenize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(kSentence));
}
BENCHMARK(BM_Tokenize);

void BM_Comprehend(benchmark::State& state) {
  SearchConfig c = SearchConfig::defaults(Direction::Comprehension);
  c.w_depth = c.w_units = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(comprehend_full(kSentence, demo(), c).nodes_created);
}
BENCHMARK(BM_Comprehend)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Produce(benchmark::State& state) {
  const PredicateSet m = to_predicates(read_amr_file(kData + "/the-more-the-less.amr").front());
  const SearchConfig c = SearchConfig::defaults(Direction::Production);
  for (auto _ : state) benchmark::DoNotOptimize(produce(m, demo(), c));
}
BENCHMARK(BM_Produce)->Unit(benchmark::kMillisecond);

void BM_PenmanRoundTrip(benchmark::State& state) {
  const std::string text = read_text_file(kData + "/the-more-the-less.amr");
  for (auto _ : state) benchmark::DoNotOptimize(print_penman(parse_penman(text)));
}
BENCHMARK(BM_PenmanRoundTrip);

void BM_Game(benchmark::State& state) {
  GameConfig c = load_game_config(kData + "/game-config.json");
  c.interactions = static_cast<std::size_t>(state.range(0));
  c.window = std::min(c.window, c.interactions);
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c).records.size());
}
BENCHMARK(BM_Game)->Arg(200)->Arg(2000)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
