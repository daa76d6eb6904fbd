#include <doctest.h>

#include <numeric>
#include <random>

#include "cxg/amr.hpp"
#include "cxg/error.hpp"
#include "support/oracles.hpp"
#include "support/random_amr.hpp"
#include "support/worked_example.hpp"

using namespace cxg;
using oracle::lifted;
using oracle::random_graph;
using oracle::same_graph;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_penman(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse_penman did not throw");
  return ErrorCode::ParseError;
}

ErrorCode from_error(const char* set) {
  try {
    from_predicates(parse_predicate_set(set));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("from_predicates did not throw");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("parse_penman on the worked example") {
  AmrGraph g = parse_penman(testdata::kPenman);
  CHECK(g.root == Term::constant("c"));
  CHECK(g.instances.size() == 9);
  CHECK(g.relations.size() == 9);
  int refs_to_i = 0;
  for (const auto& r : g.relations) refs_to_i += r.child == Term::constant("i");
  CHECK(refs_to_i == 2);
  CHECK(to_predicates(g) == testdata::meaning());
}

TEST_CASE("parse_penman small cases and errors") {
  AmrGraph y = parse_penman("(y / you)");
  CHECK(y.instances.size() == 1);
  CHECK(y.relations.empty());
  CHECK(y.root == Term::constant("y"));
  CHECK(to_predicates(y) == parse_predicate_set("{you(y)}"));
  CHECK(parse_error("(x / a :arg0 (x / b))") == ErrorCode::DuplicateVariable);
  CHECK(parse_error("(x / a :arg0 z)") == ErrorCode::UndeclaredReference);
  CHECK(parse_error("(x / a :arg0 (y / b)") == ErrorCode::SyntaxError);
  CHECK(parse_error("(x a)") == ErrorCode::SyntaxError);
  CHECK(parse_penman("(x / a :ARG0 (y / b))").relations[0].role == ":arg0");
}

TEST_CASE("from_predicates and the canonical printer") {
  AmrGraph g = from_predicates(testdata::meaning());
  CHECK(g.root == Term::constant("c"));
  CHECK(print_penman(g) == testdata::kPenman);
  CHECK(print_penman(from_predicates(parse_predicate_set("{you(y)}"))) == "(y / you)");
  CHECK(from_error("{you(y), it(i)}") == ErrorCode::MultipleRoots);
  CHECK(from_error("{you(y), :arg0(y)}") == ErrorCode::MalformedPredicate);
  CHECK(from_error("{you(y, z)}") == ErrorCode::MalformedPredicate);
  CHECK(from_error("{a(x), b(y), :arg0(x, y), :arg0(y, x)}") == ErrorCode::NoRoot);
}

TEST_CASE("conventional names follow concept initials") {
  AmrGraph g = with_conventional_names(from_predicates(lift_instances(testdata::meaning())));
  CHECK(print_penman(g) == testdata::kPenman);
}

TEST_CASE("re-entrant variables yield one concept predicate") {
  PredicateSet s = to_predicates(parse_penman(testdata::kPenman));
  int it_concepts = 0;
  for (const auto& p : s) it_concepts += p.name() == "it";
  CHECK(it_concepts == 1);
}

TEST_CASE("100 random re-entrant graphs round-trip") {
  std::mt19937_64 rng(314159);
  for (int i = 0; i < 100; ++i) {
    AmrGraph g = random_graph(rng);
    INFO(print_penman(g));
    AmrGraph back = from_predicates(to_predicates(g));
    CHECK(same_graph(g, back));
    AmrGraph reparsed = parse_penman(print_penman(g));
    CHECK(same_graph(g, reparsed));
    CHECK(isomorphic(g, reparsed));
    AmrGraph renamed = with_conventional_names(g);
    CHECK(same_graph(g, parse_penman(print_penman(renamed))));
  }
}

TEST_CASE("is_connected") {
  CHECK(is_connected(testdata::meaning()));
  CHECK_FALSE(is_connected(parse_predicate_set("{you(y), it(i)}")));
  CHECK(is_connected(PredicateSet{}));
}

TEST_CASE("is_connected agrees with union-find over shared terms") {
  oracle::RandomSets gen(808);
  int connected = 0;
  for (int i = 0; i < 500; ++i) {
    PredicateSet s = gen.set(6, 0.5);
    std::vector<std::size_t> parent(s.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        for (const auto& t : s[a].args())
          if (std::find(s[b].args().begin(), s[b].args().end(), t) != s[b].args().end())
            parent[find(a)] = find(b);
    std::set<std::size_t> roots;
    for (std::size_t a = 0; a < s.size(); ++a) roots.insert(find(a));
    bool want = roots.size() <= 1;
    connected += want;
    INFO(s);
    CHECK(is_connected(s) == want);
  }
  CHECK(connected > 50);
  CHECK(connected < 450);
}

TEST_CASE(".amr files split into blocks") {
  auto blocks = split_amr_blocks("# comment\n(y / you)\n\n(i / it)\n# trailing\n");
  REQUIRE(blocks.size() == 2);
  CHECK(parse_penman(blocks[1]).root == Term::constant("i"));
  auto graphs = read_amr_file(std::string(CXG_DATA_DIR) + "/the-more-the-less.amr");
  REQUIRE(graphs.size() == 1);
  CHECK(to_predicates(graphs[0]) == testdata::meaning());
}
