#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cxg/construction.hpp"
#include "cxg/error.hpp"

namespace cxg {

enum class GoalTest { NoMoreCxns, AllProcessed, ConnectedMeaning };

std::string_view to_string(GoalTest g);
GoalTest goal_test_from_string(std::string_view s);

struct SearchConfig {
  std::set<GoalTest> goals;
  double w_depth = 1.0;
  double w_units = 1.0;
  std::size_t max_nodes = 10000;
  std::size_t max_depth = 64;
  /// Keep expanding after the first solution and report every goal node,
  /// goal nodes included.
  bool all_solutions = false;

  static SearchConfig defaults(Direction d);
  /// Throws ValidationError.
  void validate() const;
};

struct SearchNode {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent;
  TransientStructure structure;
  std::size_t depth = 0;
  std::size_t units_matched = 0;
  double priority = 0.0;
  /// Construction that created this node; empty for the root.
  std::string applied;
  bool expanded = false;
  bool goal = false;
};

struct SearchTree {
  std::vector<SearchNode> nodes;
  std::optional<std::uint64_t> solution;
};

struct SolutionResult {
  TransientStructure solution;
  std::vector<std::string> applied;
  std::size_t nodes_created = 0;
  std::size_t nodes_expanded = 0;
  SearchTree tree;
  /// Filled in all-solutions mode only, in node id order.
  std::vector<TransientStructure> solutions;
};

class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, SearchTree tree, std::size_t expanded)
      : Error(ErrorCode::SearchExhausted, what), tree_(std::move(tree)), expanded_(expanded) {}
  const SearchTree& tree() const noexcept { return tree_; }
  std::size_t nodes_expanded() const noexcept { return expanded_; }

 private:
  SearchTree tree_;
  std::size_t expanded_;
};

bool goal_no_more_cxns(const TransientStructure& ts, const Grammar& grammar, Direction d);
bool goal_all_processed(const TransientStructure& ts, Direction d);
bool goal_connected_meaning(const TransientStructure& ts);

double priority(const SearchNode& node, const SearchConfig& config);

SolutionResult search(const TransientStructure& initial, const Grammar& grammar, Direction d,
                      const SearchConfig& config);

PredicateSet comprehend(std::string_view utterance, const Grammar& grammar, const SearchConfig& config);
PredicateSet comprehend(std::string_view utterance, const Grammar& grammar);
std::string produce(const PredicateSet& meaning, const Grammar& grammar, const SearchConfig& config);
std::string produce(const PredicateSet& meaning, const Grammar& grammar);

/// Full search results, for callers that want the tree or the history.
SolutionResult comprehend_full(std::string_view utterance, const Grammar& grammar, const SearchConfig& config);
SolutionResult produce_full(const PredicateSet& meaning, const Grammar& grammar, const SearchConfig& config);

std::string search_tree_json(const SearchTree& tree);
std::string search_tree_dot(const SearchTree& tree);

}  // namespace cxg
