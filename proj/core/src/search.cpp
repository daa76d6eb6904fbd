#include "cxg/search.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cxg/amr.hpp"
#include "cxg/form.hpp"
#include "cxg/matching.hpp"

namespace cxg {

std::string_view to_string(GoalTest g) {
  switch (g) {
    case GoalTest::NoMoreCxns: return "no-more-cxns";
    case GoalTest::AllProcessed: return "all-processed";
    case GoalTest::ConnectedMeaning: return "connected-meaning";
  }
  return "?";
}

GoalTest goal_test_from_string(std::string_view s) {
  for (GoalTest g : {GoalTest::NoMoreCxns, GoalTest::AllProcessed, GoalTest::ConnectedMeaning})
    if (to_string(g) == s) return g;
  throw Error(ErrorCode::ValidationError, "unknown goal test '" + std::string(s) + "'");
}

SearchConfig SearchConfig::defaults(Direction d) {
  SearchConfig c;
  if (d == Direction::Comprehension)
    c.goals = {GoalTest::AllProcessed, GoalTest::ConnectedMeaning};
  else
    c.goals = {GoalTest::AllProcessed, GoalTest::NoMoreCxns};
  return c;
}

void SearchConfig::validate() const {
  if (goals.empty()) throw Error(ErrorCode::ValidationError, "search config needs at least one goal test");
  if (max_nodes < 1) throw Error(ErrorCode::ValidationError, "max nodes must be at least 1");
}

bool goal_no_more_cxns(const TransientStructure& ts, const Grammar& grammar, Direction d) {
  return std::none_of(grammar.constructions.begin(), grammar.constructions.end(),
                      [&](const Construction& c) { return applicable(c, ts, d, &grammar.network); });
}

bool goal_all_processed(const TransientStructure& ts, Direction d) {
  return ts.root().predicates(d == Direction::Comprehension ? kForm : kMeaning).empty();
}

bool goal_connected_meaning(const TransientStructure& ts) { return is_connected(ts.collect(kMeaning)); }

double priority(const SearchNode& node, const SearchConfig& config) {
  return config.w_depth * static_cast<double>(node.depth) + config.w_units * static_cast<double>(node.units_matched);
}

namespace {

bool passes(const SearchConfig& config, const TransientStructure& ts, const Grammar& grammar, Direction d) {
  for (GoalTest g : config.goals) {
    bool ok = false;
    switch (g) {
      case GoalTest::AllProcessed: ok = goal_all_processed(ts, d); break;
      case GoalTest::ConnectedMeaning: ok = goal_connected_meaning(ts); break;
      case GoalTest::NoMoreCxns: ok = goal_no_more_cxns(ts, grammar, d); break;
    }
    if (!ok) return false;
  }
  return true;
}

struct FrontierOrder {
  const std::vector<SearchNode>* nodes;
  bool operator()(std::size_t a, std::size_t b) const {
    const auto& na = (*nodes)[a];
    const auto& nb = (*nodes)[b];
    if (na.priority != nb.priority) return na.priority < nb.priority;
    return na.id > nb.id;
  }
};

class DuplicateTable {
 public:
  /// False if an equal structure (modulo renaming) was already added.
  bool add(const TransientStructure& ts) {
    PredicateSet flat = flatten(ts);
    auto& bucket = table_[renaming_invariant_hash(flat)];
    for (const auto& seen : bucket)
      if (equal_modulo_renaming(seen, flat)) return false;
    bucket.push_back(std::move(flat));
    return true;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<PredicateSet>> table_;
};

std::vector<const Construction*> trial_order(const Grammar& grammar) {
  std::vector<const Construction*> order;
  for (const auto& c : grammar.constructions) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(), [](const Construction* a, const Construction* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->name < b->name;
  });
  return order;
}

std::vector<std::string> applied_path(const std::vector<SearchNode>& nodes, std::size_t index) {
  std::vector<std::string> path;
  for (const SearchNode* n = &nodes[index]; n->parent; n = &nodes[*n->parent]) path.push_back(n->applied);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

SolutionResult search(const TransientStructure& initial, const Grammar& grammar, Direction d,
                      const SearchConfig& config) {
  config.validate();
  const auto order = trial_order(grammar);
  IdSource ids;
  DuplicateTable seen;
  std::vector<SearchNode> nodes;
  std::priority_queue<std::size_t, std::vector<std::size_t>, FrontierOrder> frontier(FrontierOrder{&nodes});

  SearchNode root;
  root.structure = initial;
  root.priority = priority(root, config);
  nodes.push_back(std::move(root));
  seen.add(initial);
  frontier.push(0);

  SolutionResult result;
  std::optional<std::size_t> first_goal;
  bool capped = false;

  while (!frontier.empty()) {
    std::size_t index = frontier.top();
    frontier.pop();
    if (passes(config, nodes[index].structure, grammar, d)) {
      nodes[index].goal = true;
      if (!first_goal) first_goal = index;
      if (!config.all_solutions) break;
      result.solutions.push_back(nodes[index].structure);
    }
    if (nodes[index].depth >= config.max_depth) continue;
    nodes[index].expanded = true;
    ++result.nodes_expanded;
    for (const Construction* cxn : order) {
      // Copy: nodes may reallocate while children are appended.
      const TransientStructure parent = nodes[index].structure;
      for (auto& child_ts : apply_construction(*cxn, parent, d, ids, &grammar.network)) {
        if (!seen.add(child_ts)) continue;
        if (nodes.size() >= config.max_nodes) {
          capped = true;
          break;
        }
        SearchNode child;
        child.id = nodes.size();
        child.parent = nodes[index].id;
        child.depth = nodes[index].depth + 1;
        child.units_matched = nodes[index].units_matched + cxn->conditional.size();
        child.applied = cxn->name;
        child.structure = std::move(child_ts);
        child.priority = priority(child, config);
        nodes.push_back(std::move(child));
        frontier.push(nodes.size() - 1);
      }
      if (capped) break;
    }
    if (capped) break;
  }

  if (!first_goal) {
    std::size_t expanded = result.nodes_expanded;
    std::string why = capped ? "node limit of " + std::to_string(config.max_nodes) + " reached"
                             : "frontier exhausted after " + std::to_string(nodes.size()) + " nodes";
    throw SearchExhausted("no solution: " + why, SearchTree{std::move(nodes), std::nullopt}, expanded);
  }
  result.solution = nodes[*first_goal].structure;
  result.applied = applied_path(nodes, *first_goal);
  result.nodes_created = nodes.size();
  result.tree = SearchTree{std::move(nodes), *first_goal};
  return result;
}

SolutionResult comprehend_full(std::string_view utterance, const Grammar& grammar, const SearchConfig& config) {
  PredicateSet form = tokenize(utterance);
  if (form.empty()) throw Error(ErrorCode::EmptyInput, "blank utterance");
  return search(TransientStructure::for_comprehension(form), grammar, Direction::Comprehension, config);
}

SolutionResult produce_full(const PredicateSet& meaning, const Grammar& grammar, const SearchConfig& config) {
  if (meaning.empty()) throw Error(ErrorCode::EmptyInput, "empty meaning");
  return search(TransientStructure::for_production(meaning), grammar, Direction::Production, config);
}

PredicateSet comprehend(std::string_view utterance, const Grammar& grammar, const SearchConfig& config) {
  return comprehend_full(utterance, grammar, config).solution.collect(kMeaning);
}

PredicateSet comprehend(std::string_view utterance, const Grammar& grammar) {
  return comprehend(utterance, grammar, SearchConfig::defaults(Direction::Comprehension));
}

std::string produce(const PredicateSet& meaning, const Grammar& grammar, const SearchConfig& config) {
  return render_utterance(produce_full(meaning, grammar, config).solution.collect(kForm));
}

std::string produce(const PredicateSet& meaning, const Grammar& grammar) {
  return produce(meaning, grammar, SearchConfig::defaults(Direction::Production));
}

std::string search_tree_json(const SearchTree& tree) {
  nlohmann::ordered_json doc;
  doc["solution"] = tree.solution ? nlohmann::ordered_json(*tree.solution) : nlohmann::ordered_json(nullptr);
  auto& arr = doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : tree.nodes) {
    nlohmann::ordered_json j;
    j["id"] = n.id;
    j["parent"] = n.parent ? nlohmann::ordered_json(*n.parent) : nlohmann::ordered_json(nullptr);
    j["cxn"] = n.applied;
    j["depth"] = n.depth;
    j["priority"] = n.priority;
    j["expanded"] = n.expanded;
    j["goal"] = n.goal;
    arr.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string search_tree_dot(const SearchTree& tree) {
  std::ostringstream os;
  os << "digraph search {\n";
  for (const auto& n : tree.nodes) {
    os << "  n" << n.id << " [label=\"" << n.id << " (" << n.priority << ")\"";
    if (n.goal) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (const auto& n : tree.nodes)
    if (n.parent) os << "  n" << *n.parent << " -> n" << n.id << " [label=\"" << n.applied << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace cxg
