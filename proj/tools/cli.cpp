#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include <CLI11.hpp>

#include "cxg/amr.hpp"
#include "cxg/error.hpp"
#include "cxg/form.hpp"
#include "cxg/game.hpp"
#include "cxg/grammar_io.hpp"
#include "cxg/search.hpp"

namespace cxg::cli {

namespace {

constexpr int kOk = 0;
constexpr int kEngineError = 1;
constexpr int kUsageError = 2;

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::DuplicateVariable:
    case ErrorCode::UndeclaredReference:
    case ErrorCode::MalformedPredicate:
    case ErrorCode::EmptyInput:
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
      return kUsageError;
    default:
      return kEngineError;
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

int report(std::ostream& err, std::string_view code, const std::string& message, int status) {
  err << "error: " << code << ": " << one_line(message) << "\n";
  return status;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_tree(const std::string& path, const SearchTree& tree) {
  if (ends_with(path, ".dot"))
    write_text_file(path, search_tree_dot(tree));
  else if (ends_with(path, ".json"))
    write_text_file(path, search_tree_json(tree));
  else
    throw Error(ErrorCode::ParseError, "tree output must end in .json or .dot: " + path);
}

void print_meaning(std::ostream& out, const PredicateSet& meaning) {
  try {
    out << print_penman(with_conventional_names(from_predicates(meaning))) << "\n";
  } catch (const Error&) {
    // Not a rooted graph (e.g. a game program); the predicate set still prints.
  }
  out << to_string(meaning) << "\n";
}

template <typename Run>
SolutionResult with_tree(const std::string& tree_path, Run run) {
  try {
    SolutionResult r = run();
    if (!tree_path.empty()) write_tree(tree_path, r.tree);
    return r;
  } catch (const SearchExhausted& e) {
    if (!tree_path.empty()) write_tree(tree_path, e.tree());
    throw;
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fluid construction grammar engine and language game", "cxg"};
  app.require_subcommand(1);

  std::string grammar_path, utterance, meaning_path, tree_path, config_path, out_path;
  std::optional<std::size_t> max_nodes;

  auto* comprehend_cmd = app.add_subcommand("comprehend", "Map an utterance to its meaning");
  comprehend_cmd->add_option("--grammar", grammar_path, "Grammar file (.json)")->required();
  comprehend_cmd->add_option("--utterance", utterance, "Sentence to comprehend")->required();
  comprehend_cmd->add_option("--tree", tree_path, "Write the search tree (.json or .dot)");
  comprehend_cmd->add_option("--max-nodes", max_nodes, "Node budget");

  auto* produce_cmd = app.add_subcommand("produce", "Map a meaning to an utterance");
  produce_cmd->add_option("--grammar", grammar_path, "Grammar file (.json)")->required();
  produce_cmd->add_option("--meaning", meaning_path, "Meaning file (.amr)")->required();
  produce_cmd->add_option("--tree", tree_path, "Write the search tree (.json or .dot)");
  produce_cmd->add_option("--max-nodes", max_nodes, "Node budget");

  auto* validate_cmd = app.add_subcommand("validate", "Check a grammar file");
  validate_cmd->add_option("--grammar", grammar_path, "Grammar file (.json)")->required();

  auto* game_cmd = app.add_subcommand("game", "Run a tutor-learner experiment");
  game_cmd->add_option("--config", config_path, "Game configuration (.json)")->required();
  game_cmd->add_option("--out", out_path, "Metrics output (.csv)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "UsageError", e.what(), kUsageError);
  }

  try {
    if (comprehend_cmd->parsed()) {
      Grammar g = load_grammar(grammar_path);
      SearchConfig cfg = SearchConfig::defaults(Direction::Comprehension);
      if (max_nodes) cfg.max_nodes = *max_nodes;
      SolutionResult r = with_tree(tree_path, [&] { return comprehend_full(utterance, g, cfg); });
      print_meaning(out, r.solution.collect(kMeaning));
    } else if (produce_cmd->parsed()) {
      Grammar g = load_grammar(grammar_path);
      auto graphs = read_amr_file(meaning_path);
      if (graphs.size() != 1)
        throw Error(ErrorCode::ParseError, meaning_path + ": expected exactly one Penman block, found " +
                                               std::to_string(graphs.size()));
      SearchConfig cfg = SearchConfig::defaults(Direction::Production);
      if (max_nodes) cfg.max_nodes = *max_nodes;
      const PredicateSet meaning = to_predicates(graphs.front());
      SolutionResult r = with_tree(tree_path, [&] { return produce_full(meaning, g, cfg); });
      out << render_utterance(r.solution.collect(kForm)) << "\n";
    } else if (validate_cmd->parsed()) {
      Grammar g = load_grammar(grammar_path);
      out << "ok: " << g.constructions.size() << " constructions, " << g.network.links().size() << " links\n";
    } else if (game_cmd->parsed()) {
      GameConfig cfg = load_game_config(config_path);
      ExperimentResult r = run_experiment(cfg);
      write_text_file(out_path, metrics_csv(r));
      char line[160];
      std::snprintf(line, sizeof line, "interactions %zu, final windowed success %.4f, inventory %zu\n",
                    r.records.size(), r.windowed_success.empty() ? 0.0 : r.windowed_success.back(),
                    r.learner.grammar.constructions.size());
      out << line;
    }
  } catch (const Error& e) {
    return report(err, to_string(e.code()), e.what(), exit_status(e.code()));
  } catch (const std::exception& e) {
    return report(err, "InternalError", e.what(), kEngineError);
  }
  return kOk;
}

}  // namespace cxg::cli
