#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cxg/learning.hpp"
#include "cxg/search.hpp"

namespace cxg {

/// A tutor question with one slot "?X" in `text`; `program` mentions the slot
/// as ?x and the slot ranges over the values of `slot_attribute`.
struct QuestionTemplate {
  std::string text;
  std::string program;
  std::string slot_attribute;

  friend bool operator==(const QuestionTemplate&, const QuestionTemplate&) = default;
};

struct GameConfig {
  std::uint64_t seed = 42;
  std::size_t interactions = 2000;
  std::size_t scene_size = 6;
  std::size_t window = 100;
  std::size_t max_program_length = 4;
  AttributeVocabulary attributes;
  std::vector<QuestionTemplate> templates;
  EntrenchmentPolicy policy;
  SearchConfig search = SearchConfig::defaults(Direction::Comprehension);

  /// Throws ValidationError.
  void validate() const;
};

GameConfig game_config_from_json(std::string_view text);
GameConfig load_game_config(const std::string& path);

struct Agent {
  std::string id;
  Grammar grammar;
  std::vector<Observation> memory;
};

/// Tutor grammar: one item-based construction per template, one lexical
/// construction per attribute value, links from values to the slots they fill.
Agent make_tutor(const GameConfig& config);
Agent make_learner();

Scene generate_scene(std::mt19937_64& rng, const GameConfig& config);

struct InteractionRecord {
  std::size_t index = 0;
  bool success = false;
  std::size_t inventory_size = 0;
  std::size_t learned = 0;
  std::string utterance;
  std::string expected;
  std::optional<std::string> answer;
};

/// One question-answer round. Throws TutorFailure if the tutor cannot ask.
InteractionRecord run_interaction(Agent& tutor, Agent& learner, const Scene& scene, std::mt19937_64& rng,
                                  const GameConfig& config, std::size_t index);

struct ExperimentResult {
  std::vector<InteractionRecord> records;
  std::vector<double> windowed_success;
  Agent tutor;
  Agent learner;
};

ExperimentResult run_experiment(const GameConfig& config);

/// Mean success over the trailing `window` records (fewer at the start).
std::vector<double> windowed_success(const std::vector<InteractionRecord>& records, std::size_t window);

/// interaction,success,windowed_success,inventory_size,learned_count
std::string metrics_csv(const ExperimentResult& result);

}  // namespace cxg
