#include "cxg/game.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "cxg/error.hpp"
#include "cxg/form.hpp"
#include "cxg/grammar_io.hpp"
#include "cxg/matching.hpp"

namespace cxg {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, "game config: " + what); }

struct ParsedTemplate {
  std::vector<std::string> prefix;
  std::vector<std::string> suffix;
  PredicateSet program;
  std::string stem;
};

ParsedTemplate parse_template(const QuestionTemplate& t) {
  auto tokens = split_tokens(t.text);
  auto slot = std::find(tokens.begin(), tokens.end(), "?X");
  if (slot == tokens.end() || std::count(tokens.begin(), tokens.end(), "?X") != 1)
    invalid("template '" + t.text + "' needs exactly one ?X token");
  ParsedTemplate p;
  p.prefix.assign(tokens.begin(), slot);
  p.suffix.assign(slot + 1, tokens.end());
  try {
    p.program = parse_predicate_set(t.program);
  } catch (const Error& e) {
    invalid("template '" + t.text + "': " + e.what());
  }
  std::vector<std::string> skeleton = p.prefix;
  skeleton.push_back(kSlotVariable);
  skeleton.insert(skeleton.end(), p.suffix.begin(), p.suffix.end());
  p.stem = name_stem(skeleton);
  return p;
}

const std::vector<std::string>* values_of(const AttributeVocabulary& vocab, const std::string& attribute) {
  for (const auto& [name, values] : vocab)
    if (name == attribute) return &values;
  return nullptr;
}

PredicateSet with_filler(const PredicateSet& program, const std::string& value) {
  Bindings b;
  b.bind(Term::variable(kSlotVariable), Term::constant(value));
  return substitute(program, b);
}

}  // namespace

void GameConfig::validate() const {
  if (window < 1) invalid("window must be at least 1");
  if (interactions < window) invalid("interaction count must be at least the window");
  if (max_program_length < 1) invalid("max program length must be at least 1");
  if (attributes.empty()) invalid("no attributes");
  std::set<std::string> seen_values;
  for (const auto& [name, values] : attributes) {
    if (values.empty()) invalid("attribute '" + name + "' has no values");
    for (const auto& v : values)
      if (!seen_values.insert(v).second) invalid("value '" + v + "' appears twice");
  }
  if (templates.empty()) invalid("no question templates");
  std::set<std::string> stems;
  for (const auto& t : templates) {
    auto p = parse_template(t);
    if (!values_of(attributes, t.slot_attribute))
      invalid("template '" + t.text + "' uses unknown attribute '" + t.slot_attribute + "'");
    if (!stems.insert(p.stem).second) invalid("two templates share the skeleton '" + p.stem + "'");
  }
  search.validate();
  if (!(policy.floor <= policy.initial && policy.initial <= policy.ceiling)) invalid("policy initial outside bounds");
}

// ---------------------------------------------------------------- config file

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      invalid("unknown field '" + key + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      into = it->get<T>();
    } catch (const json::exception&) {
      invalid(std::string("field '") + key + "' has the wrong type");
    }
  }
}

}  // namespace

GameConfig game_config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("game config: ") + e.what());
  }
  only_keys(doc, "game config",
            {"seed", "interactions", "scene-size", "window", "max-program-length", "attributes", "templates",
             "policy", "search"});
  GameConfig c;
  read(doc, "seed", c.seed);
  read(doc, "interactions", c.interactions);
  read(doc, "scene-size", c.scene_size);
  read(doc, "window", c.window);
  read(doc, "max-program-length", c.max_program_length);
  if (auto it = doc.find("attributes"); it != doc.end()) {
    if (!it->is_array()) invalid("'attributes' must be an array");
    for (const auto& a : *it) {
      only_keys(a, "attribute", {"name", "values"});
      std::string name;
      std::vector<std::string> values;
      read(a, "name", name);
      read(a, "values", values);
      c.attributes.emplace_back(name, values);
    }
  }
  if (auto it = doc.find("templates"); it != doc.end()) {
    if (!it->is_array()) invalid("'templates' must be an array");
    for (const auto& t : *it) {
      only_keys(t, "template", {"text", "program", "slot"});
      QuestionTemplate q;
      read(t, "text", q.text);
      read(t, "program", q.program);
      read(t, "slot", q.slot_attribute);
      c.templates.push_back(std::move(q));
    }
  }
  if (auto it = doc.find("policy"); it != doc.end()) {
    only_keys(*it, "policy", {"initial", "reward", "punish", "inhibit", "floor", "ceiling"});
    read(*it, "initial", c.policy.initial);
    read(*it, "reward", c.policy.reward);
    read(*it, "punish", c.policy.punish);
    read(*it, "inhibit", c.policy.inhibit);
    read(*it, "floor", c.policy.floor);
    read(*it, "ceiling", c.policy.ceiling);
  }
  if (auto it = doc.find("search"); it != doc.end()) {
    only_keys(*it, "search", {"goals", "w-depth", "w-units", "max-nodes", "max-depth"});
    if (auto g = it->find("goals"); g != it->end()) {
      std::vector<std::string> names;
      read(*it, "goals", names);
      c.search.goals.clear();
      for (const auto& n : names) c.search.goals.insert(goal_test_from_string(n));
    }
    read(*it, "w-depth", c.search.w_depth);
    read(*it, "w-units", c.search.w_units);
    read(*it, "max-nodes", c.search.max_nodes);
    read(*it, "max-depth", c.search.max_depth);
  }
  c.validate();
  return c;
}

GameConfig load_game_config(const std::string& path) { return game_config_from_json(read_text_file(path)); }

// ---------------------------------------------------------------- agents

Agent make_tutor(const GameConfig& config) {
  Agent tutor{"tutor", {}, {}};
  tutor.grammar.name = "tutor";
  for (const auto& [attr, values] : config.attributes)
    for (const auto& v : values)
      tutor.grammar.constructions.push_back(make_lexical_construction(v + "-cxn", {v}, Term::constant(v), v));
  for (const auto& t : config.templates) {
    auto p = parse_template(t);
    const std::string slot_cat = p.stem + "(" + kSlotVariable + ")";
    tutor.grammar.constructions.push_back(make_item_construction(
        p.stem + "-cxn", p.prefix, p.suffix, slot_cat, p.program, Term::variable(kSlotVariable)));
    for (const auto& v : *values_of(config.attributes, t.slot_attribute)) tutor.grammar.network.add_link(v, slot_cat);
  }
  for (auto& c : tutor.grammar.constructions) c.score = config.policy.initial;
  return tutor;
}

Agent make_learner() { return Agent{"learner", {"learner", {}, {}}, {}}; }

Scene generate_scene(std::mt19937_64& rng, const GameConfig& config) {
  Scene scene;
  for (std::size_t i = 0; i < config.scene_size; ++i) {
    SceneObject obj;
    obj.id = "obj-" + std::to_string(i + 1);
    for (const auto& [attr, values] : config.attributes) {
      std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
      obj.attributes[attr] = values[pick(rng)];
    }
    scene.objects.push_back(std::move(obj));
  }
  return scene;
}

// ---------------------------------------------------------------- interaction

namespace {

struct Question {
  std::size_t template_index;
  std::string filler;
  PredicateSet program;  // filler substituted
  std::string expected;
};

Question pick_question(const GameConfig& config, const std::vector<ParsedTemplate>& parsed, const Scene& scene,
                       std::mt19937_64& rng) {
  std::vector<std::pair<std::size_t, std::vector<std::pair<std::string, std::string>>>> options;
  for (std::size_t i = 0; i < config.templates.size(); ++i) {
    std::vector<std::pair<std::string, std::string>> fillers;
    for (const auto& v : *values_of(config.attributes, config.templates[i].slot_attribute)) {
      try {
        fillers.emplace_back(v, evaluate_program(with_filler(parsed[i].program, v), scene));
      } catch (const Error&) {
      }
    }
    if (!fillers.empty()) options.emplace_back(i, std::move(fillers));
  }
  if (options.empty()) throw Error(ErrorCode::TutorFailure, "no template is evaluable on this scene");
  std::uniform_int_distribution<std::size_t> pick_template(0, options.size() - 1);
  const auto& [index, fillers] = options[pick_template(rng)];
  std::uniform_int_distribution<std::size_t> pick_filler(0, fillers.size() - 1);
  const auto& [filler, answer] = fillers[pick_filler(rng)];
  return Question{index, filler, with_filler(parsed[index].program, filler), answer};
}

std::set<std::string> history_set(const TransientStructure& ts) { return {ts.history.begin(), ts.history.end()}; }

}  // namespace

InteractionRecord run_interaction(Agent& tutor, Agent& learner, const Scene& scene, std::mt19937_64& rng,
                                  const GameConfig& config, std::size_t index) {
  std::vector<ParsedTemplate> parsed;
  for (const auto& t : config.templates) parsed.push_back(parse_template(t));
  Question q = pick_question(config, parsed, scene, rng);

  // The tutor speaks with the chosen template's construction and its lexicon.
  const std::string item_name = parsed[q.template_index].stem + "-cxn";
  Grammar view;
  view.network = tutor.grammar.network;
  for (const auto& c : tutor.grammar.constructions)
    if (c.name == item_name || !slot_category(c)) view.constructions.push_back(c);
  PredicateSet meaning = parsed[q.template_index].program;
  meaning.insert(Predicate("bind", {Term::variable(kSlotVariable), Term::constant(q.filler)}));
  SolutionResult spoken;
  try {
    spoken = produce_full(meaning, view, SearchConfig::defaults(Direction::Production));
  } catch (const Error& e) {
    throw Error(ErrorCode::TutorFailure, "tutor cannot produce '" + config.templates[q.template_index].text +
                                             "' with " + q.filler + ": " + e.what());
  }
  InteractionRecord record;
  record.index = index;
  record.expected = q.expected;
  record.utterance = render_utterance(spoken.solution.collect(kForm));

  // Learner comprehends and answers.
  std::set<std::string> used;
  TransientStructure heard_solution;
  try {
    SolutionResult heard = comprehend_full(record.utterance, learner.grammar, config.search);
    heard_solution = heard.solution;
    used = history_set(heard.solution);
    record.answer = evaluate_program(resolve_binds(heard.solution.collect(kMeaning)), scene);
  } catch (const Error&) {
  }
  record.success = record.answer && *record.answer == q.expected;

  std::set<std::string> rivals;
  if (record.success)
    rivals = competitors(learner.grammar.constructions, heard_solution,
                         TransientStructure::for_comprehension(tokenize(record.utterance)), Direction::Comprehension);
  update_entrenchment(learner.grammar, used, record.success, rivals, config.policy);

  EntrenchmentPolicy tutor_policy = config.policy;
  tutor_policy.evict = false;
  tutor_policy.adjust_links = false;
  const std::set<std::string> tutor_used = history_set(spoken.solution);
  const std::set<std::string> tutor_rivals =
      record.success ? competitors(view.constructions, spoken.solution, TransientStructure::for_production(meaning),
                                   Direction::Production)
                     : std::set<std::string>{};
  update_entrenchment(tutor.grammar, tutor_used, record.success, tutor_rivals, tutor_policy);

  if (!record.success) {
    // The tutor reveals the answer; the learner reconstructs the intention.
    auto hypotheses = consistent_hypotheses(
        compose_programs(scene, q.expected, config.attributes, config.max_program_length), record.utterance,
        learner.memory);
    std::erase_if(learner.memory, [&](const Observation& o) { return o.utterance == record.utterance; });
    for (auto& hypothesis : hypotheses) {
      Observation obs{record.utterance, std::move(hypothesis), q.expected};
      LearnResult learned = pattern_find(obs, learner.memory, learner.grammar.constructions);
      for (auto& c : learned.constructions) {
        c.score = config.policy.initial;
        learner.grammar.constructions.push_back(std::move(c));
        ++record.learned;
      }
      for (const auto& [filler, slot] : learned.links)
        learner.grammar.network.add_link(filler, slot, CategorialNetwork::kDefaultWeight);
      learner.memory.push_back(std::move(obs));
    }
  }
  record.inventory_size = learner.grammar.constructions.size();
  return record;
}

std::vector<double> windowed_success(const std::vector<InteractionRecord>& records, std::size_t window) {
  std::vector<double> out;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    hits += records[i].success;
    if (i >= window) hits -= records[i - window].success;
    out.push_back(static_cast<double>(hits) / static_cast<double>(std::min(i + 1, window)));
  }
  return out;
}

ExperimentResult run_experiment(const GameConfig& config) {
  config.validate();
  ExperimentResult result{{}, {}, make_tutor(config), make_learner()};
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = 1; i <= config.interactions; ++i) {
    Scene scene = generate_scene(rng, config);
    result.records.push_back(run_interaction(result.tutor, result.learner, scene, rng, config, i));
  }
  result.windowed_success = windowed_success(result.records, config.window);
  return result;
}

std::string metrics_csv(const ExperimentResult& result) {
  std::string out = "interaction,success,windowed_success,inventory_size,learned_count\n";
  char buf[32];
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    std::snprintf(buf, sizeof buf, "%.4f", result.windowed_success[i]);
    out += std::to_string(r.index) + "," + (r.success ? "1" : "0") + "," + buf + "," +
           std::to_string(r.inventory_size) + "," + std::to_string(r.learned) + "\n";
  }
  return out;
}

}  // namespace cxg
