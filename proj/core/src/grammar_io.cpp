#include "cxg/grammar_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cxg/error.hpp"

namespace cxg {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ValidationError, where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) invalid(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) invalid(where, "unknown field '" + key + "'");
  }
}

const json& required(const json& j, const std::string& where, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) invalid(where, "missing field '" + key + "'");
  return *it;
}

std::string get_string(const json& j, const std::string& where, const std::string& key) {
  const json& v = required(j, where, key);
  if (!v.is_string()) invalid(where, "field '" + key + "' must be a string");
  return v.get<std::string>();
}

Feature feature_from_json(const json& j, const std::string& where) {
  only_keys(j, where, {"name", "hashed", "value"});
  Feature f;
  f.name = get_string(j, where, "name");
  const std::string fw = where + " feature '" + f.name + "'";
  if (auto it = j.find("hashed"); it != j.end()) {
    if (!it->is_boolean()) invalid(fw, "'hashed' must be a boolean");
    f.hashed = it->get<bool>();
  }
  const json& value = required(j, fw, "value");
  only_keys(value, fw, {"predicates", "categories", "atom"});
  if (value.size() != 1) invalid(fw, "value needs exactly one of predicates, categories, atom");
  if (value.contains("predicates")) {
    const std::string text = get_string(value, fw, "predicates");
    try {
      f.value = parse_predicate_set(text);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, fw + ": " + e.what());
    }
  } else if (value.contains("categories")) {
    const json& cats = value.at("categories");
    if (!cats.is_array()) invalid(fw, "'categories' must be an array");
    CategorySet set;
    for (const auto& c : cats) {
      if (!c.is_string()) invalid(fw, "categories must be strings");
      set.insert(c.get<std::string>());
    }
    f.value = std::move(set);
  } else {
    f.value = Term::parse(get_string(value, fw, "atom"));
  }
  return f;
}

json feature_to_json(const Feature& f) {
  json j;
  j["name"] = f.name;
  j["hashed"] = f.hashed;
  if (const auto* preds = std::get_if<PredicateSet>(&f.value)) {
    j["value"]["predicates"] = to_string(*preds);
  } else if (const auto* cats = std::get_if<CategorySet>(&f.value)) {
    j["value"]["categories"] = json(std::vector<std::string>(cats->begin(), cats->end()));
  } else {
    j["value"]["atom"] = std::get<Term>(f.value).symbol();
  }
  return j;
}

std::vector<Feature> features_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where, "feature list must be an array");
  std::vector<Feature> out;
  for (const auto& f : j) out.push_back(feature_from_json(f, where));
  return out;
}

json features_to_json(const std::vector<Feature>& features) {
  json arr = json::array();
  for (const auto& f : features) arr.push_back(feature_to_json(f));
  return arr;
}

Construction construction_from_json(const json& j) {
  only_keys(j, "construction", {"name", "score", "conditional", "contributing"});
  Construction c;
  c.name = get_string(j, "construction", "name");
  const std::string where = "construction '" + c.name + "'";
  if (auto it = j.find("score"); it != j.end()) {
    if (!it->is_number()) invalid(where, "'score' must be a number");
    c.score = it->get<double>();
  }
  const json& cond = required(j, where, "conditional");
  if (!cond.is_array()) invalid(where, "'conditional' must be an array");
  for (const auto& u : cond) {
    only_keys(u, where, {"unit", "production-lock", "comprehension-lock"});
    ConditionalUnit cu;
    cu.name = Term::parse(get_string(u, where, "unit"));
    if (auto it = u.find("production-lock"); it != u.end()) cu.production_lock = features_from_json(*it, where);
    if (auto it = u.find("comprehension-lock"); it != u.end())
      cu.comprehension_lock = features_from_json(*it, where);
    c.conditional.push_back(std::move(cu));
  }
  if (auto it = j.find("contributing"); it != j.end()) {
    if (!it->is_array()) invalid(where, "'contributing' must be an array");
    for (const auto& u : *it) {
      only_keys(u, where, {"unit", "features"});
      ContributingUnit cu;
      cu.name = Term::parse(get_string(u, where, "unit"));
      cu.features = features_from_json(required(u, where, "features"), where);
      c.contributing.push_back(std::move(cu));
    }
  }
  try {
    validate_construction(c);
  } catch (const Error& e) {
    invalid(where, e.what());
  }
  return c;
}

json construction_to_json(const Construction& c) {
  json j;
  j["name"] = c.name;
  j["score"] = c.score;
  json cond = json::array();
  for (const auto& u : c.conditional) {
    json ju;
    ju["unit"] = u.name.symbol();
    ju["production-lock"] = features_to_json(u.production_lock);
    ju["comprehension-lock"] = features_to_json(u.comprehension_lock);
    cond.push_back(std::move(ju));
  }
  j["conditional"] = std::move(cond);
  json contrib = json::array();
  for (const auto& u : c.contributing) {
    json ju;
    ju["unit"] = u.name.symbol();
    ju["features"] = features_to_json(u.features);
    contrib.push_back(std::move(ju));
  }
  j["contributing"] = std::move(contrib);
  return j;
}

CategorialNetwork network_from_json(const json& j) {
  only_keys(j, "categorial-network", {"nodes", "links"});
  CategorialNetwork net;
  if (auto it = j.find("nodes"); it != j.end()) {
    if (!it->is_array()) invalid("categorial-network", "'nodes' must be an array");
    for (const auto& n : *it) {
      if (!n.is_string()) invalid("categorial-network", "nodes must be strings");
      net.add_node(n.get<std::string>());
    }
  }
  if (auto it = j.find("links"); it != j.end()) {
    if (!it->is_array()) invalid("categorial-network", "'links' must be an array");
    for (const auto& l : *it) {
      only_keys(l, "categorial-network link", {"a", "b", "weight"});
      std::string a = get_string(l, "categorial-network link", "a");
      std::string b = get_string(l, "categorial-network link", "b");
      double w = CategorialNetwork::kDefaultWeight;
      if (auto wt = l.find("weight"); wt != l.end()) {
        if (!wt->is_number()) invalid("categorial-network link", "'weight' must be a number");
        w = wt->get<double>();
      }
      if (w < 0.0 || w > 1.0) invalid("categorial-network link " + a + "--" + b, "weight outside [0, 1]");
      if (net.has_link(a, b)) invalid("categorial-network link " + a + "--" + b, "duplicate link");
      if (!net.add_link(a, b, w)) invalid("categorial-network link " + a, "self-link");
    }
  }
  return net;
}

json network_to_json(const CategorialNetwork& net) {
  json j;
  j["nodes"] = json(std::vector<std::string>(net.nodes().begin(), net.nodes().end()));
  json links = json::array();
  for (const auto& l : net.links()) links.push_back(json{{"a", l.a}, {"b", l.b}, {"weight", l.weight}});
  j["links"] = std::move(links);
  return j;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Grammar grammar_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  only_keys(doc, "grammar", {"format-version", "name", "constructions", "categorial-network"});
  if (auto it = doc.find("format-version"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<int>() != kGrammarFormatVersion)
      invalid("grammar", "unsupported format-version");
  }
  Grammar g;
  if (auto it = doc.find("name"); it != doc.end()) g.name = get_string(doc, "grammar", "name");
  const json& cxns = required(doc, "grammar", "constructions");
  if (!cxns.is_array()) invalid("grammar", "'constructions' must be an array");
  std::set<std::string> names;
  for (const auto& c : cxns) {
    g.constructions.push_back(construction_from_json(c));
    if (!names.insert(g.constructions.back().name).second)
      invalid("construction '" + g.constructions.back().name + "'", "duplicate construction name");
  }
  if (auto it = doc.find("categorial-network"); it != doc.end()) g.network = network_from_json(*it);
  return g;
}

std::string grammar_to_json(const Grammar& grammar) {
  json doc;
  doc["format-version"] = kGrammarFormatVersion;
  doc["name"] = grammar.name;
  json cxns = json::array();
  for (const auto& c : grammar.constructions) cxns.push_back(construction_to_json(c));
  doc["constructions"] = std::move(cxns);
  doc["categorial-network"] = network_to_json(grammar.network);
  return doc.dump(2) + "\n";
}

Scene scene_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_array()) invalid("scene", "expected an array of objects");
  Scene scene;
  std::set<std::string> ids;
  for (const auto& o : doc) {
    only_keys(o, "scene object", {"id", "attributes"});
    SceneObject obj;
    obj.id = get_string(o, "scene object", "id");
    const std::string where = "scene object '" + obj.id + "'";
    if (!ids.insert(obj.id).second) invalid(where, "duplicate id");
    const json& attrs = required(o, where, "attributes");
    if (!attrs.is_object()) invalid(where, "'attributes' must be an object");
    for (const auto& [name, value] : attrs.items()) {
      if (!value.is_string()) invalid(where, "attribute '" + name + "' must be a string");
      obj.attributes[name] = value.get<std::string>();
    }
    scene.objects.push_back(std::move(obj));
  }
  return scene;
}

std::string scene_to_json(const Scene& scene) {
  json doc = json::array();
  for (const auto& o : scene.objects) doc.push_back(json{{"id", o.id}, {"attributes", o.attributes}});
  return doc.dump(2) + "\n";
}

Scene load_scene(const std::string& path) { return scene_from_json(read_text_file(path)); }

void save_scene(const Scene& scene, const std::string& path) { write_text_file(path, scene_to_json(scene)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

Grammar load_grammar(const std::string& path) { return grammar_from_json(read_text_file(path)); }

void save_grammar(const Grammar& grammar, const std::string& path) {
  write_text_file(path, grammar_to_json(grammar));
}

std::vector<std::string> read_corpus(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(first, last - first + 1));
  }
  return lines;
}

}  // namespace cxg
