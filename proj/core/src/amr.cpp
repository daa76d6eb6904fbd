#include "cxg/amr.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "cxg/error.hpp"
#include "cxg/matching.hpp"

namespace cxg {

const AmrInstance* AmrGraph::find_instance(const Term& var) const {
  for (const auto& inst : instances)
    if (inst.variable == var) return &inst;
  return nullptr;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_attribute_literal(std::string_view s) {
  if (s.empty()) return false;
  if (s.front() == '"') return true;
  if (s == "-" || s == "+") return true;
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (i == s.size()) return false;
  bool digit = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) digit = true;
    else if (s[i] != '.') return false;
  }
  return digit;
}

class PenmanParser {
 public:
  explicit PenmanParser(std::string_view text) : text_(text) {}

  AmrGraph parse() {
    skip_ws();
    if (peek() != '(') fail("expected '('");
    graph_.root = node(0);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after top-level node");
    // Bare symbols are references; they may point forward to a later
    // declaration, so they are resolved only once everything is declared.
    for (const auto& [index, symbol] : pending_) {
      Term t = Term::constant(symbol);
      if (!graph_.is_instance(t))
        throw Error(ErrorCode::UndeclaredReference, "reference to undeclared variable '" + symbol + "'");
      graph_.relations[index].child = t;
    }
    return graph_;
  }

 private:
  Term node(int depth) {
    expect('(');
    std::string var = symbol();
    Term v = Term::constant(var);
    if (graph_.is_instance(v))
      throw Error(ErrorCode::DuplicateVariable, "variable '" + var + "' declared more than once");
    skip_ws();
    if (peek() != '/') fail("expected '/' after variable '" + var + "'");
    ++pos_;
    std::string concept_name = symbol();
    graph_.instances.push_back({v, concept_name});
    for (;;) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return v;
      }
      if (peek() != ':') fail("expected role or ')'");
      std::string role = lower(symbol());
      if (role.size() < 2) fail("empty role name");
      skip_ws();
      std::size_t index = graph_.relations.size();
      graph_.relations.push_back({role, v, Term()});
      if (peek() == '(') {
        Term child = node(depth + 1);
        graph_.relations[index].child = child;
      } else {
        std::string target = symbol();
        if (is_attribute_literal(target))
          graph_.relations[index].child = Term::constant(target);
        else
          pending_.emplace_back(index, target);
      }
    }
  }

  std::string symbol() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '"') {
      std::size_t start = pos_++;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
      return std::string(text_.substr(start, pos_ - start));
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '/') break;
      if (c == ':' && pos_ != start) break;
      ++pos_;
    }
    if (start == pos_) fail("expected a symbol");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, "penman: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  AmrGraph graph_;
  std::vector<std::pair<std::size_t, std::string>> pending_;
};

std::string display(const Term& t) {
  const auto& s = t.symbol();
  return t.is_variable() ? s.substr(1) : s;
}

// Numbered core roles print upper-cased, as AMR writes them.
std::string display_role(const std::string& role) {
  static const std::regex numbered(":arg[0-9]+(-of)?");
  if (!std::regex_match(role, numbered)) return role;
  std::string out = role;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void print_node(const AmrGraph& g, const Term& v, int depth, std::set<Term>& printed, std::string& out) {
  printed.insert(v);
  out += "(" + display(v) + " / " + g.find_instance(v)->concept_name;
  for (const auto& r : g.relations) {
    if (!(r.parent == v)) continue;
    out += "\n" + std::string(static_cast<std::size_t>(2 * (depth + 1)), ' ') + display_role(r.role) + " ";
    if (g.is_instance(r.child) && !printed.count(r.child))
      print_node(g, r.child, depth + 1, printed, out);
    else
      out += display(r.child);
  }
  out += ")";
}

}  // namespace

AmrGraph parse_penman(std::string_view text) { return PenmanParser(text).parse(); }

std::string print_penman(const AmrGraph& g) {
  std::string out;
  std::set<Term> printed;
  print_node(g, g.root, 0, printed, out);
  return out;
}

PredicateSet to_predicates(const AmrGraph& g) {
  std::vector<Predicate> preds;
  for (const auto& inst : g.instances) preds.emplace_back(inst.concept_name, std::vector<Term>{inst.variable});
  for (const auto& r : g.relations) preds.emplace_back(r.role, std::vector<Term>{r.parent, r.child});
  return PredicateSet(std::move(preds));
}

AmrGraph from_predicates(const PredicateSet& set) {
  std::map<Term, std::string> concepts;
  std::map<Term, std::vector<std::pair<std::string, Term>>> children;
  std::set<Term> child_terms;
  for (const auto& p : set) {
    if (p.name().front() == ':') {
      if (p.arity() != 2)
        throw Error(ErrorCode::MalformedPredicate, "role predicate must be binary: " + to_string(p));
      children[p.arg(0)].emplace_back(p.name(), p.arg(1));
      child_terms.insert(p.arg(1));
    } else {
      if (p.arity() != 1)
        throw Error(ErrorCode::MalformedPredicate, "concept predicate must be unary: " + to_string(p));
      if (!concepts.emplace(p.arg(0), p.name()).second)
        throw Error(ErrorCode::DuplicateVariable, "instance " + to_string(p.arg(0)) + " has two concepts");
    }
  }
  for (const auto& [parent, _] : children)
    if (!concepts.count(parent))
      throw Error(ErrorCode::MalformedPredicate, "role attached to non-instance " + to_string(parent));

  std::vector<Term> roots;
  for (const auto& [var, _] : concepts)
    if (!child_terms.count(var)) roots.push_back(var);
  if (roots.empty()) throw Error(ErrorCode::NoRoot, "no instance is free of incoming roles");
  if (roots.size() > 1) throw Error(ErrorCode::MultipleRoots, "more than one candidate root");

  AmrGraph g;
  g.root = roots.front();
  std::set<Term> declared;
  std::function<void(const Term&)> visit = [&](const Term& v) {
    declared.insert(v);
    g.instances.push_back({v, concepts[v]});
    auto kids = children[v];
    std::sort(kids.begin(), kids.end());
    for (const auto& [role, child] : kids) {
      g.relations.push_back({role, v, child});
      if (concepts.count(child) && !declared.count(child)) visit(child);
    }
  };
  visit(g.root);
  if (declared.size() != concepts.size())
    throw Error(ErrorCode::MalformedPredicate, "instances unreachable from the root");
  return g;
}

bool is_connected(const PredicateSet& set) {
  if (set.size() <= 1) return true;
  std::vector<std::size_t> parent(set.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::map<Term, std::size_t> owner;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (const auto& t : set[i].args()) {
      auto [it, fresh] = owner.emplace(t, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  std::size_t r = find(0);
  for (std::size_t i = 1; i < set.size(); ++i)
    if (find(i) != r) return false;
  return true;
}

AmrGraph with_conventional_names(const AmrGraph& g) {
  std::map<Term, Term> rename;
  std::set<std::string> taken;
  for (const auto& inst : g.instances) {
    std::string letter = "x";
    for (char c : inst.concept_name)
      if (std::isalpha(static_cast<unsigned char>(c))) {
        letter = std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        break;
      }
    std::string name = letter;
    for (int n = 2; taken.count(name); ++n) name = letter + std::to_string(n);
    taken.insert(name);
    rename.emplace(inst.variable, Term::constant(name));
  }
  auto map = [&](const Term& t) {
    auto it = rename.find(t);
    return it == rename.end() ? t : it->second;
  };
  AmrGraph out;
  out.root = map(g.root);
  for (const auto& inst : g.instances) out.instances.push_back({map(inst.variable), inst.concept_name});
  for (const auto& r : g.relations) out.relations.push_back({r.role, map(r.parent), map(r.child)});
  return out;
}

PredicateSet lift_instances(const PredicateSet& set) {
  Bindings lift;
  for (const auto& p : set)
    if (p.arity() == 1 && p.name().front() != ':' && p.arg(0).is_constant())
      lift.bind(p.arg(0), Term::variable(p.arg(0).symbol()));
  // Bindings normally key on variables; here constants are renamed, so
  // substitution is done by hand.
  std::vector<Predicate> out;
  for (const auto& p : set) {
    std::vector<Term> args;
    for (const auto& a : p.args()) {
      const Term* v = lift.find(a);
      args.push_back(v ? *v : a);
    }
    out.emplace_back(p.name(), std::move(args));
  }
  return PredicateSet(std::move(out));
}

bool isomorphic(const AmrGraph& a, const AmrGraph& b) {
  return equal_modulo_renaming(lift_instances(to_predicates(a)), lift_instances(to_predicates(b)));
}

std::vector<std::string> split_amr_blocks(std::string_view document) {
  std::vector<std::string> blocks;
  std::string current;
  std::istringstream in{std::string(document)};
  std::string line;
  auto flush = [&] {
    if (current.find_first_not_of(" \t\r\n") != std::string::npos) blocks.push_back(current);
    current.clear();
  };
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    if (line[first] == '#') continue;
    current += line + "\n";
  }
  flush();
  return blocks;
}

std::vector<AmrGraph> read_amr_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::vector<AmrGraph> graphs;
  for (const auto& block : split_amr_blocks(buf.str())) graphs.push_back(parse_penman(block));
  return graphs;
}

}  // namespace cxg
