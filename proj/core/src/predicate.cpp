#include "cxg/predicate.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "cxg/error.hpp"

namespace cxg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::UndeclaredReference: return "UndeclaredReference";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::MalformedPredicate: return "MalformedPredicate";
    case ErrorCode::CyclicOrder: return "CyclicOrder";
    case ErrorCode::UnderspecifiedOrder: return "UnderspecifiedOrder";
    case ErrorCode::DanglingAdjacency: return "DanglingAdjacency";
    case ErrorCode::InvalidConstruction: return "InvalidConstruction";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::NoAlignment: return "NoAlignment";
    case ErrorCode::TutorFailure: return "TutorFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Term

Term Term::parse(std::string_view symbol) {
  if (symbol.empty()) throw Error(ErrorCode::MalformedPredicate, "empty term symbol");
  return symbol.front() == '?' ? Term(Kind::Variable, std::string(symbol))
                               : Term(Kind::Constant, std::string(symbol));
}

Term Term::constant(std::string_view symbol) {
  if (symbol.empty() || symbol.front() == '?')
    throw Error(ErrorCode::MalformedPredicate, "invalid constant symbol '" + std::string(symbol) + "'");
  return Term(Kind::Constant, std::string(symbol));
}

Term Term::variable(std::string_view symbol) {
  if (symbol.empty()) throw Error(ErrorCode::MalformedPredicate, "empty variable symbol");
  std::string s(symbol);
  if (s.front() != '?') s.insert(s.begin(), '?');
  if (s.size() == 1) throw Error(ErrorCode::MalformedPredicate, "empty variable symbol");
  return Term(Kind::Variable, std::move(s));
}

// ---------------------------------------------------------------- Predicate

Predicate::Predicate(std::string_view name, std::vector<Term> args) : args_(std::move(args)) {
  if (name.empty()) throw Error(ErrorCode::MalformedPredicate, "predicate with empty name");
  if (args_.empty())
    throw Error(ErrorCode::MalformedPredicate, "predicate '" + std::string(name) + "' has no arguments");
  name_.reserve(name.size());
  for (char c : name) name_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
}

// ---------------------------------------------------------------- PredicateSet

PredicateSet::PredicateSet(std::initializer_list<Predicate> preds)
    : PredicateSet(std::vector<Predicate>(preds)) {}

PredicateSet::PredicateSet(std::vector<Predicate> preds) : elements_(std::move(preds)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool PredicateSet::insert(Predicate p) {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it != elements_.end() && *it == p) return false;
  elements_.insert(it, std::move(p));
  return true;
}

bool PredicateSet::erase(const Predicate& p) {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || !(*it == p)) return false;
  elements_.erase(it);
  return true;
}

bool PredicateSet::contains(const Predicate& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

void PredicateSet::merge(const PredicateSet& other) {
  std::vector<Predicate> merged;
  merged.reserve(elements_.size() + other.elements_.size());
  std::set_union(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                 std::back_inserter(merged));
  elements_ = std::move(merged);
}

bool PredicateSet::is_subset_of(const PredicateSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(),
                       elements_.end());
}

std::vector<Term> PredicateSet::variables() const {
  std::vector<Term> vars;
  for (const auto& p : elements_)
    for (const auto& a : p.args())
      if (a.is_variable()) vars.push_back(a);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

// ---------------------------------------------------------------- Bindings

Bindings::Bindings(std::initializer_list<std::pair<Term, Term>> entries) {
  for (const auto& [k, v] : entries) bind(k, v);
}

const Term* Bindings::find(const Term& var) const {
  for (const auto& [k, v] : entries_)
    if (k == var) return &v;
  return nullptr;
}

bool Bindings::bind(const Term& var, const Term& value) {
  if (const Term* existing = find(var)) return *existing == value;
  if (var == value) return true;
  entries_.emplace_back(var, value);
  return true;
}

const Term& Bindings::resolve(const Term& t) const {
  if (!t.is_variable()) return t;
  const Term* v = find(t);
  return v ? *v : t;
}

bool operator==(const Bindings& a, const Bindings& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a.entries_) {
    const Term* other = b.find(k);
    if (!other || !(*other == v)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- text syntax

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string symbol() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '"') return quoted();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
          c == '{' || c == '}' || c == '"')
        break;
      ++pos_;
    }
    if (start == pos_) fail("expected a symbol");
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError,
                what + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

 private:
  std::string quoted() {
    std::string out = "\"";
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    out.push_back('"');
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Predicate parse_one(Lexer& lex) {
  std::string name = lex.symbol();
  lex.expect('(');
  std::vector<Term> args;
  if (lex.peek() != ')') {
    do {
      args.push_back(Term::parse(lex.symbol()));
    } while (lex.accept(','));
  }
  lex.expect(')');
  return Predicate(name, std::move(args));
}

}  // namespace

Predicate parse_predicate(std::string_view text) {
  Lexer lex(text);
  Predicate p = parse_one(lex);
  if (!lex.at_end()) lex.fail("trailing input");
  return p;
}

PredicateSet parse_predicate_set(std::string_view text) {
  Lexer lex(text);
  std::vector<Predicate> preds;
  bool braced = lex.accept('{');
  if (!(braced && lex.peek() == '}') && !lex.at_end()) {
    do {
      preds.push_back(parse_one(lex));
    } while (lex.accept(','));
  }
  if (braced) lex.expect('}');
  if (!lex.at_end()) lex.fail("trailing input");
  return PredicateSet(std::move(preds));
}

std::string to_string(const Term& t) {
  if (t.symbol().size() < 2 || t.symbol().front() != '"') return t.symbol();
  std::string out = "\"";
  for (std::size_t i = 1; i + 1 < t.symbol().size(); ++i) {
    char c = t.symbol()[i];
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string to_string(const Predicate& p) {
  std::string out = p.name() + "(";
  for (std::size_t i = 0; i < p.arity(); ++i) {
    if (i) out += ", ";
    out += to_string(p.arg(i));
  }
  return out + ")";
}

std::string to_string(const PredicateSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(p);
  }
  return out + "}";
}

std::string to_string(const Bindings& b) {
  auto entries = b.entries();
  std::sort(entries.begin(), entries.end());
  std::string out = "{";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    out += to_string(entries[i].first) + "->" + to_string(entries[i].second);
  }
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
std::ostream& operator<<(std::ostream& os, const Predicate& p) { return os << to_string(p); }
std::ostream& operator<<(std::ostream& os, const PredicateSet& s) { return os << to_string(s); }
std::ostream& operator<<(std::ostream& os, const Bindings& b) { return os << to_string(b); }

}  // namespace cxg
