#include "cxg/form.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "cxg/error.hpp"

namespace cxg {

namespace {

bool is_split_punct(char c) { return c == ',' || c == '.' || c == '?' || c == '!'; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string quote(std::string_view token) { return "\"" + std::string(token) + "\""; }

std::string unquote(const std::string& sym) {
  if (sym.size() >= 2 && sym.front() == '"' && sym.back() == '"') return sym.substr(1, sym.size() - 2);
  return sym;
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view utterance) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < utterance.size()) {
    while (i < utterance.size() && std::isspace(static_cast<unsigned char>(utterance[i]))) ++i;
    std::size_t start = i;
    while (i < utterance.size() && !std::isspace(static_cast<unsigned char>(utterance[i]))) ++i;
    if (start == i) break;
    std::string_view word = utterance.substr(start, i - start);
    std::vector<std::string> trailing;
    while (word.size() > 1 && is_split_punct(word.back())) {
      trailing.emplace_back(1, word.back());
      word.remove_suffix(1);
    }
    tokens.emplace_back(word);
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

std::string token_base(std::string_view token) {
  std::string base;
  for (char c : token)
    if (std::isalnum(static_cast<unsigned char>(c)))
      base.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return base;
}

PredicateSet tokenize(std::string_view utterance) {
  auto tokens = split_tokens(utterance);
  std::map<std::string, int> counters;
  std::vector<Term> ids;
  std::vector<Predicate> preds;
  for (const auto& tok : tokens) {
    int n = ++counters[lower(tok)];
    Term id = Term::constant(token_base(tok) + "-" + std::to_string(n));
    preds.emplace_back("string", std::vector<Term>{id, Term::constant(quote(tok))});
    ids.push_back(id);
  }
  for (std::size_t i = 0; i + 1 < ids.size(); ++i)
    preds.emplace_back("adjacent", std::vector<Term>{ids[i], ids[i + 1]});
  return PredicateSet(std::move(preds));
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    bool glue = t.size() == 1 && is_split_punct(t[0]);
    if (!out.empty() && !glue) out.push_back(' ');
    out += t;
  }
  return out;
}

namespace {

// Enumerates walks over token ids that visit each id as often as it has
// string predicates and use every adjacency exactly once. Ids may repeat
// (punctuation shares the empty base), so this is a trail search rather than
// a simple path search.
class OrderSearch {
 public:
  OrderSearch(std::map<Term, int> visits, std::vector<std::pair<Term, Term>> edges, std::size_t length)
      : remaining_(std::move(visits)), edges_(std::move(edges)), used_(edges_.size(), false),
        length_(length) {}

  std::vector<std::vector<Term>> run() {
    for (auto& [id, count] : remaining_) {
      if (count == 0) continue;
      walk_.push_back(id);
      --count;
      extend();
      ++count;
      walk_.pop_back();
      if (found_.size() > 1) break;
    }
    return found_;
  }

 private:
  void extend() {
    if (found_.size() > 1) return;
    if (walk_.size() == length_) {
      if (std::all_of(used_.begin(), used_.end(), [](bool u) { return u; })) found_.push_back(walk_);
      return;
    }
    const Term here = walk_.back();
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (used_[e] || !(edges_[e].first == here)) continue;
      auto it = remaining_.find(edges_[e].second);
      if (it->second == 0) continue;
      used_[e] = true;
      --it->second;
      walk_.push_back(edges_[e].second);
      extend();
      walk_.pop_back();
      ++it->second;
      used_[e] = false;
    }
  }

  std::map<Term, int> remaining_;
  std::vector<std::pair<Term, Term>> edges_;
  std::vector<bool> used_;
  std::size_t length_;
  std::vector<Term> walk_;
  std::vector<std::vector<Term>> found_;
};

bool has_cycle(const std::map<Term, int>& nodes, const std::vector<std::pair<Term, Term>>& edges) {
  std::map<Term, int> state;  // 0 unvisited, 1 on stack, 2 done
  std::map<Term, std::vector<Term>> out;
  for (const auto& [a, b] : edges) out[a].push_back(b);
  std::function<bool(const Term&)> dfs = [&](const Term& n) {
    state[n] = 1;
    for (const auto& m : out[n]) {
      if (state[m] == 1) return true;
      if (state[m] == 0 && dfs(m)) return true;
    }
    state[n] = 2;
    return false;
  };
  for (const auto& [n, _] : nodes)
    if (state[n] == 0 && dfs(n)) return true;
  return false;
}

}  // namespace

std::string render_utterance(const PredicateSet& form) {
  std::map<Term, std::vector<std::string>> texts;
  std::vector<std::pair<Term, Term>> edges;
  std::size_t tokens = 0;
  for (const auto& p : form) {
    if (p.name() == "string" && p.arity() == 2) {
      texts[p.arg(0)].push_back(unquote(p.arg(1).symbol()));
      ++tokens;
    } else if (p.name() == "adjacent" && p.arity() == 2) {
      edges.emplace_back(p.arg(0), p.arg(1));
    } else {
      throw Error(ErrorCode::MalformedPredicate, "unexpected form predicate " + to_string(p));
    }
  }
  if (tokens == 0) {
    if (!edges.empty()) throw Error(ErrorCode::DanglingAdjacency, "adjacency without any tokens");
    return "";
  }
  for (const auto& [a, b] : edges)
    for (const Term& id : {a, b})
      if (!texts.count(id))
        throw Error(ErrorCode::DanglingAdjacency, "adjacent refers to unknown token " + to_string(id));

  std::map<Term, int> visits;
  for (const auto& [id, ts] : texts) visits[id] = static_cast<int>(ts.size());

  std::vector<std::vector<Term>> orders;
  if (edges.size() + 1 == tokens) orders = OrderSearch(visits, edges, tokens).run();
  if (orders.empty()) {
    if (has_cycle(visits, edges)) throw Error(ErrorCode::CyclicOrder, "adjacency constraints form a cycle");
    throw Error(ErrorCode::UnderspecifiedOrder, "adjacency constraints do not fix a single word order");
  }
  if (orders.size() > 1)
    throw Error(ErrorCode::UnderspecifiedOrder, "adjacency constraints admit more than one word order");

  // Tokens sharing an id are indistinguishable to the adjacency constraints;
  // they are placed in predicate order.
  std::map<Term, std::size_t> next;
  std::vector<std::string> words;
  for (const auto& id : orders.front()) words.push_back(texts[id][next[id]++]);
  return detokenize(words);
}

}  // namespace cxg
