#include "cxg/categorial_network.hpp"

#include <algorithm>
#include <sstream>

namespace cxg {

void CategorialNetwork::add_node(const std::string& category) { nodes_.insert(category); }

bool CategorialNetwork::add_link(const std::string& a, const std::string& b, double weight) {
  if (a == b) return false;
  weight = std::clamp(weight, 0.0, 1.0);
  nodes_.insert(a);
  nodes_.insert(b);
  auto [it, fresh] = links_.emplace(key(a, b), weight);
  if (!fresh) it->second = std::max(it->second, weight);
  return true;
}

bool CategorialNetwork::set_weight(const std::string& a, const std::string& b, double weight) {
  auto it = links_.find(key(a, b));
  if (it == links_.end()) return false;
  it->second = std::clamp(weight, 0.0, 1.0);
  return true;
}

bool CategorialNetwork::adjust_weight(const std::string& a, const std::string& b, double delta) {
  auto it = links_.find(key(a, b));
  if (it == links_.end()) return false;
  it->second = std::clamp(it->second + delta, 0.0, 1.0);
  return true;
}

bool CategorialNetwork::has_link(const std::string& a, const std::string& b) const {
  return links_.count(key(a, b)) > 0;
}

double CategorialNetwork::weight(const std::string& a, const std::string& b) const {
  auto it = links_.find(key(a, b));
  return it == links_.end() ? 0.0 : it->second;
}

bool CategorialNetwork::compatible(const std::string& filler, const std::string& slot) const {
  return weight(filler, slot) > 0.0;
}

std::set<std::string> CategorialNetwork::neighbours(const std::string& category) const {
  std::set<std::string> out;
  for (const auto& [k, w] : links_) {
    if (k.first == category) out.insert(k.second);
    else if (k.second == category) out.insert(k.first);
  }
  return out;
}

double CategorialNetwork::slot_similarity(const std::string& a, const std::string& b) const {
  auto na = neighbours(a);
  auto nb = neighbours(b);
  if (na.empty() && nb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& n : na) common += nb.count(n);
  std::size_t united = na.size() + nb.size() - common;
  return static_cast<double>(common) / static_cast<double>(united);
}

std::vector<CategorialNetwork::Link> CategorialNetwork::links() const {
  std::vector<Link> out;
  out.reserve(links_.size());
  for (const auto& [k, w] : links_) out.push_back({k.first, k.second, w});
  return out;
}

std::string CategorialNetwork::to_dot() const {
  std::ostringstream os;
  os << "graph categorial_network {\n";
  for (const auto& n : nodes_) os << "  \"" << n << "\";\n";
  for (const auto& [k, w] : links_)
    os << "  \"" << k.first << "\" -- \"" << k.second << "\" [label=\"" << w << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace cxg
