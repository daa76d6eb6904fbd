#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cxg {

/// Undirected weighted graph between filler categories and construction slot
/// categories. Compatibility is decided by direct links only.
class CategorialNetwork {
 public:
  struct Link {
    std::string a;
    std::string b;
    double weight;
  };

  static constexpr double kDefaultWeight = 0.5;

  void add_node(const std::string& category);
  /// Registers both endpoints; an existing link keeps the larger weight.
  /// Self-links are rejected (returns false, network unchanged).
  bool add_link(const std::string& a, const std::string& b, double weight = kDefaultWeight);
  /// Clamped to [0, 1]. Returns false if no such link.
  bool set_weight(const std::string& a, const std::string& b, double weight);
  /// Adds delta to an existing link's weight, clamped to [0, 1]. Zero-weight
  /// links are kept.
  bool adjust_weight(const std::string& a, const std::string& b, double delta);

  bool has_link(const std::string& a, const std::string& b) const;
  double weight(const std::string& a, const std::string& b) const;
  bool compatible(const std::string& filler, const std::string& slot) const;
  /// Jaccard overlap of the two categories' neighbour sets (0 if both empty).
  double slot_similarity(const std::string& a, const std::string& b) const;

  std::set<std::string> neighbours(const std::string& category) const;
  const std::set<std::string>& nodes() const noexcept { return nodes_; }
  /// Links ordered by (a, b) with a < b.
  std::vector<Link> links() const;
  std::size_t link_count() const noexcept { return links_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  std::string to_dot() const;

  friend bool operator==(const CategorialNetwork&, const CategorialNetwork&) = default;

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  std::set<std::string> nodes_;
  std::map<std::pair<std::string, std::string>, double> links_;
};

}  // namespace cxg
