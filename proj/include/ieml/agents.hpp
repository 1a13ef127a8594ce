#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ieml {

inline constexpr std::size_t kMaxAgents = 8;

/// Nonempty set of agents, as a bitmask over agent indices.
struct Group {
  std::uint32_t mask = 0;

  std::size_t index() const { return mask - 1; }
  static Group from_index(std::size_t i) { return Group{static_cast<std::uint32_t>(i + 1)}; }
  static Group singleton(std::size_t agent) { return Group{std::uint32_t{1} << agent}; }

  bool contains(std::size_t agent) const { return (mask >> agent) & 1U; }
  bool is_subset_of(Group o) const { return (mask & ~o.mask) == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask)); }

  friend Group operator|(Group a, Group b) { return Group{a.mask | b.mask}; }
  friend bool operator==(Group, Group) = default;
  friend auto operator<=>(Group, Group) = default;
};

struct GroupHash {
  std::size_t operator()(Group g) const { return g.mask; }
};

class AgentSet {
 public:
  AgentSet() : names_{"a"} {}
  explicit AgentSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("agent set must be nonempty");
    if (names_.size() > kMaxAgents) throw std::invalid_argument("at most 8 agents are supported");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw std::invalid_argument("empty agent name");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("duplicate agent name: " + names_[i]);
    }
  }

  /// Agents "a", "b", ... in that order.
  static AgentSet standard(std::size_t k) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(std::string(1, static_cast<char>('a' + i)));
    return AgentSet(std::move(v));
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> index_of(const std::string& n) const {
    auto it = std::find(names_.begin(), names_.end(), n);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  std::size_t group_count() const { return (std::size_t{1} << names_.size()) - 1; }
  Group everyone() const { return Group{static_cast<std::uint32_t>(group_count())}; }

  /// All groups, ascending by mask.
  std::vector<Group> groups() const {
    std::vector<Group> out;
    for (std::size_t i = 0; i < group_count(); ++i) out.push_back(Group::from_index(i));
    return out;
  }

  bool valid(Group g) const { return g.mask != 0 && g.mask <= group_count(); }

  /// Comma-joined member names in canonical order, e.g. "a,b".
  std::string group_key(Group g) const {
    std::string s;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!g.contains(i)) continue;
      if (!s.empty()) s += ",";
      s += names_[i];
    }
    return s;
  }

  /// Inverse of group_key; member order in the key is irrelevant.
  std::optional<Group> parse_group_key(const std::string& key) const {
    std::uint32_t m = 0;
    std::size_t start = 0;
    while (start <= key.size()) {
      auto end = key.find(',', start);
      if (end == std::string::npos) end = key.size();
      auto idx = index_of(key.substr(start, end - start));
      if (!idx) return std::nullopt;
      m |= std::uint32_t{1} << *idx;
      start = end + 1;
    }
    if (m == 0) return std::nullopt;
    return Group{m};
  }

  friend bool operator==(const AgentSet&, const AgentSet&) = default;

 private:
  std::vector<std::string> names_;
};

}  // namespace ieml
