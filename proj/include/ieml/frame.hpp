#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieml/agents.hpp"
#include "ieml/bitset.hpp"
#include "ieml/relation.hpp"

namespace ieml {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (W, ≤, R) with W = {0..n-1}; rel is indexed by Group::index().
struct Frame {
  AgentSet agents;
  Rel leq;
  std::vector<Rel> rel;
  std::vector<std::string> names;

  Frame() = default;
  Frame(AgentSet ag, Rel l, std::vector<Rel> r, std::vector<std::string> nm = {})
      : agents(std::move(ag)), leq(std::move(l)), rel(std::move(r)), names(std::move(nm)) {
    if (names.empty())
      for (std::size_t i = 0; i < leq.size(); ++i) names.push_back("w" + std::to_string(i));
  }

  std::size_t size() const { return leq.size(); }
  const Rel& r(Group g) const { return rel.at(g.index()); }
  Rel& r(Group g) { return rel.at(g.index()); }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.agents == b.agents && a.leq == b.leq && a.rel == b.rel;
  }
};

using Valuation = std::map<std::string, StateSet>;

struct Model {
  Frame frame;
  Valuation val;

  std::size_t size() const { return frame.size(); }
};

/// (W, ≤, R) with a single accessibility relation.
struct MonoStructure {
  Rel leq;
  Rel r;
  std::vector<std::string> names;

  std::size_t size() const { return leq.size(); }
};

struct MonoModel {
  MonoStructure structure;
  Valuation val;
};

struct FrameReport {
  bool ok = true;
  std::vector<std::string> violations;
};

inline FrameReport check_frame(const Frame& f) {
  FrameReport rep;
  auto bad = [&rep](std::string v) {
    rep.ok = false;
    rep.violations.push_back(std::move(v));
  };
  if (f.size() == 0) bad("empty state set");
  if (!f.leq.is_reflexive()) bad("not reflexive");
  if (!f.leq.is_transitive()) bad("not transitive");
  if (f.rel.size() != f.agents.group_count()) bad("relation missing for some group");
  for (const auto& r : f.rel)
    if (r.size() != f.size()) bad("relation carrier mismatch");
  if (!f.names.empty() && f.names.size() != f.size()) bad("state name count mismatch");
  return rep;
}

inline bool is_preorder(const Rel& r) { return r.is_reflexive() && r.is_transitive(); }

/// s ∈ U and s ≤ t imply t ∈ U.
inline bool is_up_closed(const Rel& leq, const StateSet& u) {
  bool ok = true;
  u.for_each([&](std::size_t s) { ok = ok && detail::words_subset(leq.row_words(s), u.words()); });
  return ok;
}

inline void check_model(const Model& m) {
  auto rep = check_frame(m.frame);
  if (!rep.ok) throw PreconditionError("bad frame: " + rep.violations.front());
  for (const auto& [p, u] : m.val) {
    if (u.size() != m.size()) throw PreconditionError("valuation of '" + p + "' has wrong size");
    if (!is_up_closed(m.frame.leq, u)) throw PreconditionError("valuation of '" + p + "' is not closed");
  }
}

/// All ≤-closed subsets in ascending bitmask order.
inline std::vector<StateSet> up_sets(const Rel& leq, std::size_t cap = std::size_t{1} << 20) {
  const std::size_t n = leq.size();
  std::vector<StateSet> out;
  // Decide states from highest to lowest so that results come out in numeric order;
  // including s forces its ≤-successors, excluding s forces its ≤-predecessors out.
  Rel geq = leq.converse();
  StateSet in(n), out_forced(n);
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (i == 0) {
      if (out.size() >= cap) throw BudgetExceeded("up-set count exceeds cap");
      out.push_back(in);
      return;
    }
    std::size_t s = i - 1;
    if (in.test(s)) {
      self(self, i - 1);
      return;
    }
    if (out_forced.test(s)) {
      self(self, i - 1);
      return;
    }
    // exclude first (smaller bitmask)
    {
      StateSet saved = out_forced;
      out_forced |= geq.row(s);
      if (!out_forced.intersects(in)) self(self, i - 1);
      out_forced = saved;
    }
    {
      StateSet saved = in;
      in |= leq.row(s);
      if (!in.intersects(out_forced)) self(self, i - 1);
      in = saved;
    }
  };
  rec(rec, n);
  return out;
}

inline std::vector<StateSet> up_sets(const Frame& f, std::size_t cap = std::size_t{1} << 20) {
  return up_sets(f.leq, cap);
}

}  // namespace ieml
