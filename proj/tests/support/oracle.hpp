#pragma once

// Independent reference implementations used only by tests: pointwise satisfaction read
// straight off the clause definitions, and brute-force formula enumeration.

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ieml/frame.hpp"
#include "ieml/formula.hpp"
#include "ieml/semantics.hpp"

namespace oracle {

using ieml::DiamondSemantics;
using ieml::Formula;
using ieml::Group;
using ieml::Model;
using ieml::Op;

inline bool sat(const Model& m, std::size_t s, const Formula& f, DiamondSemantics sem = DiamondSemantics::kPrenosil) {
  const auto& leq = m.frame.leq;
  const std::size_t n = m.size();
  switch (f.op()) {
    case Op::kAtom: {
      auto it = m.val.find(f.name());
      return it != m.val.end() && it->second.test(s);
    }
    case Op::kTop: return true;
    case Op::kBot: return false;
    case Op::kOr: return sat(m, s, f.lhs(), sem) || sat(m, s, f.rhs(), sem);
    case Op::kAnd: return sat(m, s, f.lhs(), sem) && sat(m, s, f.rhs(), sem);
    case Op::kImplies:
      for (std::size_t t = 0; t < n; ++t)
        if (leq.contains(s, t) && sat(m, t, f.lhs(), sem) && !sat(m, t, f.rhs(), sem)) return false;
      return true;
    case Op::kBox: {
      const auto& r = m.frame.r(f.label());
      for (std::size_t v = 0; v < n; ++v) {
        if (!leq.contains(s, v)) continue;
        for (std::size_t t = 0; t < n; ++t)
          if (r.contains(v, t) && !sat(m, t, f.body(), sem)) return false;
      }
      return true;
    }
    case Op::kDia: {
      const auto& r = m.frame.r(f.label());
      switch (sem) {
        case DiamondSemantics::kPrenosil:
          for (std::size_t v = 0; v < n; ++v) {
            if (!leq.contains(v, s)) continue;
            for (std::size_t t = 0; t < n; ++t)
              if (r.contains(v, t) && sat(m, t, f.body(), sem)) return true;
          }
          return false;
        case DiamondSemantics::kFischerServi:
          for (std::size_t t = 0; t < n; ++t)
            if (r.contains(s, t) && sat(m, t, f.body(), sem)) return true;
          return false;
        case DiamondSemantics::kWijesekera:
          for (std::size_t t = 0; t < n; ++t) {
            if (!leq.contains(s, t)) continue;
            bool found = false;
            for (std::size_t u = 0; u < n && !found; ++u) found = r.contains(t, u) && sat(m, u, f.body(), sem);
            if (!found) return false;
          }
          return true;
      }
    }
  }
  return false;
}

/// Mono-modal satisfaction: □ over R directly.
inline bool mono_sat(const ieml::MonoModel& m, std::size_t s, const ieml::BoxFormula& f) {
  const auto& leq = m.structure.leq;
  const std::size_t n = m.structure.size();
  switch (f.op()) {
    case Op::kAtom: {
      auto it = m.val.find(f.name());
      return it != m.val.end() && it->second.test(s);
    }
    case Op::kTop: return true;
    case Op::kBot: return false;
    case Op::kOr: return mono_sat(m, s, f.lhs()) || mono_sat(m, s, f.rhs());
    case Op::kAnd: return mono_sat(m, s, f.lhs()) && mono_sat(m, s, f.rhs());
    case Op::kImplies:
      for (std::size_t t = 0; t < n; ++t)
        if (leq.contains(s, t) && mono_sat(m, t, f.lhs()) && !mono_sat(m, t, f.rhs())) return false;
      return true;
    case Op::kBox:
      for (std::size_t t = 0; t < n; ++t)
        if (m.structure.r.contains(s, t) && !mono_sat(m, t, f.body())) return false;
      return true;
    default: return false;
  }
}

/// Every formula of depth at most `depth` over the given atoms and groups.
inline std::vector<Formula> enumerate(const std::vector<std::string>& atom_names, const std::vector<Group>& groups,
                                      std::size_t depth, bool constants = true, bool diamonds = true) {
  std::vector<std::vector<Formula>> by_depth(depth + 1);
  for (const auto& p : atom_names) by_depth[0].push_back(Formula::atom(p));
  if (constants) {
    by_depth[0].push_back(Formula::top());
    by_depth[0].push_back(Formula::bot());
  }
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Formula> below;
    for (std::size_t e = 0; e < d; ++e) below.insert(below.end(), by_depth[e].begin(), by_depth[e].end());
    auto& cur = by_depth[d];
    for (const auto& a : below)
      for (const auto& b : below) {
        if (a.depth() != d - 1 && b.depth() != d - 1) continue;
        cur.push_back(Formula::implies(a, b));
        cur.push_back(Formula::disj(a, b));
        cur.push_back(Formula::conj(a, b));
      }
    for (const auto& a : by_depth[d - 1])
      for (auto g : groups) {
        cur.push_back(Formula::box(g, a));
        if (diamonds) cur.push_back(Formula::dia(g, a));
      }
  }
  std::vector<Formula> out;
  for (auto& v : by_depth) out.insert(out.end(), v.begin(), v.end());
  return out;
}

/// Seeded random formula of depth at most `depth`.
inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atom_names,
                              const std::vector<Group>& groups, std::size_t depth, bool diamonds = true) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 2 : 8);
  int k = pick(rng);
  auto sub = [&] { return random_formula(rng, atom_names, groups, depth == 0 ? 0 : depth - 1, diamonds); };
  auto grp = [&] { return groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)]; };
  switch (k) {
    case 0: return Formula::atom(atom_names[std::uniform_int_distribution<std::size_t>(0, atom_names.size() - 1)(rng)]);
    case 1: return Formula::top();
    case 2: return Formula::bot();
    case 3: return Formula::implies(sub(), sub());
    case 4: return Formula::disj(sub(), sub());
    case 5: return Formula::conj(sub(), sub());
    case 6: return Formula::box(grp(), sub());
    case 7: return diamonds ? Formula::dia(grp(), sub()) : Formula::box(grp(), sub());
    default: return Formula::atom(atom_names[0]);
  }
}

}  // namespace oracle
