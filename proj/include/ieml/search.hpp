#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ieml/frame.hpp"
#include "ieml/frame_classes.hpp"
#include "ieml/semantics.hpp"

namespace ieml {

struct SizeBudget {
  std::size_t max_states = 3;
  std::size_t max_agents = 1;
  std::size_t max_formula_depth = 2;
  std::size_t max_candidates = 100000;
  std::uint64_t seed = 1;
  std::size_t valuation_cap = kDefaultValuationCap;
};

namespace detail {
inline std::vector<std::uint64_t> compute_preorders(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) off.emplace_back(i, j);
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << off.size()); ++m) {
    Rel r = Rel::identity(n);
    for (std::size_t b = 0; b < off.size(); ++b)
      if (m >> b & 1) r.add(off[b].first, off[b].second);
    seen.insert(reflexive_transitive_closure(r).to_mask());
  }
  return {seen.begin(), seen.end()};
}
}  // namespace detail

/// Every preorder on n points as a bitmask (bit i·n+j for i ≤ j), ascending.
inline const std::vector<std::uint64_t>& all_preorders(std::size_t n) {
  if (n == 0 || n > 5) throw BudgetExceeded("preorder enumeration supports 1..5 states");
  static std::mutex mu;
  static std::map<std::size_t, std::vector<std::uint64_t>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(n);
  if (it == memo.end()) it = memo.emplace(n, detail::compute_preorders(n)).first;
  return it->second;
}

namespace detail {

inline std::uint64_t bit(std::size_t n, std::size_t i, std::size_t j) { return std::uint64_t{1} << (i * n + j); }

/// Relations a single group may take for class c over a fixed ≤: a forced part plus any
/// union of units. Constraints are necessary conditions only; has_class filters the rest.
struct RelSpace {
  std::uint64_t forced = 0;
  std::vector<std::uint64_t> units;

  double size() const { return static_cast<double>(std::uint64_t{1} << units.size()); }
  std::uint64_t mask(std::uint64_t x) const {
    std::uint64_t m = forced;
    for (std::size_t u = 0; u < units.size(); ++u)
      if (x >> u & 1) m |= units[u];
    return m;
  }
  std::uint64_t random(std::mt19937_64& rng) const {
    return mask(units.empty() ? 0 : rng() & ((std::uint64_t{1} << units.size()) - 1));
  }
  /// Every member, ascending.
  std::vector<std::uint64_t> members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << units.size()); ++x) out.push_back(mask(x));
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline RelSpace relation_space(FrameClass c, std::size_t n, std::uint64_t leq) {
  RelSpace sp;
  const bool refl = c == FrameClass::kReflexive || c == FrameClass::kRs || c == FrameClass::kPartition;
  const bool sym = c == FrameClass::kSymmetric || c == FrameClass::kRs || c == FrameClass::kPartition;
  const bool dox = c == FrameClass::kDoxastic || c == FrameClass::kEpistemic;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t b = bit(n, i, j);
      if (dox && !(leq & b)) continue;
      if (i == j && refl) {
        sp.forced |= b;
        continue;
      }
      if (sym && i > j) continue;
      sp.units.push_back(sym && i < j ? (b | bit(n, j, i)) : b);
    }
  return sp;
}

inline double saturating_pow(double base, std::size_t e) {
  double r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

struct FrameKey {
  std::vector<std::uint64_t> masks;
  friend auto operator<=>(const FrameKey&, const FrameKey&) = default;
};

inline Frame frame_from_masks(const AgentSet& ag, std::size_t n, std::uint64_t leq, const std::vector<std::uint64_t>& rel) {
  std::vector<Rel> rs;
  for (auto m : rel) rs.push_back(Rel::from_mask(n, m));
  return Frame(ag, Rel::from_mask(n, leq), std::move(rs));
}

inline Rel transitive_closure(const Rel& r) { return compose(r, reflexive_transitive_closure(r)); }

/// A random candidate shaped towards class c.
inline Frame biased_candidate(std::mt19937_64& rng, FrameClass c, const AgentSet& ag, std::size_t n,
                              const std::vector<std::uint64_t>& preorders) {
  std::uint64_t leq = preorders[rng() % preorders.size()];
  FrameClass space_class = c;
  if (c == FrameClass::kUd || c == FrameClass::kUdReflexive || c == FrameClass::kUdSymmetric) space_class = FrameClass::kRs;
  auto space = relation_space(space_class, n, leq);
  std::vector<Rel> rel;
  for (std::size_t g = 0; g < ag.group_count(); ++g) rel.push_back(Rel::from_mask(n, space.random(rng)));
  Rel l = Rel::from_mask(n, leq);
  Rel geq = l.converse();
  for (auto& r : rel) {
    switch (c) {
      case FrameClass::kTransitive: r = transitive_closure(r); break;
      case FrameClass::kPartition: r = reflexive_transitive_closure(r); break;
      case FrameClass::kForwardConfluent:
        if (rng() % 4 != 0) r = compose(geq, r);
        break;
      case FrameClass::kEpistemic:
        for (std::size_t s = 0; s < n; ++s)
          if (compose(l, r).row(s).none()) r.add(s, s);
        break;
      case FrameClass::kUd:
      case FrameClass::kUdReflexive:
      case FrameClass::kUdSymmetric:
        if (rng() % 2 == 0) {
          auto ps = r.pairs();
          if (!ps.empty()) {
            auto [s, t] = ps[rng() % ps.size()];
            r.remove(s, t);
          }
        }
        break;
      default: break;
    }
  }
  if (c == FrameClass::kPrestandard || c == FrameClass::kStandard) {
    auto groups = ag.groups();
    std::stable_sort(groups.begin(), groups.end(), [](Group a, Group b) { return a.size() < b.size(); });
    for (auto g : groups) {
      if (g.size() < 2) continue;
      Rel meet = Rel::full(n);
      for (std::uint32_t m = 1; m < g.mask; ++m)
        if ((m & ~g.mask) == 0) meet &= rel[Group{m}.index()];
      rel[g.index()] = c == FrameClass::kStandard ? meet : (rel[g.index()] & meet);
    }
  }
  return Frame(ag, l, std::move(rel));
}

}  // namespace detail

/// Number of candidates the exhaustive enumeration for (n, c) would visit.
inline double candidate_count(std::size_t n, const AgentSet& ag, FrameClass c) {
  double total = 0;
  for (auto leq : all_preorders(n))
    total += detail::saturating_pow(detail::relation_space(c, n, leq).size(), ag.group_count());
  return total;
}

/// Visits frames of class c over `ag` with 1..max_states states, ascending by size and then
/// lexicographically by (≤, R(group 1), R(group 2), ...). Sizes whose candidate space exceeds
/// max_candidates are sampled instead (seeded, deduplicated). `visit` returns false to stop.
/// Returns the number of frames visited.
template <class Visit>
std::size_t for_each_frame(const SizeBudget& b, const AgentSet& ag, FrameClass c, Visit&& visit) {
  if (b.max_states > 5) throw BudgetExceeded("frame enumeration supports at most 5 states");
  std::mt19937_64 rng(b.seed);
  std::size_t visited = 0;
  for (std::size_t n = 1; n <= b.max_states; ++n) {
    const auto& preorders = all_preorders(n);
    const std::size_t groups = ag.group_count();
    if (candidate_count(n, ag, c) <= static_cast<double>(b.max_candidates)) {
      for (auto leq : preorders) {
        auto space = detail::relation_space(c, n, leq).members();
        std::vector<std::size_t> idx(groups, 0);
        while (true) {
          std::vector<std::uint64_t> masks;
          for (auto i : idx) masks.push_back(space[i]);
          Frame f = detail::frame_from_masks(ag, n, leq, masks);
          if (has_class(f, c)) {
            ++visited;
            if (!visit(f)) return visited;
          }
          std::size_t k = groups;
          while (k > 0) {
            if (++idx[k - 1] < space.size()) break;
            idx[k - 1] = 0;
            --k;
          }
          if (k == 0) break;
        }
      }
      continue;
    }
    std::set<detail::FrameKey> keys;
    for (std::size_t draw = 0; draw < b.max_candidates; ++draw) {
      Frame f = detail::biased_candidate(rng, c, ag, n, preorders);
      if (!has_class(f, c)) continue;
      detail::FrameKey key{{f.leq.to_mask()}};
      for (const auto& r : f.rel) key.masks.push_back(r.to_mask());
      keys.insert(std::move(key));
    }
    for (const auto& k : keys) {
      std::vector<std::uint64_t> rel(k.masks.begin() + 1, k.masks.end());
      ++visited;
      if (!visit(detail::frame_from_masks(ag, n, k.masks[0], rel))) return visited;
    }
  }
  return visited;
}

template <class Visit>
std::size_t for_each_frame(const SizeBudget& b, FrameClass c, Visit&& visit) {
  return for_each_frame(b, AgentSet::standard(b.max_agents), c, std::forward<Visit>(visit));
}

inline std::vector<Frame> enumerate_frames(const SizeBudget& b, FrameClass c) {
  std::vector<Frame> out;
  for_each_frame(b, c, [&](const Frame& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

/// Each atom gets a uniformly chosen up-set; deterministic in b.seed.
inline Model random_model(const SizeBudget& b, const Frame& f, const std::vector<std::string>& atom_names) {
  auto rep = check_frame(f);
  if (!rep.ok) throw PreconditionError("bad frame: " + rep.violations.front());
  std::mt19937_64 rng(b.seed);
  auto ups = up_sets(f.leq, b.valuation_cap);
  Valuation v;
  for (const auto& p : atom_names) v.emplace(p, ups[std::uniform_int_distribution<std::size_t>(0, ups.size() - 1)(rng)]);
  return Model{f, std::move(v)};
}

struct Countermodel {
  Model model;
  std::size_t state;
  std::size_t frames_checked;
};

/// First frame (in enumeration order) on which `keep` holds and `a` fails, with a falsifying
/// valuation and state. nullopt means none within the budget.
inline std::optional<Countermodel> countermodel_where(const Formula& a, const AgentSet& ag, const SizeBudget& b,
                                                      FrameClass space, const std::function<bool(const Frame&)>& keep) {
  detail::check_groups(Frame(ag, Rel::identity(1), std::vector<Rel>(ag.group_count(), Rel(1))), a);
  std::optional<Countermodel> found;
  std::size_t checked = 0;
  for_each_frame(b, ag, space, [&](const Frame& f) {
    if (keep && !keep(f)) return true;
    ++checked;
    if (auto w = find_falsifying_valuation(f, a, b.valuation_cap)) {
      found = Countermodel{Model{f, w->first}, w->second, checked};
      return false;
    }
    return true;
  });
  return found;
}

inline std::optional<Countermodel> countermodel(const Formula& a, const AgentSet& ag, FrameClass c, const SizeBudget& b) {
  return countermodel_where(a, ag, b, c, {});
}

}  // namespace ieml
