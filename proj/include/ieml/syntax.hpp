#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieml/formula.hpp"

namespace ieml {

template <class L>
void collect_atoms(const BasicFormula<L>& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::kAtom:
      out.insert(f.name());
      return;
    case Op::kTop:
    case Op::kBot:
      return;
    case Op::kBox:
    case Op::kDia:
      collect_atoms(f.body(), out);
      return;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
  }
}

template <class L>
std::set<std::string> atoms(const BasicFormula<L>& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

/// Groups occurring in modalities, ascending.
inline std::set<Group> groups_of(const Formula& f) {
  std::set<Group> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    auto g = stack.back();
    stack.pop_back();
    if (is_modal(g.op())) {
      out.insert(g.label());
      stack.push_back(g.body());
    } else if (is_binary(g.op())) {
      stack.push_back(g.lhs());
      stack.push_back(g.rhs());
    }
  }
  return out;
}

inline bool has_diamond(const Formula& f) {
  if (f.op() == Op::kDia) return true;
  if (f.op() == Op::kBox) return has_diamond(f.body());
  if (is_binary(f.op())) return has_diamond(f.lhs()) || has_diamond(f.rhs());
  return false;
}

inline bool is_diamond_free(const Formula& f) { return !has_diamond(f) && groups_of(f).size() <= 1; }

namespace detail {
inline void sf_into(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  if (f.op() == Op::kBox) sf_into(f.body(), out);
  if (is_binary(f.op())) {
    sf_into(f.lhs(), out);
    sf_into(f.rhs(), out);
  }
}
}  // namespace detail

inline std::set<Formula> sf(const Formula& f) {
  if (!is_diamond_free(f)) throw std::invalid_argument("sf: formula is not diamond-free");
  std::set<Formula> out;
  detail::sf_into(f, out);
  return out;
}

namespace detail {
inline BoxFormula tau_rec(const Formula& f) {
  switch (f.op()) {
    case Op::kAtom:
      return BoxFormula::atom(f.name());
    case Op::kTop:
      return BoxFormula::top();
    case Op::kBot:
      return BoxFormula::bot();
    case Op::kImplies:
      return BoxFormula::implies(tau_rec(f.lhs()), tau_rec(f.rhs()));
    case Op::kOr:
      return BoxFormula::disj(tau_rec(f.lhs()), tau_rec(f.rhs()));
    case Op::kAnd:
      return BoxFormula::conj(tau_rec(f.lhs()), tau_rec(f.rhs()));
    case Op::kBox:
      return BoxFormula::box(NoLabel{}, tau_rec(f.body()));
    case Op::kDia:
      break;
  }
  throw std::invalid_argument("tau: diamond");
}
}  // namespace detail

inline BoxFormula tau(const Formula& f) {
  if (!is_diamond_free(f)) throw std::invalid_argument("tau: formula is not diamond-free");
  return detail::tau_rec(f);
}

/// Inverse of tau for a fixed group.
inline Formula untau(const BoxFormula& f, Group g) {
  switch (f.op()) {
    case Op::kAtom:
      return Formula::atom(f.name());
    case Op::kTop:
      return Formula::top();
    case Op::kBot:
      return Formula::bot();
    case Op::kImplies:
      return Formula::implies(untau(f.lhs(), g), untau(f.rhs(), g));
    case Op::kOr:
      return Formula::disj(untau(f.lhs(), g), untau(f.rhs(), g));
    case Op::kAnd:
      return Formula::conj(untau(f.lhs(), g), untau(f.rhs(), g));
    case Op::kBox:
      return Formula::box(g, untau(f.body(), g));
    case Op::kDia:
      break;
  }
  throw std::invalid_argument("untau: diamond");
}

template <class L>
using Substitution = std::map<std::string, BasicFormula<L>>;

/// Simultaneous replacement of atoms; unmapped atoms stay fixed.
template <class L>
BasicFormula<L> substitute(const BasicFormula<L>& f, const Substitution<L>& s) {
  using F = BasicFormula<L>;
  switch (f.op()) {
    case Op::kAtom: {
      auto it = s.find(f.name());
      return it == s.end() ? f : it->second;
    }
    case Op::kTop:
    case Op::kBot:
      return f;
    case Op::kImplies:
      return F::implies(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::kOr:
      return F::disj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::kAnd:
      return F::conj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::kBox:
      return F::box(f.label(), substitute(f.body(), s));
    case Op::kDia:
      if constexpr (LabelTraits<L>::has_diamond) return F::dia(f.label(), substitute(f.body(), s));
      break;
  }
  throw std::logic_error("substitute: bad node");
}

struct GroupBinding {
  std::optional<Group> alpha;
  std::optional<Group> beta;
};

inline Group resolve(GroupVar v, const GroupBinding& b) {
  std::uint32_t m = 0;
  if (v.mask & 1U) {
    if (!b.alpha) throw std::invalid_argument("instantiate: α unbound");
    m |= b.alpha->mask;
  }
  if (v.mask & 2U) {
    if (!b.beta) throw std::invalid_argument("instantiate: β unbound");
    m |= b.beta->mask;
  }
  return Group{m};
}

/// Replace group metavariables by groups and atoms by formulas.
inline Formula instantiate(const SchemaBody& s, const GroupBinding& b, const Substitution<Group>& sigma) {
  switch (s.op()) {
    case Op::kAtom: {
      auto it = sigma.find(s.name());
      return it == sigma.end() ? Formula::atom(s.name()) : it->second;
    }
    case Op::kTop:
      return Formula::top();
    case Op::kBot:
      return Formula::bot();
    case Op::kImplies:
      return Formula::implies(instantiate(s.lhs(), b, sigma), instantiate(s.rhs(), b, sigma));
    case Op::kOr:
      return Formula::disj(instantiate(s.lhs(), b, sigma), instantiate(s.rhs(), b, sigma));
    case Op::kAnd:
      return Formula::conj(instantiate(s.lhs(), b, sigma), instantiate(s.rhs(), b, sigma));
    case Op::kBox:
      return Formula::box(resolve(s.label(), b), instantiate(s.body(), b, sigma));
    case Op::kDia:
      return Formula::dia(resolve(s.label(), b), instantiate(s.body(), b, sigma));
  }
  throw std::logic_error("instantiate: bad node");
}

struct Match {
  Substitution<Group> subst;
  GroupBinding groups;
};

namespace detail {

struct MatchState {
  Substitution<Group> subst;
  std::optional<Group> direct[4];  // indexed by GroupVar mask
};

inline bool match_rec(const SchemaBody& s, const Formula& f, MatchState& st) {
  if (s.op() == Op::kAtom) {
    auto [it, inserted] = st.subst.emplace(s.name(), f);
    return inserted || it->second == f;
  }
  if (s.op() != f.op()) return false;
  switch (s.op()) {
    case Op::kTop:
    case Op::kBot:
      return true;
    case Op::kBox:
    case Op::kDia: {
      auto& slot = st.direct[s.label().mask];
      if (slot && *slot != f.label()) return false;
      slot = f.label();
      return match_rec(s.body(), f.body(), st);
    }
    default:
      return match_rec(s.lhs(), f.lhs(), st) && match_rec(s.rhs(), f.rhs(), st);
  }
}

inline bool uses_var(const SchemaBody& s, std::uint8_t bit) {
  if (is_modal(s.op())) return (s.label().mask & bit) || uses_var(s.body(), bit);
  if (is_binary(s.op())) return uses_var(s.lhs(), bit) || uses_var(s.rhs(), bit);
  return false;
}

}  // namespace detail

/// Decide whether `f` is an instance of schema `s`. Schema atoms are always metavariables.
/// When a composite label α∪β occurs, all splits of the target group are tried in ascending
/// (α mask, β mask) order and the first consistent one is returned. `fixed` constrains the
/// group metavariables that occur in `s`.
inline std::optional<Match> match_instance(const SchemaBody& s, const Formula& f, const GroupBinding& fixed = {}) {
  detail::MatchState st;
  if (!detail::match_rec(s, f, st)) return std::nullopt;
  const bool has_a = detail::uses_var(s, 1), has_b = detail::uses_var(s, 2);
  std::optional<Group> a = st.direct[1], b = st.direct[2];
  auto agree = [](std::optional<Group>& slot, const std::optional<Group>& want) {
    if (!want) return true;
    if (slot && *slot != *want) return false;
    slot = want;
    return true;
  };
  if (has_a && !agree(a, fixed.alpha)) return std::nullopt;
  if (has_b && !agree(b, fixed.beta)) return std::nullopt;
  Match m;
  m.subst = std::move(st.subst);
  auto composite = st.direct[3];
  if (!composite) {
    if (has_a) m.groups.alpha = a;
    if (has_b) m.groups.beta = b;
    return m;
  }
  const std::uint32_t target = composite->mask;
  for (std::uint32_t am = 1; am <= target; ++am) {
    if ((am & ~target) != 0) continue;
    if (a && a->mask != am) continue;
    for (std::uint32_t bm = 1; bm <= target; ++bm) {
      if ((bm & ~target) != 0 || (am | bm) != target) continue;
      if (b && b->mask != bm) continue;
      m.groups.alpha = Group{am};
      m.groups.beta = Group{bm};
      return m;
    }
  }
  return std::nullopt;
}

}  // namespace ieml
