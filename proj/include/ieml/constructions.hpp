#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ieml/frame.hpp"
#include "ieml/frame_classes.hpp"

namespace ieml {

/// Upper bound on the carrier of a constructed model.
struct ConstructionBudget {
  std::size_t max_states = 8192;
};

enum class PiVariant { kDefault, kPartition };
enum class LiftVariant { kPlain, kPrestandard };

/// π(α)(t,u) as bitmasks over the source carrier.
///   default:   ∅ if t R(α) u, else W
///   partition: [t] ⊕ [u] for the R(α)-classes
class PiTable {
 public:
  PiTable(const Frame& f, PiVariant v) : n_(f.size()), groups_(f.agents.group_count()) {
    if (n_ > 63) throw BudgetExceeded("pi table needs at most 63 states");
    const std::uint64_t whole = (std::uint64_t{1} << n_) - 1;
    table_.resize(groups_ * n_ * n_);
    for (std::size_t gi = 0; gi < groups_; ++gi) {
      const Rel& r = f.rel[gi];
      for (std::size_t t = 0; t < n_; ++t)
        for (std::size_t u = 0; u < n_; ++u)
          table_[(gi * n_ + t) * n_ + u] = v == PiVariant::kDefault
                                                ? (r.contains(t, u) ? 0 : whole)
                                                : (r.row(t).to_mask() ^ r.row(u).to_mask());
    }
  }

  std::uint64_t operator()(Group g, std::size_t t, std::size_t u) const {
    return table_.at((g.index() * n_ + t) * n_ + u);
  }

 private:
  std::size_t n_, groups_;
  std::vector<std::uint64_t> table_;
};

/// I: functions ℘*(Ag) × Ag → ℘(W), indexed lexicographically by their tables.
/// Cell (γ, a) sits at position γ.index()·|Ag| + a; the first cell is the most
/// significant digit and every digit is a bitmask over W.
class IFunctionSpace {
 public:
  IFunctionSpace(std::size_t n, const AgentSet& ag) : n_(n), k_(ag.size()), cells_(ag.group_count() * ag.size()) {
    if (n_ * cells_ >= 63) throw BudgetExceeded("index set I is too large");
  }

  std::size_t digit_bits() const { return n_; }
  std::size_t cells() const { return cells_; }
  std::size_t size() const { return std::size_t{1} << (n_ * cells_); }
  std::size_t cell(Group g, std::size_t agent) const { return g.index() * k_ + agent; }
  std::size_t shift(std::size_t cell) const { return n_ * (cells_ - 1 - cell); }

  std::uint64_t value(std::size_t idx, Group g, std::size_t agent) const {
    return (idx >> shift(cell(g, agent))) & mask();
  }
  std::size_t with_value(std::size_t idx, Group g, std::size_t agent, std::uint64_t v) const {
    std::size_t sh = shift(cell(g, agent));
    return (idx & ~(mask() << sh)) | (v << sh);
  }
  /// ⊕ of g(γ, a) over a ∈ γ.
  std::uint64_t sigma(std::size_t idx, Group g) const {
    std::uint64_t s = 0;
    for (std::size_t a = 0; a < k_; ++a)
      if (g.contains(a)) s ^= value(idx, g, a);
    return s;
  }
  std::uint64_t mask() const { return (std::uint64_t{1} << n_) - 1; }

 private:
  std::size_t n_, k_, cells_;
};

/// (t,g) R′(α) (u,h), read directly off the two conditions.
inline bool standard_related(const IFunctionSpace& I, const AgentSet& ag, const PiTable& pi, Group alpha,
                             std::size_t t, std::size_t g, std::size_t u, std::size_t h) {
  for (std::size_t gi = 0; gi < ag.group_count(); ++gi) {
    Group gamma = Group::from_index(gi);
    for (std::size_t a = 0; a < ag.size(); ++a)
      if (alpha.contains(a) && gamma.contains(a) && I.value(g, gamma, a) != I.value(h, gamma, a)) return false;
    if ((I.sigma(g, gamma) ^ I.sigma(h, gamma)) != pi(gamma, t, u)) return false;
  }
  return true;
}

namespace detail {

inline std::size_t checked_product(std::size_t a, std::size_t b, std::size_t cap, const char* what) {
  if (b != 0 && a > cap / b) throw BudgetExceeded(std::string(what) + " exceeds the state budget");
  if (a * b > cap) throw BudgetExceeded(std::string(what) + " exceeds the state budget");
  return a * b;
}

/// ≤′ on W × X by first projection; state (t, x) has index t·|X| + x.
inline Rel product_leq(const Rel& leq, std::size_t block) {
  const std::size_t n = leq.size();
  Rel out(n * block);
  for (std::size_t t = 0; t < n; ++t) {
    StateSet row(n * block);
    for (std::size_t u = 0; u < n; ++u)
      if (leq.contains(t, u))
        for (std::size_t x = 0; x < block; ++x) row.set(u * block + x);
    for (std::size_t x = 0; x < block; ++x) out.set_row(t * block + x, row);
  }
  return out;
}

}  // namespace detail

/// X × B as a set over indices t·|B| + b.
inline StateSet lift_set(const StateSet& x, std::size_t block) {
  StateSet out(x.size() * block);
  x.for_each([&](std::size_t t) {
    for (std::size_t b = 0; b < block; ++b) out.set(t * block + b);
  });
  return out;
}

namespace detail {
inline Valuation lift_valuation(const Valuation& v, std::size_t block) {
  Valuation out;
  for (const auto& [p, u] : v) out.emplace(p, lift_set(u, block));
  return out;
}
}  // namespace detail

/// h with (t,g) R′(α) (u,h), following the four-case definition; pick(γ) = min(γ∖α).
inline std::size_t witness_h(const Model& m, const PiTable& pi, Group alpha, std::size_t t, std::size_t u,
                             std::size_t g) {
  if (!m.frame.r(alpha).contains(t, u)) throw PreconditionError("witness_h needs t R(alpha) u");
  const AgentSet& ag = m.frame.agents;
  IFunctionSpace I(m.size(), ag);
  std::size_t h = 0;
  for (std::size_t bi = 0; bi < ag.group_count(); ++bi) {
    Group beta = Group::from_index(bi);
    Group rest{beta.mask & ~alpha.mask};
    std::optional<std::size_t> pick;
    if (rest.mask != 0) pick = static_cast<std::size_t>(std::countr_zero(rest.mask));
    for (std::size_t a = 0; a < ag.size(); ++a) {
      std::uint64_t v = 0;
      if (!beta.contains(a)) {
        v = 0;
      } else if (alpha.contains(a)) {
        v = I.value(g, beta, a);
      } else if (pick && a == *pick) {
        for (std::size_t b = 0; b < ag.size(); ++b)
          if (rest.contains(b)) v ^= I.value(g, beta, b);
        v ^= pi(beta, t, u);
      }
      h = I.with_value(h, beta, a, v);
    }
  }
  return h;
}

/// W′ = W × I with ≤′ by first projection and R′ per the two cell conditions.
inline Model standardize(const Model& m, PiVariant variant = PiVariant::kDefault, ConstructionBudget budget = {}) {
  const Frame& f = m.frame;
  if (!has_class(f, FrameClass::kPrestandard)) throw PreconditionError("standardize needs a prestandard frame");
  if (variant == PiVariant::kPartition && !has_class(f, FrameClass::kPartition))
    throw PreconditionError("partition variant needs a partition frame");
  const AgentSet& ag = f.agents;
  const std::size_t n = f.size(), k = ag.size();
  IFunctionSpace I(n, ag);
  const std::size_t ni = I.size();
  const std::size_t total = detail::checked_product(n, ni, budget.max_states, "W x I");
  PiTable pi(f, variant);
  const std::uint64_t full_digit = I.mask();

  Frame out;
  out.agents = ag;
  out.leq = detail::product_leq(f.leq, ni);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t g = 0; g < ni; ++g) out.names.push_back(f.names[t] + "|g" + std::to_string(g));

  const auto groups = ag.groups();
  for (auto alpha : groups) {
    Rel r(total);
    // Per γ, the admissible digit combinations of h(γ,·) as OR-able index fragments.
    std::vector<std::vector<std::size_t>> parts(groups.size());
    std::vector<std::size_t> cur, next;
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t g = 0; g < ni; ++g)
        for (std::size_t u = 0; u < n; ++u) {
          bool dead = false;
          for (std::size_t gi = 0; gi < groups.size() && !dead; ++gi) {
            Group gamma = groups[gi];
            std::uint64_t target = I.sigma(g, gamma) ^ pi(gamma, t, u);
            cur.assign(1, 0);
            std::optional<std::size_t> last_free;
            for (std::size_t a = 0; a < k; ++a)
              if (gamma.contains(a) && !alpha.contains(a)) last_free = a;
            std::uint64_t fixed_sigma = 0;
            for (std::size_t a = 0; a < k; ++a) {
              const std::size_t sh = I.shift(I.cell(gamma, a));
              if (gamma.contains(a) && alpha.contains(a)) {
                std::uint64_t v = I.value(g, gamma, a);
                fixed_sigma ^= v;
                for (auto& c : cur) c |= v << sh;
                continue;
              }
              if (gamma.contains(a) && last_free && a == *last_free) continue;  // determined below
              next.clear();
              for (auto c : cur)
                for (std::uint64_t v = 0; v <= full_digit; ++v) next.push_back(c | (v << sh));
              std::swap(cur, next);
            }
            auto& out_part = parts[gi];
            out_part.clear();
            if (!last_free) {
              if (fixed_sigma != target) dead = true;
              out_part.insert(out_part.end(), cur.begin(), cur.end());
              continue;
            }
            const std::size_t sh = I.shift(I.cell(gamma, *last_free));
            for (auto c : cur) {
              std::uint64_t s = fixed_sigma;
              for (std::size_t a = 0; a < k; ++a)
                if (gamma.contains(a) && !alpha.contains(a) && a != *last_free) s ^= (c >> I.shift(I.cell(gamma, a))) & full_digit;
              out_part.push_back(c | ((s ^ target) << sh));
            }
          }
          if (dead) continue;
          const std::size_t src = t * ni + g;
          auto emit = [&](auto& self, std::size_t gi, std::size_t acc) -> void {
            if (gi == groups.size()) {
              r.add(src, u * ni + acc);
              return;
            }
            for (auto c : parts[gi]) self(self, gi + 1, acc | c);
          };
          emit(emit, 0, 0);
        }
    out.rel.push_back(std::move(r));
  }
  return Model{std::move(out), detail::lift_valuation(m.val, ni)};
}

/// W × {0,1}; (t,j) R′(α) (u,k) iff t R(α) u, j = 0 and k = 1. State (t,j) has index 2t + j.
inline Model transitive_lift(const Model& m) {
  const Frame& f = m.frame;
  const std::size_t n = f.size();
  Frame out;
  out.agents = f.agents;
  out.leq = detail::product_leq(f.leq, 2);
  for (std::size_t t = 0; t < n; ++t)
    for (int j = 0; j < 2; ++j) out.names.push_back(f.names[t] + "|" + std::to_string(j));
  for (const auto& r : f.rel) {
    Rel rr(2 * n);
    for (auto [t, u] : r.pairs()) rr.add(2 * t, 2 * u + 1);
    out.rel.push_back(std::move(rr));
  }
  return Model{std::move(out), detail::lift_valuation(m.val, 2)};
}

/// R′(α) = (≤∘R(α)∘≤) ∩ (≥∘R(α)∘≥) on the same carrier.
inline Model rs_collapse(const Model& m) {
  const Frame& f = m.frame;
  if (!has_class(f, FrameClass::kUd)) throw PreconditionError("rs_collapse needs an up and down reflexive and symmetric frame");
  Frame out = f;
  Rel geq = f.leq.converse();
  for (auto& r : out.rel) r = compose(compose(f.leq, r), f.leq) & compose(compose(geq, r), geq);
  return Model{std::move(out), m.val};
}

/// J: functions (t, β) ↦ g(t,β) with t R′(β) g(t,β); cell (t, β) at t·|groups| + β.index(),
/// first cell most significant, digits ranging over the successors in ascending order.
class JFunctionSpace {
 public:
  explicit JFunctionSpace(const Frame& f, std::size_t cap = std::size_t{1} << 40) : groups_(f.agents.group_count()) {
    const std::size_t n = f.size();
    options_.resize(n * groups_);
    pos_.resize(n * groups_);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t gi = 0; gi < groups_; ++gi) {
        auto& o = options_[t * groups_ + gi];
        o = f.rel[gi].row(t).to_vector();
        if (o.empty()) throw PreconditionError("some state has no successor, J is empty");
        auto& p = pos_[t * groups_ + gi];
        p.assign(n, kNone);
        for (std::size_t i = 0; i < o.size(); ++i) p[o[i]] = i;
      }
    stride_.assign(options_.size(), 1);
    size_ = 1;
    for (std::size_t c = options_.size(); c-- > 0;) {
      stride_[c] = size_;
      size_ = detail::checked_product(size_, options_[c].size(), cap, "J");
    }
  }

  std::size_t size() const { return size_; }
  std::size_t cell(std::size_t t, Group b) const { return t * groups_ + b.index(); }
  std::size_t radix(std::size_t c) const { return options_[c].size(); }
  std::size_t digit(std::size_t idx, std::size_t c) const { return (idx / stride_[c]) % options_[c].size(); }
  std::size_t value(std::size_t idx, std::size_t t, Group b) const {
    std::size_t c = cell(t, b);
    return options_[c][digit(idx, c)];
  }
  /// Index with g(t,β) replaced by v; v must be an admissible successor.
  std::size_t with_value(std::size_t idx, std::size_t t, Group b, std::size_t v) const {
    std::size_t c = cell(t, b);
    std::size_t d = pos_[c].at(v);
    if (d == kNone) throw std::invalid_argument("value outside R'(beta)(t)");
    return idx - digit(idx, c) * stride_[c] + d * stride_[c];
  }
  /// Calls f(idx) for every index whose value at each listed cell is one of the allowed values.
  template <class F>
  void for_each_matching(const std::vector<std::pair<std::size_t, std::vector<std::size_t>>>& allowed, F&& f) const {
    std::vector<std::vector<std::size_t>> digits(options_.size());
    for (std::size_t c = 0; c < options_.size(); ++c)
      for (std::size_t d = 0; d < options_[c].size(); ++d) digits[c].push_back(d);
    for (const auto& [c, values] : allowed) {
      std::vector<std::size_t> keep;
      for (auto v : values)
        if (pos_[c][v] != kNone) keep.push_back(pos_[c][v]);
      std::sort(keep.begin(), keep.end());
      keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
      if (keep.empty()) return;
      digits[c] = std::move(keep);
    }
    auto rec = [&](auto&& self, std::size_t c, std::size_t idx) -> void {
      if (c == digits.size()) {
        f(idx);
        return;
      }
      for (auto d : digits[c]) self(self, c + 1, idx + d * stride_[c]);
    };
    rec(rec, 0, 0);
  }
  /// The function t ↦ t, which exists when every R′(β) is reflexive.
  std::size_t identity() const {
    std::size_t idx = 0;
    for (std::size_t c = 0; c < options_.size(); ++c) idx = with_value(idx, c / groups_, Group::from_index(c % groups_), c / groups_);
    return idx;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t groups_;
  std::size_t size_ = 1;
  std::vector<std::vector<std::size_t>> options_;
  std::vector<std::vector<std::size_t>> pos_;
  std::vector<std::size_t> stride_;
};

namespace detail {
inline std::vector<Group> subgroups(Group b, LiftVariant v) {
  if (v == LiftVariant::kPlain) return {b};
  std::vector<Group> out;
  for (std::uint32_t m = 1; m <= b.mask; ++m)
    if ((m & ~b.mask) == 0) out.push_back(Group{m});
  return out;
}
}  // namespace detail

/// (t,g) R″(β) (u,h) read directly off the definition.
inline bool partition_related(const Frame& src, const JFunctionSpace& J, const std::vector<Group>& subs, Group beta,
                              std::size_t t, std::size_t g, std::size_t u, std::size_t h) {
  if (!src.r(beta).contains(t, u)) return false;
  for (auto gamma : subs) {
    std::size_t x = J.value(g, t, gamma), y = J.value(h, u, gamma);
    bool same = (t == u && x == y) || (t == y && x == u);
    if (!same) return false;
  }
  return true;
}

inline bool partition_related(const Frame& src, const JFunctionSpace& J, LiftVariant v, Group beta, std::size_t t,
                              std::size_t g, std::size_t u, std::size_t h) {
  return partition_related(src, J, detail::subgroups(beta, v), beta, t, g, u, h);
}

/// W″ = W′ × J over a reflexive and symmetric source; state (t,g) has index t·|J| + g.
inline Model partition_lift(const Model& m, LiftVariant variant = LiftVariant::kPlain, ConstructionBudget budget = {}) {
  const Frame& f = m.frame;
  if (!has_class(f, FrameClass::kRs)) throw PreconditionError("partition_lift needs a reflexive and symmetric frame");
  if (variant == LiftVariant::kPrestandard && !has_class(f, FrameClass::kPrestandard))
    throw PreconditionError("prestandard variant needs a prestandard frame");
  const std::size_t n = f.size();
  JFunctionSpace J(f, budget.max_states);
  const std::size_t nj = J.size();
  const std::size_t total = detail::checked_product(n, nj, budget.max_states, "W' x J");

  Frame out;
  out.agents = f.agents;
  out.leq = detail::product_leq(f.leq, nj);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t g = 0; g < nj; ++g) out.names.push_back(f.names[t] + "|j" + std::to_string(g));

  for (auto beta : f.agents.groups()) {
    auto subs = detail::subgroups(beta, variant);
    Rel r(total);
    // A row depends on g only through g(t,γ) for γ in subs.
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, StateSet> cache;
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t g = 0; g < nj; ++g) {
        std::vector<std::size_t> key;
        for (auto gamma : subs) key.push_back(J.value(g, t, gamma));
        auto it = cache.find({t, key});
        if (it == cache.end()) {
          StateSet row(total);
          f.r(beta).for_each_successor(t, [&](std::size_t u) {
            // h(u,γ) must be g(t,γ) when u = t, or t when g(t,γ) = u.
            std::vector<std::pair<std::size_t, std::vector<std::size_t>>> allowed;
            for (std::size_t k = 0; k < subs.size(); ++k) {
              std::vector<std::size_t> values;
              if (t == u) values.push_back(key[k]);
              if (key[k] == u) values.push_back(t);
              allowed.emplace_back(J.cell(u, subs[k]), std::move(values));
            }
            J.for_each_matching(allowed, [&](std::size_t h) { row.set(u * nj + h); });
          });
          it = cache.emplace(std::make_pair(t, key), std::move(row)).first;
        }
        r.set_row(t * nj + g, it->second);
      }
    out.rel.push_back(std::move(r));
  }
  return Model{std::move(out), detail::lift_valuation(m.val, nj)};
}

/// The pair (h, i) of the reachability claim: h moves u to v, i moves v to u, on α
/// (and, for the prestandard variant, on every γ ⊆ α); identity elsewhere.
inline std::pair<std::size_t, std::size_t> partition_witness(const Frame& src, const JFunctionSpace& J,
                                                             LiftVariant v, Group alpha, std::size_t u,
                                                             std::size_t w) {
  if (!src.r(alpha).contains(u, w)) throw PreconditionError("partition_witness needs u R'(alpha) v");
  std::size_t h = J.identity(), i = J.identity();
  for (auto gamma : detail::subgroups(alpha, v)) {
    h = J.with_value(h, u, gamma, w);
    i = J.with_value(i, w, gamma, u);
  }
  return {h, i};
}

/// Every group mapped to the mono relation R.
inline Model expand_mono(const MonoModel& mm, const AgentSet& agents, IelKind kind = IelKind::kMinus) {
  if (!is_iel_structure(mm.structure, kind)) throw PreconditionError("input is not an IEL structure of the requested kind");
  Frame f(agents, mm.structure.leq, std::vector<Rel>(agents.group_count(), mm.structure.r), mm.structure.names);
  return Model{std::move(f), mm.val};
}

/// R′ = ≤∘R(α).
inline MonoModel collapse_mono(const Model& m, Group alpha, IelKind kind = IelKind::kMinus) {
  const Frame& f = m.frame;
  if (!f.agents.valid(alpha)) throw std::invalid_argument("group outside the frame's agents");
  FrameClass need = kind == IelKind::kMinus ? FrameClass::kDoxastic : FrameClass::kEpistemic;
  if (!has_class(f, need)) throw PreconditionError(std::string("collapse_mono needs a ") + std::string(name(need)) + " frame");
  MonoStructure s{f.leq, compose(f.leq, f.r(alpha)), f.names};
  return MonoModel{std::move(s), m.val};
}

}  // namespace ieml
