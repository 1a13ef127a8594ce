#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ieml/frame.hpp"

namespace ieml {

enum class FrameClass {
  kAll,
  kDoxastic,
  kEpistemic,
  kReflexive,
  kSymmetric,
  kTransitive,
  kRs,
  kPartition,
  kUdReflexive,
  kUdSymmetric,
  kUd,
  kPrestandard,
  kStandard,
  kForwardConfluent,
};

inline constexpr std::array<FrameClass, 14> kAllFrameClasses = {
    FrameClass::kAll,         FrameClass::kDoxastic,    FrameClass::kEpistemic,   FrameClass::kReflexive,
    FrameClass::kSymmetric,   FrameClass::kTransitive,  FrameClass::kRs,          FrameClass::kPartition,
    FrameClass::kUdReflexive, FrameClass::kUdSymmetric, FrameClass::kUd,          FrameClass::kPrestandard,
    FrameClass::kStandard,    FrameClass::kForwardConfluent,
};

inline std::string_view name(FrameClass c) {
  switch (c) {
    case FrameClass::kAll: return "all";
    case FrameClass::kDoxastic: return "doxastic";
    case FrameClass::kEpistemic: return "epistemic";
    case FrameClass::kReflexive: return "reflexive";
    case FrameClass::kSymmetric: return "symmetric";
    case FrameClass::kTransitive: return "transitive";
    case FrameClass::kRs: return "rs";
    case FrameClass::kPartition: return "partition";
    case FrameClass::kUdReflexive: return "ud_reflexive";
    case FrameClass::kUdSymmetric: return "ud_symmetric";
    case FrameClass::kUd: return "ud";
    case FrameClass::kPrestandard: return "prestandard";
    case FrameClass::kStandard: return "standard";
    case FrameClass::kForwardConfluent: return "forward_confluent";
  }
  return "?";
}

inline std::optional<FrameClass> parse_frame_class(std::string_view s) {
  for (auto c : kAllFrameClasses)
    if (name(c) == s) return c;
  return std::nullopt;
}

namespace detail {

inline bool every_row_nonempty(const Rel& r) {
  for (std::size_t s = 0; s < r.size(); ++s) {
    bool any = false;
    for (Word w : r.row_words(s)) any = any || w != 0;
    if (!any) return false;
  }
  return true;
}

struct ClassProbe {
  const Frame& f;
  mutable std::optional<Rel> geq_;
  explicit ClassProbe(const Frame& fr) : f(fr) {}

  const Rel& geq() const {
    if (!geq_) geq_ = f.leq.converse();
    return *geq_;
  }
  mutable std::optional<RowClasses> leq_rows_, geq_rows_;
  const RowClasses* leq_rows() const {
    if (!leq_rows_) leq_rows_.emplace(f.leq);
    return &*leq_rows_;
  }
  const RowClasses* geq_rows() const {
    if (!geq_rows_) geq_rows_.emplace(geq());
    return &*geq_rows_;
  }

  template <class P>
  bool all_groups(P&& pred) const {
    for (const auto& r : f.rel)
      if (!pred(r)) return false;
    return true;
  }

  bool doxastic() const {
    return all_groups([&](const Rel& r) { return r.is_subset_of(f.leq); });
  }
  bool epistemic() const {
    return doxastic() && all_groups([&](const Rel& r) { return every_row_nonempty(compose(f.leq, r, leq_rows())); });
  }
  bool reflexive() const { return all_groups([](const Rel& r) { return r.is_reflexive(); }); }
  bool symmetric() const { return all_groups([](const Rel& r) { return r.is_symmetric(); }); }
  bool transitive() const { return all_groups([](const Rel& r) { return r.is_transitive(); }); }
  mutable std::map<const Rel*, Rel> up_, down_;
  const Rel& up(const Rel& r) const {
    auto it = up_.find(&r);
    if (it == up_.end()) it = up_.emplace(&r, compose(compose(f.leq, r, leq_rows()), f.leq, nullptr, leq_rows())).first;
    return it->second;
  }
  const Rel& down(const Rel& r) const {
    auto it = down_.find(&r);
    if (it == down_.end()) it = down_.emplace(&r, compose(compose(geq(), r, geq_rows()), geq(), nullptr, geq_rows())).first;
    return it->second;
  }
  bool ud_reflexive() const {
    return all_groups([&](const Rel& r) { return up(r).is_reflexive() && down(r).is_reflexive(); });
  }
  bool ud_symmetric() const {
    return all_groups([&](const Rel& r) {
      const Rel &u = up(r), &d = down(r);
      for (std::size_t s = 0; s < r.size(); ++s) {
        bool ok = true;
        r.for_each_successor(s, [&](std::size_t t) { ok = ok && u.contains(t, s) && d.contains(t, s); });
        if (!ok) return false;
      }
      return true;
    });
  }
  bool prestandard(bool equality) const {
    const std::size_t gc = f.agents.group_count();
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < gc; ++i)
      for (std::size_t j = i + 1; j < gc; ++j) {
        Group a = Group::from_index(i), b = Group::from_index(j);
        const Rel &u = f.r(a | b), &ra = f.r(a), &rb = f.r(b);
        for (std::size_t s = 0; s < n; ++s) {
          auto uw = u.row_words(s), aw = ra.row_words(s), bw = rb.row_words(s);
          for (std::size_t w = 0; w < uw.size(); ++w) {
            Word meet = aw[w] & bw[w];
            if (equality ? uw[w] != meet : (uw[w] & ~meet) != 0) return false;
          }
        }
      }
    return true;
  }
  bool forward_confluent() const {
    return all_groups([&](const Rel& r) { return compose(geq(), r, geq_rows()).is_subset_of(compose(r, geq(), nullptr, geq_rows())); });
  }
};

}  // namespace detail

inline bool has_class(const Frame& f, FrameClass c) {
  detail::ClassProbe p(f);
  switch (c) {
    case FrameClass::kAll: return true;
    case FrameClass::kDoxastic: return p.doxastic();
    case FrameClass::kEpistemic: return p.epistemic();
    case FrameClass::kReflexive: return p.reflexive();
    case FrameClass::kSymmetric: return p.symmetric();
    case FrameClass::kTransitive: return p.transitive();
    case FrameClass::kRs: return p.reflexive() && p.symmetric();
    case FrameClass::kPartition: return p.reflexive() && p.symmetric() && p.transitive();
    case FrameClass::kUdReflexive: return p.ud_reflexive();
    case FrameClass::kUdSymmetric: return p.ud_symmetric();
    case FrameClass::kUd: return p.ud_reflexive() && p.ud_symmetric();
    case FrameClass::kPrestandard: return p.prestandard(false);
    case FrameClass::kStandard: return p.prestandard(true);
    case FrameClass::kForwardConfluent: return p.forward_confluent();
  }
  return false;
}

inline bool has_classes(const Frame& f, const std::set<FrameClass>& cs) {
  for (auto c : cs)
    if (!has_class(f, c)) return false;
  return true;
}

/// Every tag that holds, in declaration order.
inline std::vector<FrameClass> classify(const Frame& f) {
  detail::ClassProbe p(f);
  const bool refl = p.reflexive(), sym = p.symmetric(), tra = p.transitive();
  const bool udr = p.ud_reflexive(), uds = p.ud_symmetric();
  const bool dox = p.doxastic();
  const bool pre = p.prestandard(false);
  std::vector<FrameClass> out{FrameClass::kAll};
  if (dox) out.push_back(FrameClass::kDoxastic);
  if (dox && p.epistemic()) out.push_back(FrameClass::kEpistemic);
  if (refl) out.push_back(FrameClass::kReflexive);
  if (sym) out.push_back(FrameClass::kSymmetric);
  if (tra) out.push_back(FrameClass::kTransitive);
  if (refl && sym) out.push_back(FrameClass::kRs);
  if (refl && sym && tra) out.push_back(FrameClass::kPartition);
  if (udr) out.push_back(FrameClass::kUdReflexive);
  if (uds) out.push_back(FrameClass::kUdSymmetric);
  if (udr && uds) out.push_back(FrameClass::kUd);
  if (pre) out.push_back(FrameClass::kPrestandard);
  if (pre && p.prestandard(true)) out.push_back(FrameClass::kStandard);
  if (p.forward_confluent()) out.push_back(FrameClass::kForwardConfluent);
  return out;
}

enum class IelKind { kMinus, kFull };

/// (i) R ⊆ ≤, (ii) ≤∘R ⊆ R, and for the full kind (iii) R is serial.
inline bool is_iel_structure(const MonoStructure& m, IelKind kind) {
  if (!m.r.is_subset_of(m.leq)) return false;
  if (!compose(m.leq, m.r).is_subset_of(m.r)) return false;
  if (kind == IelKind::kFull && !detail::every_row_nonempty(m.r)) return false;
  return true;
}

}  // namespace ieml
