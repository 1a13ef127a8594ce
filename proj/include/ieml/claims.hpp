#pragma once

// Brute-force verification of satisfaction-equivalence claims. Formulas are explored
// up to semantic equivalence: two formulas with the same truth-set tuple across every
// algebra are interchangeable in any context, so the tuples realised by formulas of
// depth ≤ d are generated exactly from those of depth ≤ d−1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ieml/constructions.hpp"
#include "ieml/semantics.hpp"

namespace ieml {

struct ClosureOptions {
  std::vector<std::string> atoms{"p"};
  std::vector<Group> groups;
  std::size_t depth = 2;
  bool constants = true;
  bool diamonds = true;
};

class FormulaClosure {
 public:
  struct Entry {
    std::vector<StateSet> sets;
    Formula witness;
    std::size_t depth;
  };

  FormulaClosure(std::vector<const TruthAlgebra*> algs, ClosureOptions opt)
      : algs_(std::move(algs)), opt_(std::move(opt)) {}

  /// Generates every tuple; stops at the first one for which `ok` is false and returns it.
  template <class Pred>
  std::optional<Entry> run(Pred&& ok) {
    entries_.clear();
    index_.clear();
    std::vector<StateSet> scratch;
    scratch.reserve(algs_.size());
    // Witnesses are only built for tuples not seen before.
    auto add = [&](auto&& witness, std::size_t d) -> bool {
      if (index_.count(scratch)) return true;
      index_.emplace(scratch, entries_.size());
      entries_.push_back(Entry{scratch, witness(), d});
      return ok(entries_.back());
    };
    auto fill = [&](auto&& op) {
      scratch.clear();
      for (std::size_t i = 0; i < algs_.size(); ++i) scratch.push_back(op(*algs_[i], i));
    };
    for (const auto& p : opt_.atoms) {
      fill([&](const TruthAlgebra& a, std::size_t) { return a.atom(p); });
      if (!add([&] { return Formula::atom(p); }, 0)) return entries_.back();
    }
    if (opt_.constants) {
      fill([](const TruthAlgebra& a, std::size_t) { return a.top(); });
      if (!add([] { return Formula::top(); }, 0)) return entries_.back();
      fill([](const TruthAlgebra& a, std::size_t) { return a.bot(); });
      if (!add([] { return Formula::bot(); }, 0)) return entries_.back();
    }
    std::size_t frontier = 0;
    for (std::size_t d = 1; d <= opt_.depth; ++d) {
      const std::size_t end = entries_.size();
      for (std::size_t i = 0; i < end; ++i)
        for (std::size_t j = 0; j < end; ++j) {
          if (i < frontier && j < frontier) continue;
          auto wx = [&] { return entries_[i].witness; };
          auto wy = [&] { return entries_[j].witness; };
          fill([&](const TruthAlgebra& a, std::size_t k) { return a.implies(entries_[i].sets[k], entries_[j].sets[k]); });
          if (!add([&] { return Formula::implies(wx(), wy()); }, d)) return entries_.back();
          fill([&](const TruthAlgebra&, std::size_t k) { return entries_[i].sets[k] | entries_[j].sets[k]; });
          if (!add([&] { return Formula::disj(wx(), wy()); }, d)) return entries_.back();
          fill([&](const TruthAlgebra&, std::size_t k) { return entries_[i].sets[k] & entries_[j].sets[k]; });
          if (!add([&] { return Formula::conj(wx(), wy()); }, d)) return entries_.back();
        }
      for (std::size_t i = frontier; i < end; ++i)
        for (auto g : opt_.groups) {
          fill([&](const TruthAlgebra& a, std::size_t k) { return a.box(g, entries_[i].sets[k]); });
          if (!add([&] { return Formula::box(g, entries_[i].witness); }, d)) return entries_.back();
          if (opt_.diamonds) {
            fill([&](const TruthAlgebra& a, std::size_t k) { return a.dia(g, entries_[i].sets[k]); });
            if (!add([&] { return Formula::dia(g, entries_[i].witness); }, d)) return entries_.back();
          }
        }
      frontier = end;
    }
    return std::nullopt;
  }

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  struct TupleHash {
    std::size_t operator()(const std::vector<StateSet>& v) const {
      std::size_t h = v.size();
      for (const auto& s : v) h = h * 0x9e3779b97f4a7c15ULL + s.hash();
      return h;
    }
  };

  std::vector<const TruthAlgebra*> algs_;
  ClosureOptions opt_;
  std::vector<Entry> entries_;
  std::unordered_map<std::vector<StateSet>, std::size_t, TupleHash> index_;
};

struct ClaimResult {
  bool ok = true;
  std::size_t tuples = 0;
  std::optional<Formula> witness;
  std::string detail;
};

namespace detail {

/// The connectives of a model on at most 64 states, one machine word per truth set.
class MaskAlgebra {
 public:
  MaskAlgebra(const PreparedFrame& pf, const std::vector<Group>& groups) : n_(pf.size()) {
    if (n_ > 64) throw std::invalid_argument("MaskAlgebra needs at most 64 states");
    const Rel& leq = pf.frame().leq;
    up_.assign(n_, 0);
    for (std::size_t w = 0; w < n_; ++w) up_[w] = leq.row(w).to_mask();
    for (auto g : groups) {
      const Rel& r = pf.frame().r(g);
      std::vector<std::uint64_t> after(n_, 0), before(n_, 0);
      for (std::size_t w = 0; w < n_; ++w)
        for (std::size_t v = 0; v < n_; ++v) {
          if (!leq.contains(w, v)) continue;
          std::uint64_t rv = r.row(v).to_mask(), rw = r.row(w).to_mask();
          after[w] |= rv;   // w ≤ v R u
          before[v] |= rw;  // w ≤ v, w R u
        }
      box_.push_back(std::move(after));
      dia_.push_back(std::move(before));
    }
  }

  std::size_t size() const { return n_; }
  std::uint64_t implies(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t out = 0, bad = a & ~b;
    for (std::size_t w = 0; w < n_; ++w)
      if (!(up_[w] & bad)) out |= std::uint64_t{1} << w;
    return out;
  }
  std::uint64_t box(std::size_t g, std::uint64_t a) const {
    std::uint64_t out = 0;
    for (std::size_t w = 0; w < n_; ++w)
      if (!(box_[g][w] & ~a)) out |= std::uint64_t{1} << w;
    return out;
  }
  std::uint64_t dia(std::size_t g, std::uint64_t a) const {
    std::uint64_t out = 0;
    for (std::size_t w = 0; w < n_; ++w)
      if (dia_[g][w] & a) out |= std::uint64_t{1} << w;
    return out;
  }
  bool up_closed(std::uint64_t a) const {
    for (std::size_t w = 0; w < n_; ++w)
      if ((a >> w & 1) && (up_[w] & ~a)) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> up_;
  std::vector<std::vector<std::uint64_t>> box_, dia_;
};

/// Heredity over the same formula closure as FormulaClosure, for frames of ≤ 16 states.
inline ClaimResult small_heredity(const PreparedFrame& pf, const Valuation& v, const ClosureOptions& opt) {
  MaskAlgebra alg(pf, opt.groups);
  enum Op : std::uint8_t { kAtom, kTop, kBot, kImp, kOr, kAnd, kBox, kDia };
  struct Node {
    std::uint64_t set;
    Op op;
    std::uint32_t a, b;
  };
  std::vector<Node> nodes;
  std::vector<std::uint64_t> seen(((std::size_t{1} << alg.size()) + 63) / 64, 0);
  std::uint64_t full = alg.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << alg.size()) - 1;
  std::function<Formula(std::uint32_t)> build = [&](std::uint32_t k) -> Formula {
    const Node& x = nodes[k];
    switch (x.op) {
      case kAtom: return Formula::atom(opt.atoms[x.a]);
      case kTop: return Formula::top();
      case kBot: return Formula::bot();
      case kImp: return Formula::implies(build(x.a), build(x.b));
      case kOr: return Formula::disj(build(x.a), build(x.b));
      case kAnd: return Formula::conj(build(x.a), build(x.b));
      case kBox: return Formula::box(opt.groups[x.b], build(x.a));
      case kDia: return Formula::dia(opt.groups[x.b], build(x.a));
    }
    return Formula::top();
  };
  ClaimResult res;
  // Returns false once a set fails the check.
  auto add = [&](std::uint64_t set, Op op, std::uint32_t a, std::uint32_t b) {
    if (seen[set / 64] >> (set % 64) & 1) return true;
    seen[set / 64] |= std::uint64_t{1} << (set % 64);
    nodes.push_back({set, op, a, b});
    if (alg.up_closed(set)) return true;
    res.ok = false;
    res.witness = build(static_cast<std::uint32_t>(nodes.size() - 1));
    res.detail = "truth set " + StateSet::from_mask(alg.size(), set).to_string() + " is not closed";
    return false;
  };
  auto finish = [&] {
    res.tuples = nodes.size();
    return res;
  };
  for (std::uint32_t i = 0; i < opt.atoms.size(); ++i) {
    auto it = v.find(opt.atoms[i]);
    if (!add(it == v.end() ? 0 : it->second.to_mask(), kAtom, i, 0)) return finish();
  }
  if (opt.constants && (!add(full, kTop, 0, 0) || !add(0, kBot, 0, 0))) return finish();
  std::size_t frontier = 0;
  for (std::size_t d = 1; d <= opt.depth; ++d) {
    const std::uint32_t end = static_cast<std::uint32_t>(nodes.size());
    for (std::uint32_t i = 0; i < end; ++i)
      for (std::uint32_t j = 0; j < end; ++j) {
        if (i < frontier && j < frontier) continue;
        std::uint64_t x = nodes[i].set, y = nodes[j].set;
        if (!add(alg.implies(x, y), kImp, i, j) || !add(x | y, kOr, i, j) || !add(x & y, kAnd, i, j)) return finish();
      }
    for (std::uint32_t i = frontier; i < end; ++i)
      for (std::uint32_t g = 0; g < opt.groups.size(); ++g) {
        if (!add(alg.box(g, nodes[i].set), kBox, i, g)) return finish();
        if (opt.diamonds && !add(alg.dia(g, nodes[i].set), kDia, i, g)) return finish();
      }
    frontier = end;
  }
  return finish();
}

}  // namespace detail

/// Every truth set of a formula of bounded depth is ≤-closed.
inline ClaimResult check_heredity(std::shared_ptr<const PreparedFrame> pf, const Valuation& v, ClosureOptions opt) {
  const Frame& f = pf->frame();
  if (opt.groups.empty()) opt.groups = f.agents.groups();
  if (f.size() <= 16) return detail::small_heredity(*pf, v, opt);
  ModelAlgebra alg(std::move(pf), v);
  FormulaClosure c({&alg}, opt);
  ClaimResult res;
  auto bad = c.run([&](const FormulaClosure::Entry& e) { return is_up_closed(f.leq, e.sets[0]); });
  res.tuples = c.entries().size();
  if (bad) {
    res.ok = false;
    res.witness = bad->witness;
    res.detail = "truth set " + bad->sets[0].to_string() + " is not closed";
  }
  return res;
}

inline ClaimResult check_heredity(const Model& m, ClosureOptions opt) {
  return check_heredity(std::make_shared<const PreparedFrame>(m.frame), m.val, std::move(opt));
}

/// Source model M and a product model M′ over W × B whose valuation is V × B.
/// The claim: T′(B) = T(B) × B for every formula of bounded depth.
class LiftChecker {
 public:
  LiftChecker(Frame src, Frame dst, std::size_t block) : block_(block) {
    if (src.size() * block != dst.size()) throw std::invalid_argument("carrier sizes do not match the block");
    src_ = std::make_shared<const PreparedFrame>(std::move(src));
    dst_ = std::make_shared<const PreparedFrame>(std::move(dst));
  }

  ClaimResult check(const Valuation& v, ClosureOptions opt, DiamondSemantics sem = DiamondSemantics::kPrenosil) const {
    if (opt.groups.empty()) opt.groups = src_->frame().agents.groups();
    ModelAlgebra a(src_, v, sem), b(dst_, detail::lift_valuation(v, block_), sem);
    FormulaClosure c({&a, &b}, opt);
    ClaimResult res;
    auto bad = c.run([&](const FormulaClosure::Entry& e) { return lift_set(e.sets[0], block_) == e.sets[1]; });
    res.tuples = c.entries().size();
    if (bad) {
      res.ok = false;
      res.witness = bad->witness;
      res.detail = "source " + bad->sets[0].to_string() + " vs target " + bad->sets[1].to_string();
    }
    return res;
  }

  const PreparedFrame& source() const { return *src_; }
  const PreparedFrame& target() const { return *dst_; }

 private:
  std::shared_ptr<const PreparedFrame> src_, dst_;
  std::size_t block_;
};

/// The three diamond clauses give identical truth sets (the frame must be forward confluent).
inline ClaimResult check_variant_agreement(const Model& m, ClosureOptions opt) {
  if (opt.groups.empty()) opt.groups = m.frame.agents.groups();
  auto pf = std::make_shared<const PreparedFrame>(m.frame);
  ModelAlgebra a(pf, m.val, DiamondSemantics::kPrenosil), b(pf, m.val, DiamondSemantics::kFischerServi),
      c(pf, m.val, DiamondSemantics::kWijesekera);
  FormulaClosure cl({&a, &b, &c}, opt);
  ClaimResult res;
  auto bad = cl.run([](const FormulaClosure::Entry& e) { return e.sets[0] == e.sets[1] && e.sets[1] == e.sets[2]; });
  res.tuples = cl.entries().size();
  if (bad) {
    res.ok = false;
    res.witness = bad->witness;
    res.detail = "prenosil " + bad->sets[0].to_string() + ", fischer_servi " + bad->sets[1].to_string() +
                 ", wijesekera " + bad->sets[2].to_string();
  }
  return res;
}

/// For diamond-free B over the single group α: T(B) in the multi-agent model equals
/// T(τ(B)) in the mono-modal model, state by state.
inline ClaimResult check_tau_claim(const Model& multi, const MonoModel& mono, Group alpha, std::size_t depth,
                                   std::vector<std::string> atom_names = {"p"}) {
  if (multi.size() != mono.structure.size()) throw std::invalid_argument("carriers differ");
  ModelAlgebra a(std::make_shared<const PreparedFrame>(multi.frame), multi.val);
  MonoAlgebra b(mono);
  ClosureOptions opt{std::move(atom_names), {alpha}, depth, true, false};
  FormulaClosure c({&a, &b}, opt);
  ClaimResult res;
  auto bad = c.run([](const FormulaClosure::Entry& e) { return e.sets[0] == e.sets[1]; });
  res.tuples = c.entries().size();
  if (bad) {
    res.ok = false;
    res.witness = bad->witness;
    res.detail = "multi " + bad->sets[0].to_string() + " vs mono " + bad->sets[1].to_string();
  }
  return res;
}

/// For every t and every x in the block: the first projections of the dst-successors of
/// (t,x) are exactly the src-successors of t.
inline bool projects_onto(const Rel& dst, const Rel& src, std::size_t block) {
  const std::size_t n = src.size();
  if (dst.size() != n * block) return false;
  // Whether any of the bits [lo, hi) is set.
  auto any_in = [](std::span<const Word> w, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo / kWordBits; i * kWordBits < hi; ++i) {
      Word m = ~Word{0};
      if (i == lo / kWordBits) m &= ~Word{0} << (lo % kWordBits);
      if ((i + 1) * kWordBits > hi) m &= ~Word{0} >> ((i + 1) * kWordBits - hi);
      if (w[i] & m) return true;
    }
    return false;
  };
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t x = 0; x < block; ++x) {
      auto row = dst.row_words(t * block + x);
      for (std::size_t s = 0; s < n; ++s)
        if (any_in(row, s * block, (s + 1) * block) != src.contains(t, s)) return false;
    }
  return true;
}

/// witness_h yields an R′(α)-successor whenever t R(α) u, and R′(α) projects onto R(α).
inline ClaimResult check_standardize_relations(const Model& src, const Model& out, PiVariant variant) {
  ClaimResult res;
  const Frame& f = src.frame;
  IFunctionSpace I(f.size(), f.agents);
  PiTable pi(f, variant);
  const std::size_t ni = I.size();
  for (auto alpha : f.agents.groups()) {
    if (!projects_onto(out.frame.r(alpha), f.r(alpha), ni)) {
      res.ok = false;
      res.detail = "R'(" + f.agents.group_key(alpha) + ") does not project onto R";
      return res;
    }
    for (auto [t, u] : f.r(alpha).pairs())
      for (std::size_t g = 0; g < ni; ++g) {
        std::size_t h = witness_h(src, pi, alpha, t, u, g);
        ++res.tuples;
        if (!standard_related(I, f.agents, pi, alpha, t, g, u, h) || !out.frame.r(alpha).contains(t * ni + g, u * ni + h)) {
          res.ok = false;
          res.detail = "witness_h fails at alpha=" + f.agents.group_key(alpha) + " t=" + std::to_string(t) +
                       " u=" + std::to_string(u) + " g=" + std::to_string(g);
          return res;
        }
      }
  }
  return res;
}

/// The reachability claims of the partition lift: the witness pair realises every
/// t ≤′ u R′(α) v, and ≤″∘R″(α), ≥″∘R″(α) project onto ≤′∘R′(α), ≥′∘R′(α).
inline ClaimResult check_partition_relations(const Model& src, const Model& out, LiftVariant variant) {
  ClaimResult res;
  const Frame& f = src.frame;
  JFunctionSpace J(f, out.size());
  const std::size_t nj = J.size();
  Rel geq = f.leq.converse(), geq2 = out.frame.leq.converse();
  for (auto alpha : f.agents.groups()) {
    if (!projects_onto(compose(out.frame.leq, out.frame.r(alpha)), compose(f.leq, f.r(alpha)), nj) ||
        !projects_onto(compose(geq2, out.frame.r(alpha)), compose(geq, f.r(alpha)), nj)) {
      res.ok = false;
      res.detail = "reachability projection fails for " + f.agents.group_key(alpha);
      return res;
    }
    for (auto [u, v] : f.r(alpha).pairs()) {
      auto [h, i] = partition_witness(f, J, variant, alpha, u, v);
      ++res.tuples;
      bool ok = out.frame.r(alpha).contains(u * nj + h, v * nj + i);
      for (std::size_t t = 0; t < f.size() && ok; ++t)
        if (f.leq.contains(t, u) || geq.contains(t, u))
          for (std::size_t g = 0; g < nj && ok; ++g) {
            bool up = f.leq.contains(t, u) && out.frame.leq.contains(t * nj + g, u * nj + h);
            bool down = geq.contains(t, u) && geq2.contains(t * nj + g, u * nj + h);
            ok = up || down;
          }
      if (!ok) {
        res.ok = false;
        res.detail = "witness pair fails at alpha=" + f.agents.group_key(alpha) + " u=" + std::to_string(u) +
                     " v=" + std::to_string(v);
        return res;
      }
    }
  }
  return res;
}

}  // namespace ieml
