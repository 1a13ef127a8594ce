#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ieml/frame.hpp"
#include "ieml/frame_classes.hpp"
#include "ieml/formula.hpp"
#include "ieml/syntax.hpp"

namespace ieml {

/// Clause used for ⟨α⟩; all other clauses are shared.
///   Prenosil:     some v ≤ s has an R(α)-successor satisfying A
///   FischerServi: s itself has an R(α)-successor satisfying A
///   Wijesekera:   every t ≥ s has an R(α)-successor satisfying A
enum class DiamondSemantics { kPrenosil, kFischerServi, kWijesekera };

inline std::string_view name(DiamondSemantics d) {
  switch (d) {
    case DiamondSemantics::kPrenosil: return "prenosil";
    case DiamondSemantics::kFischerServi: return "fischer_servi";
    case DiamondSemantics::kWijesekera: return "wijesekera";
  }
  return "?";
}

/// Operations on truth sets over a fixed carrier.
class TruthAlgebra {
 public:
  virtual ~TruthAlgebra() = default;
  virtual std::size_t size() const = 0;
  virtual StateSet atom(const std::string& p) const = 0;
  virtual StateSet implies(const StateSet& a, const StateSet& b) const = 0;
  virtual StateSet box(Group g, const StateSet& a) const = 0;
  virtual StateSet dia(Group g, const StateSet& a) const = 0;

  StateSet top() const { return StateSet::full(size()); }
  StateSet bot() const { return StateSet(size()); }
  StateSet disj(const StateSet& a, const StateSet& b) const { return a | b; }
  StateSet conj(const StateSet& a, const StateSet& b) const { return a & b; }
};

/// Frame with pre-image indexes for ≤, ≥ and every R(α).
class PreparedFrame {
 public:
  explicit PreparedFrame(Frame f) : frame_(std::move(f)) {
    leq_ = IndexedRel(frame_.leq);
    geq_ = IndexedRel(frame_.leq.converse());
    rel_.reserve(frame_.rel.size());
    for (const auto& r : frame_.rel) rel_.emplace_back(r);
  }

  const Frame& frame() const { return frame_; }
  std::size_t size() const { return frame_.size(); }
  const IndexedRel& leq() const { return leq_; }
  const IndexedRel& geq() const { return geq_; }
  const IndexedRel& rel(Group g) const { return rel_.at(g.index()); }

  bool forward_confluent() const {
    if (!fc_) fc_ = has_class(frame_, FrameClass::kForwardConfluent);
    return *fc_;
  }

 private:
  Frame frame_;
  IndexedRel leq_, geq_;
  std::vector<IndexedRel> rel_;
  mutable std::optional<bool> fc_;
};

class ModelAlgebra : public TruthAlgebra {
 public:
  ModelAlgebra(std::shared_ptr<const PreparedFrame> pf, Valuation val,
               DiamondSemantics sem = DiamondSemantics::kPrenosil)
      : pf_(std::move(pf)), val_(std::move(val)), sem_(sem) {
    for (const auto& [p, u] : val_)
      if (u.size() != pf_->size()) throw std::invalid_argument("valuation of '" + p + "' has wrong size");
    if (sem_ == DiamondSemantics::kFischerServi && !pf_->forward_confluent())
      throw PreconditionError("fischer_servi semantics requires a forward confluent frame");
  }

  std::size_t size() const override { return pf_->size(); }
  StateSet atom(const std::string& p) const override {
    auto it = val_.find(p);
    return it == val_.end() ? StateSet(size()) : it->second;
  }
  StateSet implies(const StateSet& a, const StateSet& b) const override {
    return pf_->leq().box_pre(a.complement() | b);
  }
  StateSet box(Group g, const StateSet& a) const override {
    return pf_->leq().box_pre(pf_->rel(g).box_pre(a));
  }
  StateSet dia(Group g, const StateSet& a) const override {
    auto step = pf_->rel(g).dia_pre(a);
    switch (sem_) {
      case DiamondSemantics::kPrenosil: return pf_->geq().dia_pre(step);
      case DiamondSemantics::kFischerServi: return step;
      case DiamondSemantics::kWijesekera: return pf_->leq().box_pre(step);
    }
    return step;
  }

  const PreparedFrame& prepared() const { return *pf_; }
  const Valuation& valuation() const { return val_; }

 private:
  std::shared_ptr<const PreparedFrame> pf_;
  Valuation val_;
  DiamondSemantics sem_;
};

/// Mono-modal structure; □ quantifies over R-successors directly.
class MonoAlgebra : public TruthAlgebra {
 public:
  explicit MonoAlgebra(const MonoModel& m) : leq_(m.structure.leq), r_(m.structure.r), val_(m.val), n_(m.structure.size()) {}

  std::size_t size() const override { return n_; }
  StateSet atom(const std::string& p) const override {
    auto it = val_.find(p);
    return it == val_.end() ? StateSet(n_) : it->second;
  }
  StateSet implies(const StateSet& a, const StateSet& b) const override { return leq_.box_pre(a.complement() | b); }
  StateSet box(Group, const StateSet& a) const override { return r_.box_pre(a); }
  StateSet dia(Group, const StateSet&) const override {
    throw std::invalid_argument("mono-modal language has no diamond");
  }
  StateSet box(NoLabel, const StateSet& a) const { return r_.box_pre(a); }

 private:
  IndexedRel leq_, r_;
  Valuation val_;
  std::size_t n_;
};

/// Truth sets by structural recursion, memoized per distinct subformula.
template <class Label>
class BasicEvaluator {
 public:
  explicit BasicEvaluator(const TruthAlgebra& alg) : alg_(alg) {}

  const StateSet& truth_set(const BasicFormula<Label>& f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    StateSet v = compute(f);
    return memo_.emplace(f, std::move(v)).first->second;
  }

  bool satisfies(std::size_t s, const BasicFormula<Label>& f) {
    if (s >= alg_.size()) throw std::out_of_range("state out of range");
    return truth_set(f).test(s);
  }

 private:
  StateSet compute(const BasicFormula<Label>& f) {
    switch (f.op()) {
      case Op::kAtom: return alg_.atom(f.name());
      case Op::kTop: return alg_.top();
      case Op::kBot: return alg_.bot();
      case Op::kImplies: return alg_.implies(truth_set(f.lhs()), truth_set(f.rhs()));
      case Op::kOr: return alg_.disj(truth_set(f.lhs()), truth_set(f.rhs()));
      case Op::kAnd: return alg_.conj(truth_set(f.lhs()), truth_set(f.rhs()));
      case Op::kBox: return box(f.label(), truth_set(f.body()));
      case Op::kDia:
        if constexpr (LabelTraits<Label>::has_diamond) return alg_.dia(f.label(), truth_set(f.body()));
        break;
    }
    throw std::logic_error("evaluator: bad node");
  }

  StateSet box(Group g, const StateSet& x) { return alg_.box(g, x); }
  StateSet box(NoLabel, const StateSet& x) { return alg_.box(Group{1}, x); }

  const TruthAlgebra& alg_;
  std::unordered_map<BasicFormula<Label>, StateSet, FormulaHash<Label>> memo_;
};

using Evaluator = BasicEvaluator<Group>;
using MonoEvaluator = BasicEvaluator<NoLabel>;

namespace detail {
inline void check_groups(const Frame& f, const Formula& a) {
  for (auto g : groups_of(a))
    if (!f.agents.valid(g)) throw std::invalid_argument("formula mentions a group outside the frame's agents");
}
}  // namespace detail

inline StateSet truth_set(const Model& m, const Formula& a, DiamondSemantics sem = DiamondSemantics::kPrenosil) {
  detail::check_groups(m.frame, a);
  ModelAlgebra alg(std::make_shared<const PreparedFrame>(m.frame), m.val, sem);
  Evaluator ev(alg);
  return ev.truth_set(a);
}

inline bool satisfies(const Model& m, std::size_t s, const Formula& a) {
  if (s >= m.size()) throw std::out_of_range("state out of range");
  return truth_set(m, a).test(s);
}

inline bool satisfies_variant(const Model& m, std::size_t s, const Formula& a, DiamondSemantics v) {
  if (s >= m.size()) throw std::out_of_range("state out of range");
  return truth_set(m, a, v).test(s);
}

inline bool true_in_model(const Model& m, const Formula& a) { return truth_set(m, a).all(); }

inline StateSet mono_truth_set(const MonoModel& m, const BoxFormula& a) {
  MonoAlgebra alg(m);
  MonoEvaluator ev(alg);
  return ev.truth_set(a);
}

inline bool mono_satisfies(const MonoModel& m, std::size_t s, const BoxFormula& a) {
  return mono_truth_set(m, a).test(s);
}

inline constexpr std::size_t kDefaultValuationCap = std::size_t{1} << 20;

/// Calls `visit(valuation)` for every assignment of up-sets to `atom_names`, in odometer order
/// (last atom fastest); stops early when `visit` returns false.
template <class Visit>
void for_each_valuation(const Rel& leq, const std::vector<std::string>& atom_names, std::size_t cap, Visit&& visit) {
  auto ups = up_sets(leq, cap);
  std::size_t total = 1;
  for (std::size_t i = 0; i < atom_names.size(); ++i) {
    if (total > cap / ups.size()) throw BudgetExceeded("valuation count exceeds cap");
    total *= ups.size();
  }
  std::vector<std::size_t> idx(atom_names.size(), 0);
  while (true) {
    Valuation v;
    for (std::size_t i = 0; i < atom_names.size(); ++i) v.emplace(atom_names[i], ups[idx[i]]);
    if (!visit(v)) return;
    std::size_t k = atom_names.size();
    while (k > 0) {
      if (++idx[k - 1] < ups.size()) break;
      idx[k - 1] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

/// A valuation on the frame and a state where `a` fails, if one exists.
inline std::optional<std::pair<Valuation, std::size_t>> find_falsifying_valuation(
    const std::shared_ptr<const PreparedFrame>& pf, const Formula& a, std::size_t cap = kDefaultValuationCap) {
  const Frame& f = pf->frame();
  detail::check_groups(f, a);
  auto names = atoms(a);
  std::vector<std::string> atom_names(names.begin(), names.end());
  std::optional<std::pair<Valuation, std::size_t>> found;
  for_each_valuation(f.leq, atom_names, cap, [&](const Valuation& v) {
    ModelAlgebra alg(pf, v);
    Evaluator ev(alg);
    const auto& t = ev.truth_set(a);
    if (t.all()) return true;
    auto bad = t.complement().to_vector().front();
    found.emplace(v, bad);
    return false;
  });
  return found;
}

inline std::optional<std::pair<Valuation, std::size_t>> find_falsifying_valuation(
    const Frame& f, const Formula& a, std::size_t cap = kDefaultValuationCap) {
  detail::check_groups(f, a);
  return find_falsifying_valuation(std::make_shared<const PreparedFrame>(f), a, cap);
}

inline bool valid_in_frame(const Frame& f, const Formula& a, std::size_t cap = kDefaultValuationCap) {
  return !find_falsifying_valuation(f, a, cap).has_value();
}

}  // namespace ieml
