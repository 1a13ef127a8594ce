#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "ieml/agents.hpp"

namespace ieml {

enum class Op : std::uint8_t { kAtom, kTop, kBot, kImplies, kOr, kAnd, kBox, kDia };

inline bool is_binary(Op op) { return op == Op::kImplies || op == Op::kOr || op == Op::kAnd; }
inline bool is_modal(Op op) { return op == Op::kBox || op == Op::kDia; }

/// Label of the single box in mono-modal formulas.
struct NoLabel {
  friend bool operator==(NoLabel, NoLabel) { return true; }
  friend std::strong_ordering operator<=>(NoLabel, NoLabel) { return std::strong_ordering::equal; }
};

/// Group metavariable of a schema: bit 0 is α, bit 1 is β; 3 is α∪β.
struct GroupVar {
  std::uint8_t mask = 1;
  friend bool operator==(GroupVar, GroupVar) = default;
  friend auto operator<=>(GroupVar, GroupVar) = default;
};

inline constexpr GroupVar kAlpha{1};
inline constexpr GroupVar kBeta{2};
inline constexpr GroupVar kAlphaBeta{3};

template <class L>
struct LabelTraits;

template <>
struct LabelTraits<Group> {
  static constexpr bool has_diamond = true;
  static std::size_t hash(Group g) { return g.mask; }
};
template <>
struct LabelTraits<NoLabel> {
  static constexpr bool has_diamond = false;
  static std::size_t hash(NoLabel) { return 0; }
};
template <>
struct LabelTraits<GroupVar> {
  static constexpr bool has_diamond = true;
  static std::size_t hash(GroupVar g) { return g.mask; }
};

/// Immutable formula tree with shared subterms, cached hash and depth.
template <class Label>
class BasicFormula {
 public:
  using label_type = Label;

  BasicFormula() : BasicFormula(top()) {}

  static BasicFormula atom(std::string name) {
    if (name.empty()) throw std::invalid_argument("empty atom name");
    return make(Op::kAtom, std::move(name), Label{}, nullptr, nullptr);
  }
  static BasicFormula top() {
    static const BasicFormula t = make(Op::kTop, {}, Label{}, nullptr, nullptr);
    return t;
  }
  static BasicFormula bot() {
    static const BasicFormula b = make(Op::kBot, {}, Label{}, nullptr, nullptr);
    return b;
  }
  static BasicFormula implies(const BasicFormula& a, const BasicFormula& b) { return binary(Op::kImplies, a, b); }
  static BasicFormula disj(const BasicFormula& a, const BasicFormula& b) { return binary(Op::kOr, a, b); }
  static BasicFormula conj(const BasicFormula& a, const BasicFormula& b) { return binary(Op::kAnd, a, b); }
  static BasicFormula box(Label l, const BasicFormula& a) { return make(Op::kBox, {}, l, a.node_, nullptr); }
  static BasicFormula dia(Label l, const BasicFormula& a) {
    static_assert(LabelTraits<Label>::has_diamond, "no diamond in this language");
    return make(Op::kDia, {}, l, a.node_, nullptr);
  }
  static BasicFormula neg(const BasicFormula& a) { return implies(a, bot()); }
  static BasicFormula iff(const BasicFormula& a, const BasicFormula& b) {
    return conj(implies(a, b), implies(b, a));
  }

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  const Label& label() const { return node_->label; }
  BasicFormula lhs() const { return BasicFormula(node_->lhs); }
  BasicFormula rhs() const { return BasicFormula(node_->rhs); }
  /// Operand of a modal node.
  BasicFormula body() const { return BasicFormula(node_->lhs); }

  std::size_t depth() const { return node_->depth; }
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const BasicFormula& a, const BasicFormula& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    return compare(*a.node_, *b.node_) == 0;
  }

  friend std::strong_ordering operator<=>(const BasicFormula& a, const BasicFormula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    return compare(*a.node_, *b.node_);
  }

 private:
  struct Node {
    Op op;
    std::string name;
    Label label;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t hash = 0;
    std::size_t depth = 0;
    std::size_t size = 1;
  };

  explicit BasicFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static BasicFormula binary(Op op, const BasicFormula& a, const BasicFormula& b) {
    return make(op, {}, Label{}, a.node_, b.node_);
  }

  static BasicFormula make(Op op, std::string name, Label l, std::shared_ptr<const Node> lhs,
                           std::shared_ptr<const Node> rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->name = std::move(name);
    n->label = l;
    std::size_t h = std::hash<int>{}(static_cast<int>(op)) * 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(std::hash<std::string>{}(n->name));
    mix(LabelTraits<Label>::hash(l));
    if (lhs) {
      mix(lhs->hash);
      n->depth = lhs->depth + 1;
      n->size += lhs->size;
    }
    if (rhs) {
      mix(rhs->hash);
      n->depth = std::max(n->depth, rhs->depth + 1);
      n->size += rhs->size;
    }
    n->hash = h;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return BasicFormula(std::shared_ptr<const Node>(std::move(n)));
  }

  static std::strong_ordering compare(const Node& a, const Node& b) {
    if (&a == &b) return std::strong_ordering::equal;
    if (auto c = a.op <=> b.op; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.label <=> b.label; c != 0) return c;
    if (a.lhs) {
      if (auto c = compare(*a.lhs, *b.lhs); c != 0) return c;
    }
    if (a.rhs) {
      if (auto c = compare(*a.rhs, *b.rhs); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::shared_ptr<const Node> node_;
};

using Formula = BasicFormula<Group>;
using BoxFormula = BasicFormula<NoLabel>;
using SchemaBody = BasicFormula<GroupVar>;

template <class L>
struct FormulaHash {
  std::size_t operator()(const BasicFormula<L>& f) const { return f.hash(); }
};

}  // namespace ieml
