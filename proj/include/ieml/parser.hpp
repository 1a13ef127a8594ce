#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ieml/agents.hpp"
#include "ieml/formula.hpp"

namespace ieml {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

inline bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }

/// Recursive-descent parser. Precedence from loosest: <->, -> (both right-assoc), \/, /\, unary.
/// `read_label` consumes the text between the brackets of a modality and returns its label.
template <class Label>
class Parser {
 public:
  using LabelReader = std::function<Label(std::string_view, std::size_t)>;

  Parser(std::string_view text, LabelReader read_label, bool allow_diamond)
      : s_(text), read_label_(std::move(read_label)), allow_diamond_(allow_diamond) {}

  BasicFormula<Label> parse_all() {
    auto f = parse_iff();
    skip();
    if (pos_ != s_.size()) fail("unexpected input");
    return f;
  }

 private:
  using F = BasicFormula<Label>;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip();
    return s_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  F parse_iff() {
    auto lhs = parse_implies();
    if (accept("<->")) {
      auto rhs = parse_iff();
      return F::iff(lhs, rhs);
    }
    return lhs;
  }

  F parse_implies() {
    auto lhs = parse_or();
    if (!peek("<->") && accept("->")) {
      auto rhs = parse_implies();
      return F::implies(lhs, rhs);
    }
    return lhs;
  }

  F parse_or() {
    auto f = parse_and();
    while (accept("\\/")) f = F::disj(f, parse_and());
    return f;
  }

  F parse_and() {
    auto f = parse_unary();
    while (accept("/\\")) f = F::conj(f, parse_unary());
    return f;
  }

  F parse_unary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '~') {
      ++pos_;
      return F::neg(parse_unary());
    }
    if (c == '[') {
      ++pos_;
      Label l = label_until(']');
      return F::box(l, parse_unary());
    }
    if (c == '<' && !peek("<->")) {
      if (!allow_diamond_) fail("diamond not allowed here");
      ++pos_;
      Label l = label_until('>');
      if constexpr (LabelTraits<Label>::has_diamond) {
        return F::dia(l, parse_unary());
      } else {
        fail("diamond not allowed here");
      }
    }
    if (c == '(') {
      ++pos_;
      auto f = parse_iff();
      expect(")");
      return f;
    }
    if (c == 'T' && !(pos_ + 1 < s_.size() && ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return F::top();
    }
    if (c == 'F' && !(pos_ + 1 < s_.size() && ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return F::bot();
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
      return F::atom(std::string(s_.substr(start, pos_ - start)));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Label label_until(char close) {
    std::size_t start = pos_;
    auto end = s_.find(close, pos_);
    if (end == std::string_view::npos) fail(std::string("missing '") + close + "'");
    auto inner = s_.substr(start, end - start);
    Label l = read_label_(inner, start);
    pos_ = end + 1;
    return l;
  }

  std::string_view s_;
  LabelReader read_label_;
  bool allow_diamond_;
  std::size_t pos_ = 0;
};

inline std::string trim(std::string_view v) {
  std::size_t b = 0, e = v.size();
  while (b < e && std::isspace(static_cast<unsigned char>(v[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(v[e - 1]))) --e;
  return std::string(v.substr(b, e - b));
}

inline std::vector<std::string> split_names(std::string_view inner, std::size_t pos) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = inner.find(',', start);
    auto piece = trim(inner.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (piece.empty() || !ident_start(piece[0]) ||
        !std::all_of(piece.begin(), piece.end(), [](char c) { return ident_char(c); }))
      throw ParseError("bad agent name '" + piece + "'", pos + start);
    out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline Formula parse(std::string_view text, const AgentSet& agents) {
  auto reader = [&agents](std::string_view inner, std::size_t pos) {
    std::uint32_t m = 0;
    for (const auto& n : detail::split_names(inner, pos)) {
      auto idx = agents.index_of(n);
      if (!idx) throw ParseError("unknown agent '" + n + "'", pos);
      m |= std::uint32_t{1} << *idx;
    }
    return Group{m};
  };
  return detail::Parser<Group>(text, reader, true).parse_all();
}

/// Agent names found in modalities, sorted; {"a"} if there are none.
inline AgentSet infer_agents(std::string_view text) {
  std::set<std::string> found;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    bool open = c == '[' || (c == '<' && text.substr(i, 3) != "<->");
    if (!open) {
      ++i;
      continue;
    }
    char close = c == '[' ? ']' : '>';
    auto end = text.find(close, i + 1);
    if (end == std::string_view::npos) break;
    auto inner = text.substr(i + 1, end - i - 1);
    std::size_t start = 0;
    while (start <= inner.size()) {
      auto comma = inner.find(',', start);
      if (comma == std::string_view::npos) comma = inner.size();
      auto n = detail::trim(inner.substr(start, comma - start));
      if (!n.empty()) found.insert(n);
      start = comma + 1;
    }
    i = end + 1;
  }
  if (found.empty()) return AgentSet({"a"});
  if (found.size() > kMaxAgents) throw ParseError("too many agents", 0);
  return AgentSet(std::vector<std::string>(found.begin(), found.end()));
}

inline Formula parse_inferring_agents(std::string_view text, AgentSet* agents_out = nullptr) {
  AgentSet ag = infer_agents(text);
  if (agents_out) *agents_out = ag;
  return parse(text, ag);
}

/// Mono-modal syntax: "[]A"; no diamonds.
inline BoxFormula parse_box(std::string_view text) {
  auto reader = [](std::string_view inner, std::size_t pos) {
    if (!detail::trim(inner).empty()) throw ParseError("box takes no label", pos);
    return NoLabel{};
  };
  return detail::Parser<NoLabel>(text, reader, false).parse_all();
}

/// Schema syntax: group labels are α, β or α∪β.
inline SchemaBody parse_schema(std::string_view text) {
  auto reader = [](std::string_view inner, std::size_t pos) {
    auto t = detail::trim(inner);
    if (t == "α") return kAlpha;
    if (t == "β") return kBeta;
    if (t == "α∪β") return kAlphaBeta;
    throw ParseError("bad group metavariable '" + t + "'", pos);
  };
  return detail::Parser<GroupVar>(text, reader, true).parse_all();
}

namespace detail {

enum Level { kLevelImplies = 1, kLevelOr = 2, kLevelAnd = 3, kLevelUnary = 4 };

template <class Label, class LabelText>
void render_into(std::string& out, const BasicFormula<Label>& f, int need, const LabelText& label_text) {
  auto level = [](const BasicFormula<Label>& g) {
    switch (g.op()) {
      case Op::kImplies:
        return g.rhs().op() == Op::kBot ? static_cast<int>(kLevelUnary) : static_cast<int>(kLevelImplies);
      case Op::kOr:
        return static_cast<int>(kLevelOr);
      case Op::kAnd:
        return static_cast<int>(kLevelAnd);
      default:
        return static_cast<int>(kLevelUnary);
    }
  };
  bool paren = level(f) < need;
  if (paren) out += '(';
  switch (f.op()) {
    case Op::kAtom:
      out += f.name();
      break;
    case Op::kTop:
      out += 'T';
      break;
    case Op::kBot:
      out += 'F';
      break;
    case Op::kImplies:
      if (f.rhs().op() == Op::kBot) {
        out += '~';
        render_into(out, f.lhs(), kLevelUnary, label_text);
      } else {
        render_into(out, f.lhs(), kLevelOr, label_text);
        out += " -> ";
        render_into(out, f.rhs(), kLevelImplies, label_text);
      }
      break;
    case Op::kOr:
      render_into(out, f.lhs(), kLevelOr, label_text);
      out += " \\/ ";
      render_into(out, f.rhs(), kLevelAnd, label_text);
      break;
    case Op::kAnd:
      render_into(out, f.lhs(), kLevelAnd, label_text);
      out += " /\\ ";
      render_into(out, f.rhs(), kLevelUnary, label_text);
      break;
    case Op::kBox:
      out += '[';
      out += label_text(f.label());
      out += ']';
      render_into(out, f.body(), kLevelUnary, label_text);
      break;
    case Op::kDia:
      out += '<';
      out += label_text(f.label());
      out += '>';
      render_into(out, f.body(), kLevelUnary, label_text);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline std::string render(const Formula& f, const AgentSet& agents) {
  std::string out;
  detail::render_into(out, f, detail::kLevelImplies, [&agents](Group g) { return agents.group_key(g); });
  return out;
}

inline std::string render(const BoxFormula& f) {
  std::string out;
  detail::render_into(out, f, detail::kLevelImplies, [](NoLabel) { return std::string(); });
  return out;
}

inline std::string render(const SchemaBody& f) {
  std::string out;
  detail::render_into(out, f, detail::kLevelImplies, [](GroupVar g) {
    return std::string(g.mask == 1 ? "α" : g.mask == 2 ? "β" : "α∪β");
  });
  return out;
}

}  // namespace ieml
