#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ieml/parser.hpp"
#include "ieml/schemas.hpp"
#include "ieml/search.hpp"
#include "ieml/syntax.hpp"

namespace ieml {

enum class JustKind { kAxiom, kMP, kR1, kR2, kR3, kSub };

inline std::string_view name(JustKind k) {
  switch (k) {
    case JustKind::kAxiom: return "axiom";
    case JustKind::kMP: return "mp";
    case JustKind::kR1: return "r1";
    case JustKind::kR2: return "r2";
    case JustKind::kR3: return "r3";
    case JustKind::kSub: return "sub";
  }
  return "?";
}

inline std::optional<JustKind> parse_just_kind(std::string_view s) {
  for (auto k : {JustKind::kAxiom, JustKind::kMP, JustKind::kR1, JustKind::kR2, JustKind::kR3, JustKind::kSub})
    if (name(k) == s) return k;
  return std::nullopt;
}

/// Line references are 1-based. For mp, `i` is the antecedent line and `j` the implication.
struct Justification {
  JustKind kind = JustKind::kAxiom;
  std::string schema;
  std::optional<Group> alpha, beta;
  std::size_t i = 0, j = 0;
  std::optional<Group> group;
  Substitution<Group> sigma;

  friend bool operator==(const Justification&, const Justification&) = default;
};

struct Line {
  Formula formula;
  Justification just;
  friend bool operator==(const Line&, const Line&) = default;
};

struct Derivation {
  AgentSet agents;
  std::vector<Line> lines;
};

struct LineEvidence {
  std::size_t line;
  std::string evidence;
  friend bool operator==(const LineEvidence&, const LineEvidence&) = default;
};

struct Certificate {
  LogicId logic;
  std::string basis{kIplBasis};
  AgentSet agents;
  std::vector<Line> lines;
  std::vector<LineEvidence> evidence;

  const Formula& theorem() const { return lines.back().formula; }
  friend bool operator==(const Certificate& a, const Certificate& b) {
    return a.logic == b.logic && a.basis == b.basis && a.agents == b.agents && a.lines == b.lines &&
           a.evidence == b.evidence;
  }
};

struct Rejection {
  std::size_t line;  // 1-based
  std::string reason;
};

using CheckResult = std::variant<Certificate, Rejection>;

namespace detail {

struct LineChecker {
  const Derivation& d;
  LogicId logic;
  std::set<std::string> allowed = logic_schemas(logic);

  std::string grp(Group g) const { return "[" + d.agents.group_key(g) + "]"; }
  std::string show(const Formula& f) const { return render(f, d.agents); }

  const Formula& earlier(std::size_t ref, std::size_t current) const {
    if (ref == 0 || ref >= current) throw std::runtime_error("bad line reference " + std::to_string(ref));
    return d.lines[ref - 1].formula;
  }

  // Returns evidence text or throws runtime_error with the reason.
  std::string check(std::size_t at) const {
    const Line& ln = d.lines[at - 1];
    const Formula& f = ln.formula;
    for (auto g : groups_of(f))
      if (!d.agents.valid(g)) throw std::runtime_error("group outside the agent set");
    const Justification& j = ln.just;
    switch (j.kind) {
      case JustKind::kAxiom: {
        const Schema* s = find_schema(j.schema);
        if (!s) throw std::runtime_error("unknown schema " + j.schema);
        if (!allowed.count(s->id)) throw std::runtime_error("schema " + s->id + " not in " + std::string(name(logic)));
        auto m = match_instance(s->body, f, GroupBinding{j.alpha, j.beta});
        if (!m) throw std::runtime_error("not an instance of " + s->id);
        std::string ev = s->id;
        if (m->groups.alpha) ev += " α=" + d.agents.group_key(*m->groups.alpha);
        if (m->groups.beta) ev += " β=" + d.agents.group_key(*m->groups.beta);
        for (const auto& [p, a] : m->subst) ev += " " + p + ":=" + show(a);
        return ev;
      }
      case JustKind::kMP: {
        const Formula& a = earlier(j.i, at);
        const Formula& ab = earlier(j.j, at);
        if (ab.op() != Op::kImplies || !(ab.lhs() == a))
          throw std::runtime_error("line " + std::to_string(j.j) + " is not an implication from line " + std::to_string(j.i));
        if (!(ab.rhs() == f)) throw std::runtime_error("modus ponens yields " + show(ab.rhs()));
        return "mp " + std::to_string(j.i) + "," + std::to_string(j.j);
      }
      case JustKind::kR1:
      case JustKind::kR2: {
        const Formula& prem = earlier(j.i, at);
        if (prem.op() != Op::kImplies) throw std::runtime_error("premise is not an implication");
        Op mod = j.kind == JustKind::kR1 ? Op::kBox : Op::kDia;
        if (f.op() != Op::kImplies || f.lhs().op() != mod || f.rhs().op() != mod ||
            !(f.lhs().label() == f.rhs().label()))
          throw std::runtime_error("conclusion has the wrong shape");
        Group g = f.lhs().label();
        if (j.group && !(*j.group == g)) throw std::runtime_error("conclusion uses a different group");
        auto make = [&](const Formula& x) { return mod == Op::kBox ? Formula::box(g, x) : Formula::dia(g, x); };
        if (!(f == Formula::implies(make(prem.lhs()), make(prem.rhs())))) throw std::runtime_error("conclusion does not match premise");
        return std::string(name(j.kind)) + " " + std::to_string(j.i) + " " + grp(g);
      }
      case JustKind::kR3: {
        // ⟨α⟩A → B ∨ [α](A → C)  /  ⟨α⟩A → B ∨ ⟨α⟩C
        const Formula& prem = earlier(j.i, at);
        auto shape = std::runtime_error("premise is not of the form <a>A -> B \\/ [a](A -> C)");
        if (prem.op() != Op::kImplies || prem.lhs().op() != Op::kDia || prem.rhs().op() != Op::kOr) throw shape;
        Group g = prem.lhs().label();
        const Formula& a = prem.lhs().body();
        const Formula& b = prem.rhs().lhs();
        const Formula& bx = prem.rhs().rhs();
        if (bx.op() != Op::kBox || !(bx.label() == g) || bx.body().op() != Op::kImplies || !(bx.body().lhs() == a)) throw shape;
        if (j.group && !(*j.group == g)) throw std::runtime_error("premise uses a different group");
        const Formula& c = bx.body().rhs();
        Formula want = Formula::implies(Formula::dia(g, a), Formula::disj(b, Formula::dia(g, c)));
        if (!(f == want)) throw std::runtime_error("conclusion does not match premise");
        return "r3 " + std::to_string(j.i) + " " + grp(g);
      }
      case JustKind::kSub: {
        const Formula& prem = earlier(j.i, at);
        for (const auto& [p, a] : j.sigma)
          for (auto g : groups_of(a))
            if (!d.agents.valid(g)) throw std::runtime_error("substitution uses a group outside the agent set");
        if (!(substitute(prem, j.sigma) == f)) throw std::runtime_error("not the substitution instance of line " + std::to_string(j.i));
        std::string ev = "sub " + std::to_string(j.i);
        for (const auto& [p, a] : j.sigma) ev += " " + p + ":=" + show(a);
        return ev;
      }
    }
    throw std::runtime_error("unknown justification");
  }
};

}  // namespace detail

/// Accepts iff every line is justified; otherwise reports the first failing line.
inline CheckResult check_derivation(const Derivation& d, LogicId logic) {
  if (d.lines.empty()) return Rejection{0, "empty derivation"};
  detail::LineChecker lc{d, logic};
  Certificate cert{logic, std::string(kIplBasis), d.agents, d.lines, {}};
  for (std::size_t at = 1; at <= d.lines.size(); ++at) {
    try {
      cert.evidence.push_back(LineEvidence{at, lc.check(at)});
    } catch (const std::runtime_error& e) {
      return Rejection{at, e.what()};
    }
  }
  return cert;
}

/// Re-checks the lines recorded in a certificate and compares the outcome.
inline bool replay(const Certificate& c) {
  auto r = check_derivation(Derivation{c.agents, c.lines}, c.logic);
  const auto* again = std::get_if<Certificate>(&r);
  return again && *again == c;
}

struct ProbeReport {
  std::size_t frames_checked = 0;
  std::optional<Countermodel> countermodel;
  bool ok() const { return !countermodel.has_value(); }
};

/// Searches the frames of l's class (standard ones for D-variants) for a falsifying model.
inline ProbeReport soundness_probe(const Formula& theorem, const AgentSet& agents, LogicId l, const SizeBudget& b) {
  FrameClass base = logic_class(l);
  FrameClass space = base;
  std::function<bool(const Frame&)> keep;
  if (is_distributed(l)) {
    if (base == FrameClass::kAll) space = FrameClass::kStandard;
    else keep = [](const Frame& f) { return has_class(f, FrameClass::kStandard); };
  }
  ProbeReport rep;
  std::size_t checked = 0;
  for_each_frame(b, agents, space, [&](const Frame& f) {
    if (keep && !keep(f)) return true;
    ++checked;
    if (auto w = find_falsifying_valuation(f, theorem, b.valuation_cap)) {
      rep.countermodel = Countermodel{Model{f, w->first}, w->second, checked};
      return false;
    }
    return true;
  });
  rep.frames_checked = checked;
  return rep;
}

}  // namespace ieml
