#pragma once

// Batteries for the propositions about validity, heredity and the model constructions.
// Each returns a PropResult; proposition_suite bundles them into one JSON report.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ieml/claims.hpp"
#include "ieml/constructions.hpp"
#include "ieml/io.hpp"
#include "ieml/schemas.hpp"
#include "ieml/search.hpp"

namespace ieml {

struct PropResult {
  std::string name;
  std::string status = "pass";  // pass | fail | vacuous | skipped
  std::size_t checked = 0;
  std::optional<std::size_t> vacuous;
  std::optional<std::size_t> skipped;
  std::vector<json> witnesses;

  bool failed() const { return status == "fail"; }
  void fail(json w) {
    status = "fail";
    witnesses.push_back(std::move(w));
  }
};

inline json to_json(const PropResult& r) {
  json j{{"name", r.name}, {"status", r.status}, {"checked", r.checked}, {"witnesses", r.witnesses}};
  if (r.vacuous) j["vacuous"] = *r.vacuous;
  if (r.skipped) j["skipped"] = *r.skipped;
  return j;
}

inline json witness_json(const Model& m, std::size_t state, const Formula& f) {
  return {{"model", to_json(m)}, {"state", m.frame.names[state]}, {"formula", render(f, m.frame.agents)}};
}

/// The frame class on which each of A1–A13 is claimed valid.
inline std::optional<FrameClass> axiom_class(std::string_view id) {
  static const std::map<std::string, FrameClass, std::less<>> table = {
      {"A1", FrameClass::kAll},  {"A2", FrameClass::kAll},       {"A3", FrameClass::kAll},
      {"A4", FrameClass::kAll},  {"A5", FrameClass::kAll},       {"A6", FrameClass::kDoxastic},
      {"A7", FrameClass::kEpistemic}, {"A8", FrameClass::kUd},   {"A9", FrameClass::kUd},
      {"A10", FrameClass::kUd},  {"A11", FrameClass::kUd},       {"A12", FrameClass::kPrestandard},
      {"A13", FrameClass::kPrestandard}};
  auto it = table.find(id);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

/// Instances of a schema over `ag` with its own metavariables as atoms: one per α,
/// or one per ordered pair (α, β) for the composite schemata.
inline std::vector<Formula> schema_instances(const Schema& s, const AgentSet& ag) {
  std::vector<Formula> out;
  auto groups = ag.groups();
  bool uses_beta = s.text.find("β") != std::string::npos;
  bool uses_alpha = s.text.find("α") != std::string::npos;
  if (!uses_alpha) return {instantiate(s.body, {}, {})};
  for (auto a : groups) {
    if (!uses_beta) {
      out.push_back(instantiate(s.body, GroupBinding{a, std::nullopt}, {}));
      continue;
    }
    for (auto b : groups) out.push_back(instantiate(s.body, GroupBinding{a, b}, {}));
  }
  return out;
}

/// Every instance of schema `id` is valid on every frame of class c within the budget.
inline PropResult axiom_validity(const std::string& id, FrameClass c, const AgentSet& ag, const SizeBudget& b) {
  PropResult res;
  res.name = id;
  const Schema* s = find_schema(id);
  if (!s) throw std::invalid_argument("unknown schema " + id);
  auto inst = schema_instances(*s, ag);
  for_each_frame(b, ag, c, [&](const Frame& f) {
    ++res.checked;
    auto pf = std::make_shared<const PreparedFrame>(f);
    for (const auto& a : inst)
      if (auto w = find_falsifying_valuation(pf, a, b.valuation_cap)) {
        res.fail(witness_json(Model{f, w->first}, w->second, a));
        return false;
      }
    return true;
  });
  return res;
}

/// First instance of schema `id` falsified on a frame outside its class.
inline std::optional<std::pair<Formula, Countermodel>> complement_countermodel(const std::string& id, const AgentSet& ag,
                                                                              const SizeBudget& b) {
  auto c = axiom_class(id);
  if (!c || *c == FrameClass::kAll) return std::nullopt;
  for (const auto& a : schema_instances(*find_schema(id), ag)) {
    auto cm = countermodel_where(a, ag, b, FrameClass::kAll, [&](const Frame& f) { return !has_class(f, *c); });
    if (cm) return std::make_pair(a, *cm);
  }
  return std::nullopt;
}

namespace detail {

inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atom_names,
                              const std::vector<Group>& groups, std::size_t depth) {
  if (depth == 0 || rng() % 4 == 0) {
    auto k = rng() % (atom_names.size() + 2);
    if (k == atom_names.size()) return Formula::top();
    if (k == atom_names.size() + 1) return Formula::bot();
    return Formula::atom(atom_names[k]);
  }
  auto sub = [&] { return random_formula(rng, atom_names, groups, depth - 1); };
  switch (rng() % 5) {
    case 0: return Formula::implies(sub(), sub());
    case 1: return Formula::disj(sub(), sub());
    case 2: return Formula::conj(sub(), sub());
    case 3: return Formula::box(groups[rng() % groups.size()], sub());
    default: return Formula::dia(groups[rng() % groups.size()], sub());
  }
}

/// A finite frame drawn from a mixture that favours empty, reflexive and ≤-contained relations.
inline Frame random_rule_frame(std::mt19937_64& rng, const AgentSet& ag, std::size_t max_states) {
  std::size_t n = 1 + rng() % max_states;
  const auto& pre = all_preorders(n);
  Rel leq = Rel::from_mask(n, pre[rng() % pre.size()]);
  std::vector<Rel> rel;
  for (std::size_t g = 0; g < ag.group_count(); ++g) {
    Rel r(n);
    switch (rng() % 5) {
      case 0: break;
      case 1: r = Rel::identity(n); break;
      default:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (rng() % 3 == 0) r.add(i, j);
    }
    if (rng() % 3 == 0) r &= leq;
    rel.push_back(std::move(r));
  }
  return Frame(ag, std::move(leq), std::move(rel));
}

struct RuleInstance {
  Formula premise, conclusion;
};

/// Premise shapes: IPL tautologies, random formulas, and schema instances that hold on
/// some frames only.
inline RuleInstance random_rule_instance(std::mt19937_64& rng, int rule, const AgentSet& ag, std::size_t depth) {
  const std::vector<std::string> at{"p", "q"};
  auto groups = ag.groups();
  Group g = groups[rng() % groups.size()];
  auto rf = [&] { return random_formula(rng, at, groups, depth); };
  if (rule == 3) {
    Formula a = rf(), b = rf(), c = rf();
    switch (rng() % 5) {
      case 0: b = Formula::dia(g, a); break;
      case 1: c = a; break;
      case 2: b = Formula::bot(); break;
      case 3: a = Formula::atom("p"), b = Formula::atom("q"), c = Formula::atom("p"); break;
      default: break;
    }
    Formula prem = Formula::implies(Formula::dia(g, a), Formula::disj(b, Formula::box(g, Formula::implies(a, c))));
    Formula concl = Formula::implies(Formula::dia(g, a), Formula::disj(b, Formula::dia(g, c)));
    return {prem, concl};
  }
  Formula a = rf(), b = rf();
  Formula prem = Formula::implies(a, b);
  switch (rng() % 6) {
    case 0: prem = Formula::implies(a, a); break;
    case 1: prem = Formula::implies(Formula::conj(a, b), a); break;
    case 2: prem = Formula::implies(a, Formula::disj(a, b)); break;
    case 3: {
      // A6 to A11 instances with a random body for p.
      static const char* ids[] = {"A6", "A8", "A9", "A10", "A11"};
      const Schema* s = find_schema(ids[rng() % 5]);
      prem = instantiate(s->body, GroupBinding{g, std::nullopt}, {{"p", a}});
      break;
    }
    default: break;
  }
  auto wrap = [&](const Formula& x) { return rule == 1 ? Formula::box(g, x) : Formula::dia(g, x); };
  return {prem, Formula::implies(wrap(prem.lhs()), wrap(prem.rhs()))};
}

}  // namespace detail

/// Rule r ∈ {1,2,3}: on `frames` seeded frames, no frame validates a premise while
/// falsifying its conclusion. A frame is vacuous when none of its premises is valid on it.
inline PropResult rule_preservation(int rule, const AgentSet& ag, const SizeBudget& b, std::size_t frames,
                                    std::size_t premises_per_frame = 8) {
  PropResult res;
  res.name = "R" + std::to_string(rule);
  std::mt19937_64 rng(b.seed * 1000003 + static_cast<std::uint64_t>(rule));
  std::size_t vacuous = 0;
  for (std::size_t i = 0; i < frames; ++i) {
    Frame f = detail::random_rule_frame(rng, ag, std::max<std::size_t>(1, b.max_states));
    auto pf = std::make_shared<const PreparedFrame>(f);
    bool any = false;
    for (std::size_t k = 0; k < premises_per_frame; ++k) {
      auto ri = detail::random_rule_instance(rng, rule, ag, std::min<std::size_t>(b.max_formula_depth, 2));
      if (find_falsifying_valuation(pf, ri.premise, b.valuation_cap)) continue;
      any = true;
      if (auto w = find_falsifying_valuation(pf, ri.conclusion, b.valuation_cap)) {
        json wj = witness_json(Model{f, w->first}, w->second, ri.conclusion);
        wj["premise"] = render(ri.premise, ag);
        res.fail(std::move(wj));
        break;
      }
    }
    ++res.checked;
    if (!any) ++vacuous;
    if (res.failed()) break;
  }
  res.vacuous = vacuous;
  if (!res.failed() && vacuous == res.checked) res.status = "vacuous";
  return res;
}

/// Heredity over frames within the budget; `valuations` random valuations per frame
/// (0 means every valuation of the atoms).
inline PropResult heredity_claim(const AgentSet& ag, const SizeBudget& b, const std::vector<std::string>& atom_names,
                                 std::size_t valuations) {
  PropResult res;
  res.name = "heredity";
  std::mt19937_64 rng(b.seed);
  ClosureOptions opt{atom_names, ag.groups(), b.max_formula_depth};
  for_each_frame(b, ag, FrameClass::kAll, [&](const Frame& f) {
    auto ups = up_sets(f.leq, b.valuation_cap);
    auto pf = std::make_shared<const PreparedFrame>(f);
    auto run = [&](const Valuation& v) {
      ++res.checked;
      auto r = check_heredity(pf, v, opt);
      if (!r.ok) {
        Model m{f, v};
        res.fail({{"model", to_json(m)}, {"formula", render(*r.witness, ag)}, {"detail", r.detail}});
        return false;
      }
      return true;
    };
    if (valuations == 0) {
      bool ok = true;
      for_each_valuation(f.leq, atom_names, b.valuation_cap, [&](const Valuation& v) { return ok = run(v); });
      return ok;
    }
    for (std::size_t i = 0; i < valuations; ++i) {
      Valuation v;
      for (const auto& p : atom_names) v.emplace(p, ups[rng() % ups.size()]);
      if (!run(v)) return false;
    }
    return true;
  });
  return res;
}

/// The three diamond clauses agree on `models` seeded forward-confluent models.
inline PropResult variant_claim(const AgentSet& ag, const SizeBudget& b, std::size_t models,
                                const std::vector<std::string>& atom_names) {
  PropResult res;
  res.name = "variants";
  std::mt19937_64 rng(b.seed * 7919 + 3);
  ClosureOptions opt{atom_names, ag.groups(), b.max_formula_depth};
  for (std::size_t i = 0; i < models; ++i) {
    Frame f = detail::random_rule_frame(rng, ag, std::max<std::size_t>(1, b.max_states));
    Rel geq = f.leq.converse();
    // ≥∘R is forward confluent for any R.
    for (auto& r : f.rel) r = compose(geq, r);
    auto ups = up_sets(f.leq, b.valuation_cap);
    Valuation v;
    for (const auto& p : atom_names) v.emplace(p, ups[rng() % ups.size()]);
    Model m{f, v};
    ++res.checked;
    auto r = check_variant_agreement(m, opt);
    if (!r.ok) {
      res.fail({{"model", to_json(m)}, {"formula", render(*r.witness, ag)}, {"detail", r.detail}});
      break;
    }
  }
  return res;
}

/// How a lift battery walks its sources.
struct LiftPlan {
  std::string name;
  FrameClass source;
  std::vector<FrameClass> source_also;  // sources lacking one of these are passed over
  std::function<Model(const Model&)> build;
  std::vector<FrameClass> required;   // the output must have these
  std::vector<FrameClass> preserved;  // kept whenever the source has them
  std::function<ClaimResult(const Model&, const Model&)> relations;  // optional extra check
  bool all_valuations = true;
  std::size_t stride = 1;  // visit every stride-th source frame
};

/// Builds each source's output once and checks the lift claim for its valuations of p.
inline PropResult lift_claim(const LiftPlan& plan, const AgentSet& ag, const SizeBudget& b) {
  PropResult res;
  res.name = plan.name;
  std::size_t skipped = 0, index = 0;
  std::mt19937_64 rng(b.seed * 31 + 17);
  ClosureOptions opt{{"p"}, {}, b.max_formula_depth};
  for_each_frame(b, ag, plan.source, [&](const Frame& f) {
    for (auto c : plan.source_also)
      if (!has_class(f, c)) return true;
    if (index++ % plan.stride != 0) return true;
    Model out;
    try {
      out = plan.build(Model{f, {}});
    } catch (const BudgetExceeded&) {
      ++skipped;
      return true;
    }
    ++res.checked;
    auto bad_class = [&](FrameClass c) {
      res.fail({{"source", to_json(f)}, {"detail", "output lacks class " + std::string(name(c))}});
      return false;
    };
    for (auto c : plan.required)
      if (!has_class(out.frame, c)) return bad_class(c);
    for (auto c : plan.preserved)
      if (has_class(f, c) && !has_class(out.frame, c)) return bad_class(c);
    if (plan.relations) {
      auto r = plan.relations(Model{f, {}}, out);
      if (!r.ok) {
        res.fail({{"source", to_json(f)}, {"detail", r.detail}});
        return false;
      }
    }
    const std::size_t block = out.size() / f.size();
    LiftChecker lc(f, std::move(out.frame), block);
    auto ups = up_sets(f.leq, b.valuation_cap);
    std::vector<std::size_t> picks;
    if (plan.all_valuations)
      for (std::size_t i = 0; i < ups.size(); ++i) picks.push_back(i);
    else
      picks.push_back(rng() % ups.size());
    for (auto i : picks) {
      Valuation v{{"p", ups[i]}};
      auto r = lc.check(v, opt);
      if (!r.ok) {
        res.fail({{"source", to_json(Model{f, v})}, {"formula", render(*r.witness, ag)}, {"detail", r.detail}});
        return false;
      }
    }
    return true;
  });
  res.skipped = skipped;
  if (res.checked == 0 && !res.failed()) res.status = "vacuous";
  return res;
}

inline LiftPlan standardize_plan(PiVariant v = PiVariant::kDefault) {
  LiftPlan p;
  p.name = v == PiVariant::kDefault ? "standardize" : "standardize_partition";
  p.source = v == PiVariant::kDefault ? FrameClass::kPrestandard : FrameClass::kPartition;
  if (v == PiVariant::kPartition) p.source_also = {FrameClass::kPrestandard};
  p.build = [v](const Model& m) { return standardize(m, v); };
  p.required = {FrameClass::kStandard};
  if (v == PiVariant::kPartition) p.required.push_back(FrameClass::kPartition);
  p.preserved = {FrameClass::kDoxastic, FrameClass::kEpistemic, FrameClass::kUd, FrameClass::kRs};
  p.relations = [v](const Model& s, const Model& o) { return check_standardize_relations(s, o, v); };
  return p;
}

inline LiftPlan transitive_lift_plan() {
  LiftPlan p;
  p.name = "transitive_lift";
  p.source = FrameClass::kAll;
  p.build = [](const Model& m) { return transitive_lift(m); };
  p.required = {FrameClass::kTransitive};
  p.preserved = {FrameClass::kPrestandard, FrameClass::kStandard};
  return p;
}

inline LiftPlan rs_collapse_plan() {
  LiftPlan p;
  p.name = "rs_collapse";
  p.source = FrameClass::kUd;
  p.build = [](const Model& m) { return rs_collapse(m); };
  p.required = {FrameClass::kRs};
  p.preserved = {FrameClass::kPrestandard};
  return p;
}

inline LiftPlan partition_lift_plan(LiftVariant v = LiftVariant::kPlain, std::size_t max_states = 8192) {
  LiftPlan p;
  p.name = v == LiftVariant::kPlain ? "partition_lift" : "partition_lift_prestandard";
  p.source = FrameClass::kRs;
  if (v == LiftVariant::kPrestandard) p.source_also = {FrameClass::kPrestandard};
  p.build = [v, max_states](const Model& m) { return partition_lift(m, v, ConstructionBudget{max_states}); };
  p.required = {FrameClass::kPartition};
  if (v == LiftVariant::kPrestandard) p.required.push_back(FrameClass::kPrestandard);
  p.relations = [v](const Model& s, const Model& o) { return check_partition_relations(s, o, v); };
  return p;
}

/// expand_mono and collapse_mono on every IEL⁻ structure with at most max_states states
/// and every valuation of p: the τ claim, the class claims, and the round trip.
inline PropResult mono_claim(const AgentSet& ag, const SizeBudget& b) {
  PropResult res;
  res.name = "conservative_extension";
  for (std::size_t n = 1; n <= std::min<std::size_t>(b.max_states, 3); ++n)
    for (auto leq : all_preorders(n))
      for (std::uint64_t rm = 0; rm < (std::uint64_t{1} << (n * n)); ++rm) {
        MonoStructure s{Rel::from_mask(n, leq), Rel::from_mask(n, rm), {}};
        for (std::size_t i = 0; i < n; ++i) s.names.push_back("w" + std::to_string(i));
        if (!is_iel_structure(s, IelKind::kMinus)) continue;
        const bool full = is_iel_structure(s, IelKind::kFull);
        for (const auto& u : up_sets(s.leq, b.valuation_cap)) {
          ++res.checked;
          MonoModel mm{s, {{"p", u}}};
          auto fail = [&](const std::string& d) {
            res.fail({{"structure", to_json(mm)}, {"detail", d}});
          };
          Model ex = expand_mono(mm, ag, IelKind::kMinus);
          if (!has_class(ex.frame, FrameClass::kDoxastic) || !has_class(ex.frame, FrameClass::kStandard))
            return fail("expansion is not doxastic and standard"), res;
          if (full && !has_class(ex.frame, FrameClass::kEpistemic)) return fail("expansion of IEL is not epistemic"), res;
          for (auto g : ag.groups()) {
            auto r = check_tau_claim(ex, mm, g, b.max_formula_depth);
            if (!r.ok) return fail("tau claim fails for " + render(*r.witness, ag)), res;
            MonoModel back = collapse_mono(ex, g, full ? IelKind::kFull : IelKind::kMinus);
            if (!is_iel_structure(back.structure, full ? IelKind::kFull : IelKind::kMinus))
              return fail("collapse is not an IEL structure"), res;
            auto r2 = check_tau_claim(ex, back, g, b.max_formula_depth);
            if (!r2.ok) return fail("collapse tau claim fails for " + render(*r2.witness, ag)), res;
          }
        }
      }
  return res;
}

struct SuiteOptions {
  SizeBudget budget;
  std::set<std::string> only;                 // empty: everything
  std::map<std::string, FrameClass> classes;  // overrides for A1–A13
  std::size_t rule_frames = 500;
};

inline std::vector<std::string> suite_propositions() {
  std::vector<std::string> v{"heredity"};
  for (int i = 1; i <= 13; ++i) v.push_back("A" + std::to_string(i));
  for (auto s : {"R1", "R2", "R3", "variants", "standardize", "standardize_partition", "transitive_lift",
                 "rs_collapse", "partition_lift", "partition_lift_prestandard", "conservative_extension"})
    v.push_back(s);
  return v;
}

/// Runs the selected propositions in a fixed order. A budget with max_states = 0 yields
/// an empty report.
inline json proposition_suite(const SuiteOptions& opt) {
  const SizeBudget& b = opt.budget;
  json props = json::array();
  std::size_t failed = 0;
  if (b.max_states > 0 && b.max_agents > 0) {
    AgentSet ag = AgentSet::standard(b.max_agents);
    SizeBudget small = b;
    small.max_states = std::min<std::size_t>(b.max_states, b.max_agents > 1 ? 1 : 2);
    SizeBudget lifts = b;
    lifts.max_states = std::min<std::size_t>(b.max_states, 3);
    for (const auto& p : suite_propositions()) {
      if (!opt.only.empty() && !opt.only.count(p)) continue;
      PropResult r;
      if (p == "heredity") {
        r = heredity_claim(ag, b, {"p", "q"}, 4);
      } else if (auto c = axiom_class(p)) {
        auto it = opt.classes.find(p);
        r = axiom_validity(p, it == opt.classes.end() ? *c : it->second, ag, b);
      } else if (p == "R1" || p == "R2" || p == "R3") {
        r = rule_preservation(p[1] - '0', ag, b, opt.rule_frames);
      } else if (p == "variants") {
        r = variant_claim(ag, b, 200, {"p", "q"});
      } else if (p == "standardize") {
        r = lift_claim(standardize_plan(), ag, small);
      } else if (p == "standardize_partition") {
        r = lift_claim(standardize_plan(PiVariant::kPartition), ag, small);
      } else if (p == "transitive_lift") {
        r = lift_claim(transitive_lift_plan(), ag, lifts);
      } else if (p == "rs_collapse") {
        r = lift_claim(rs_collapse_plan(), ag, lifts);
      } else if (p == "partition_lift") {
        r = lift_claim(partition_lift_plan(LiftVariant::kPlain, 512), ag, lifts);
      } else if (p == "partition_lift_prestandard") {
        r = lift_claim(partition_lift_plan(LiftVariant::kPrestandard, 512), ag, lifts);
      } else if (p == "conservative_extension") {
        r = mono_claim(ag, lifts);
      }
      if (r.failed()) ++failed;
      props.push_back(to_json(r));
    }
  }
  return {{"budget",
           {{"max_states", b.max_states},
            {"max_agents", b.max_agents},
            {"max_formula_depth", b.max_formula_depth},
            {"max_candidates", b.max_candidates},
            {"seed", b.seed}}},
          {"failed", failed},
          {"propositions", std::move(props)}};
}

}  // namespace ieml
