// ieml: command-line front end.
// Exit codes: 0 verdict computed (positive), 1 negative verdict, 2 usage or operational error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ieml/claims.hpp"
#include "ieml/constructions.hpp"
#include "ieml/frame_classes.hpp"
#include "ieml/io.hpp"
#include "ieml/parser.hpp"
#include "ieml/proofs.hpp"
#include "ieml/search.hpp"
#include "ieml/semantics.hpp"
#include "ieml/suite.hpp"

using namespace ieml;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t env_size(const char* var, std::size_t fallback) {
  const char* v = std::getenv(var);
  if (!v || !*v) return fallback;
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != std::string(v).size()) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad value for ") + var + ": " + v);
  }
}

SizeBudget env_budget() {
  SizeBudget b;
  b.max_states = env_size("IEML_BUDGET_MAX_STATES", b.max_states);
  b.max_agents = env_size("IEML_BUDGET_MAX_AGENTS", b.max_agents);
  b.max_formula_depth = env_size("IEML_BUDGET_MAX_DEPTH", b.max_formula_depth);
  b.max_candidates = env_size("IEML_BUDGET_MAX_CANDIDATES", b.max_candidates);
  b.seed = env_size("IEML_BUDGET_SEED", b.seed);
  b.valuation_cap = env_size("IEML_BUDGET_VALUATIONS", b.valuation_cap);
  return b;
}

AgentSet agents_from(const std::string& csv) {
  std::vector<std::string> names;
  std::stringstream ss(csv);
  std::string n;
  while (std::getline(ss, n, ',')) names.push_back(detail::trim(n));
  return AgentSet(names);
}

DiamondSemantics semantics_from(const std::string& s) {
  for (auto d : {DiamondSemantics::kPrenosil, DiamondSemantics::kFischerServi, DiamondSemantics::kWijesekera})
    if (name(d) == s) return d;
  throw UsageError("unknown semantics '" + s + "'");
}

std::size_t state_index(const Frame& f, const std::string& nm) {
  for (std::size_t i = 0; i < f.names.size(); ++i)
    if (f.names[i] == nm) return i;
  throw UsageError("unknown state '" + nm + "'");
}

void print(bool as_json, const json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
}

std::string describe(const Model& m) {
  std::ostringstream out;
  const Frame& f = m.frame;
  auto pairs = [&](const Rel& r) {
    std::string s;
    for (auto [a, b] : r.pairs()) {
      if (a == b && &r == &f.leq) continue;
      s += " (" + f.names[a] + "," + f.names[b] + ")";
    }
    return s.empty() ? std::string(" none") : s;
  };
  out << "worlds:";
  for (const auto& n : f.names) out << " " << n;
  out << "\nleq (strict and cross pairs):" << pairs(f.leq);
  for (auto g : f.agents.groups()) out << "\nR(" << f.agents.group_key(g) << "):" << pairs(f.r(g));
  for (const auto& [p, s] : m.val) {
    out << "\nV(" << p << "):";
    if (s.none()) out << " none";
    s.for_each([&](std::size_t i) { out << " " << f.names[i]; });
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for intuitionistic multi-agent epistemic logics"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  // parse
  auto* c_parse = app.add_subcommand("parse", "Print the canonical form of a formula");
  std::string formula, agents_csv;
  c_parse->add_option("formula", formula)->required();
  c_parse->add_option("--agents", agents_csv, "Comma-separated agents (default: names used)");

  // eval
  auto* c_eval = app.add_subcommand("eval", "Evaluate a formula at a state of a model");
  std::string model_file, state_name, semantics = "prenosil";
  bool close_leq = false, complete = false;
  c_eval->add_option("--model", model_file)->required();
  c_eval->add_option("--state", state_name)->required();
  c_eval->add_option("--semantics", semantics, "prenosil | fischer_servi | wijesekera");
  c_eval->add_option("formula", formula)->required();

  // valid
  auto* c_valid = app.add_subcommand("valid", "Decide validity of a formula on a frame");
  std::string frame_file;
  c_valid->add_option("--frame", frame_file)->required();
  c_valid->add_option("formula", formula)->required();

  // classify
  auto* c_classify = app.add_subcommand("classify", "List the classes a frame belongs to");
  c_classify->add_option("--frame", frame_file)->required();

  for (auto* c : {c_eval, c_valid, c_classify}) {
    c->add_flag("--close-leq", close_leq, "Take the reflexive-transitive closure of leq");
    c->add_flag("--complete-by-intersection", complete, "Derive group relations from singletons");
  }

  // construct
  auto* c_construct = app.add_subcommand("construct", "Apply a model construction");
  std::string kind, in_file, out_file, variant, group_key, mono_kind = "minus";
  std::size_t construct_states = 8192;
  c_construct->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"standardize", "translift", "rscollapse", "partlift", "expandmono", "collapsemono"}));
  c_construct->add_option("--in", in_file)->required();
  c_construct->add_option("--out", out_file)->required();
  c_construct->add_option("--variant", variant, "standardize: default|partition; partlift: plain|prestandard");
  c_construct->add_option("--group", group_key, "collapsemono: the group to collapse (default: first agent)");
  c_construct->add_option("--agents", agents_csv, "expandmono: comma-separated agents (default: a)");
  c_construct->add_option("--iel", mono_kind, "expandmono/collapsemono: minus | full")
      ->check(CLI::IsMember({"minus", "full"}));
  c_construct->add_option("--max-states", construct_states, "Largest output carrier");
  c_construct->add_flag("--close-leq", close_leq);
  c_construct->add_flag("--complete-by-intersection", complete);

  // prove
  auto* c_prove = app.add_subcommand("prove", "Check a derivation");
  std::string logic_id, derivation_file;
  bool probe = false;
  c_prove->add_option("--logic", logic_id)->required();
  c_prove->add_option("--derivation", derivation_file)->required();
  c_prove->add_flag("--probe", probe, "Also search the logic's frame class for a countermodel");

  // countermodel
  auto* c_cm = app.add_subcommand("countermodel", "Search for a falsifying model in a frame class");
  std::string class_tag;
  std::optional<std::size_t> cm_states;
  c_cm->add_option("--class", class_tag)->required();
  c_cm->add_option("--max-states", cm_states);
  c_cm->add_option("--agents", agents_csv);
  c_cm->add_option("formula", formula)->required();

  // suite
  auto* c_suite = app.add_subcommand("suite", "Run the proposition battery");
  std::optional<std::size_t> s_states, s_agents, s_depth, s_candidates, s_seed, s_rule_frames;
  std::vector<std::string> only, overrides;
  c_suite->add_option("--max-states", s_states);
  c_suite->add_option("--max-agents", s_agents);
  c_suite->add_option("--depth", s_depth);
  c_suite->add_option("--max-candidates", s_candidates);
  c_suite->add_option("--seed", s_seed);
  c_suite->add_option("--rule-frames", s_rule_frames);
  c_suite->add_option("--only", only, "Propositions to run (repeatable)");
  c_suite->add_option("--class", overrides, "Override an axiom's class, e.g. A7=all (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    LoadOptions lo{close_leq, complete};
    if (c_parse->parsed()) {
      AgentSet ag = agents_csv.empty() ? infer_agents(formula) : agents_from(agents_csv);
      Formula f = parse(formula, ag);
      std::string out = render(f, ag);
      print(as_json, {{"formula", out}, {"agents", ag.names()}}, out);
      return 0;
    }
    if (c_eval->parsed()) {
      Model m = model_from_json(read_json_file(model_file), lo);
      Formula f = parse(formula, m.frame.agents);
      bool v = satisfies_variant(m, state_index(m.frame, state_name), f, semantics_from(semantics));
      print(as_json, {{"state", state_name}, {"formula", render(f, m.frame.agents)}, {"semantics", semantics}, {"value", v}},
            v ? "true" : "false");
      return v ? 0 : 1;
    }
    if (c_valid->parsed()) {
      Frame fr = frame_from_json(read_json_file(frame_file), lo);
      Formula f = parse(formula, fr.agents);
      auto w = find_falsifying_valuation(fr, f, env_budget().valuation_cap);
      json j{{"formula", render(f, fr.agents)}, {"valid", !w}};
      std::string text = w ? "invalid" : "valid";
      if (w) {
        Model cm{fr, w->first};
        j["countermodel"] = to_json(cm);
        j["state"] = fr.names[w->second];
        text += "\nfails at " + fr.names[w->second] + "\n" + describe(cm);
      }
      print(as_json, j, text);
      return w ? 1 : 0;
    }
    if (c_classify->parsed()) {
      Frame fr = frame_from_json(read_json_file(frame_file), lo);
      json tags = json::array();
      std::string text;
      for (auto c : classify(fr)) {
        tags.push_back(std::string(name(c)));
        text += (text.empty() ? "" : " ") + std::string(name(c));
      }
      print(as_json, tags, text);
      return 0;
    }
    if (c_construct->parsed()) {
      json doc = read_json_file(in_file);
      ConstructionBudget cb{construct_states};
      IelKind ik = mono_kind == "full" ? IelKind::kFull : IelKind::kMinus;
      json out;
      std::size_t states = 0;
      if (kind == "expandmono") {
        MonoModel mm = mono_from_json(doc, lo);
        AgentSet ag = agents_csv.empty() ? AgentSet({"a"}) : agents_from(agents_csv);
        Model m = expand_mono(mm, ag, ik);
        states = m.size();
        out = to_json(m);
      } else {
        Model m = model_from_json(doc, lo);
        if (kind == "collapsemono") {
          Group g = Group::singleton(0);
          if (!group_key.empty()) {
            auto pg = m.frame.agents.parse_group_key(group_key);
            if (!pg) throw UsageError("bad group '" + group_key + "'");
            g = *pg;
          }
          MonoModel mm = collapse_mono(m, g, ik);
          states = mm.structure.size();
          out = to_json(mm);
        } else {
          Model r;
          if (kind == "standardize") {
            if (!variant.empty() && variant != "default" && variant != "partition") throw UsageError("bad --variant");
            r = standardize(m, variant == "partition" ? PiVariant::kPartition : PiVariant::kDefault, cb);
          } else if (kind == "translift") {
            r = transitive_lift(m);
          } else if (kind == "rscollapse") {
            r = rs_collapse(m);
          } else {
            if (!variant.empty() && variant != "plain" && variant != "prestandard") throw UsageError("bad --variant");
            r = partition_lift(m, variant == "prestandard" ? LiftVariant::kPrestandard : LiftVariant::kPlain, cb);
          }
          states = r.size();
          out = to_json(r, r.size() > 64);
        }
      }
      write_json_file(out_file, out);
      print(as_json, {{"kind", kind}, {"states", states}, {"out", out_file}},
            kind + ": wrote " + std::to_string(states) + " states to " + out_file);
      return 0;
    }
    if (c_prove->parsed()) {
      auto logic = parse_logic(logic_id);
      if (!logic) throw UsageError("unknown logic '" + logic_id + "'");
      Derivation d = derivation_from_json(read_json_file(derivation_file));
      auto r = check_derivation(d, *logic);
      if (auto* rej = std::get_if<Rejection>(&r)) {
        print(as_json, to_json(*rej), "rejected at line " + std::to_string(rej->line) + ": " + rej->reason);
        return 1;
      }
      const auto& cert = std::get<Certificate>(r);
      json j = to_json(cert);
      j["status"] = "accepted";
      std::string text = "accepted in " + std::string(name(*logic)) + ": " + render(cert.theorem(), d.agents);
      for (const auto& e : cert.evidence) text += "\n  " + std::to_string(e.line) + ". " + render(cert.lines[e.line - 1].formula, d.agents) + "   [" + e.evidence + "]";
      int code = 0;
      if (probe) {
        SizeBudget b = env_budget();
        b.max_agents = d.agents.size();
        auto rep = soundness_probe(cert.theorem(), d.agents, *logic, b);
        j["probe"] = {{"frames_checked", rep.frames_checked}, {"countermodel", rep.ok() ? json(nullptr) : to_json(rep.countermodel->model)}};
        text += "\nsoundness probe: " + std::to_string(rep.frames_checked) + " frames, " +
                (rep.ok() ? "no countermodel" : "COUNTERMODEL FOUND");
        if (!rep.ok()) code = 1;
      }
      print(as_json, j, text);
      return code;
    }
    if (c_cm->parsed()) {
      auto c = parse_frame_class(class_tag);
      if (!c) throw UsageError("unknown class '" + class_tag + "'");
      AgentSet ag = agents_csv.empty() ? infer_agents(formula) : agents_from(agents_csv);
      Formula f = parse(formula, ag);
      SizeBudget b = env_budget();
      if (cm_states) b.max_states = *cm_states;
      auto cm = countermodel(f, ag, *c, b);
      if (!cm) {
        print(as_json, {{"found", false}, {"formula", render(f, ag)}, {"class", class_tag}}, "none within budget");
        return 0;
      }
      print(as_json,
            {{"found", true}, {"formula", render(f, ag)}, {"class", class_tag}, {"model", to_json(cm->model)},
             {"state", cm->model.frame.names[cm->state]}},
            "countermodel at " + cm->model.frame.names[cm->state] + "\n" + describe(cm->model));
      return 1;
    }
    if (c_suite->parsed()) {
      SuiteOptions so;
      so.budget = env_budget();
      if (s_states) so.budget.max_states = *s_states;
      if (s_agents) so.budget.max_agents = *s_agents;
      if (s_depth) so.budget.max_formula_depth = *s_depth;
      if (s_candidates) so.budget.max_candidates = *s_candidates;
      if (s_seed) so.budget.seed = *s_seed;
      if (s_rule_frames) so.rule_frames = *s_rule_frames;
      auto known = suite_propositions();
      for (const auto& p : only) {
        if (std::find(known.begin(), known.end(), p) == known.end()) throw UsageError("unknown proposition '" + p + "'");
        so.only.insert(p);
      }
      for (const auto& o : overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos) throw UsageError("--class expects ID=TAG");
        auto c = parse_frame_class(o.substr(eq + 1));
        if (!c || !axiom_class(o.substr(0, eq))) throw UsageError("bad --class '" + o + "'");
        so.classes[o.substr(0, eq)] = *c;
      }
      json rep = proposition_suite(so);
      std::string text;
      for (const auto& p : rep["propositions"]) {
        text += p["name"].get<std::string>() + ": " + p["status"].get<std::string>() + " (" +
                std::to_string(p["checked"].get<std::size_t>()) + " checked";
        if (p.contains("vacuous")) text += ", " + std::to_string(p["vacuous"].get<std::size_t>()) + " vacuous";
        if (p.contains("skipped")) text += ", " + std::to_string(p["skipped"].get<std::size_t>()) + " skipped";
        text += ")\n";
        for (const auto& w : p["witnesses"]) text += "  witness: " + w.dump() + "\n";
      }
      text += rep["failed"].get<std::size_t>() == 0 ? "all passed" : std::to_string(rep["failed"].get<std::size_t>()) + " failed";
      print(as_json, rep, text);
      return rep["failed"].get<std::size_t>() == 0 ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
