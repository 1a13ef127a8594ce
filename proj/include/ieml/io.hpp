#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ieml/frame.hpp"
#include "ieml/frame_classes.hpp"
#include "ieml/parser.hpp"
#include "ieml/proofs.hpp"

namespace ieml {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  bool close_leq = false;
  bool complete_by_intersection = false;
};

namespace detail {

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing key '") + key + "'");
  return j.at(key);
}

inline std::map<std::string, std::size_t> world_index(const std::vector<std::string>& worlds) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (!idx.emplace(worlds[i], i).second) throw FormatError("duplicate world '" + worlds[i] + "'");
  return idx;
}

inline std::size_t world(const std::map<std::string, std::size_t>& idx, const json& name) {
  if (!name.is_string()) throw FormatError("world names must be strings");
  auto it = idx.find(name.get<std::string>());
  if (it == idx.end()) throw FormatError("unknown world '" + name.get<std::string>() + "'");
  return it->second;
}

inline Rel read_pairs(const json& j, const std::map<std::string, std::size_t>& idx) {
  if (!j.is_array()) throw FormatError("relation must be an array of pairs");
  Rel r(idx.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw FormatError("relation entries must be [from, to] pairs");
    r.add(world(idx, p[0]), world(idx, p[1]));
  }
  return r;
}

inline json write_pairs(const Rel& r, const std::vector<std::string>& names) {
  json out = json::array();
  for (auto [s, t] : r.pairs()) out.push_back({names[s], names[t]});
  return out;
}

inline StateSet read_set(const json& j, const std::map<std::string, std::size_t>& idx) {
  if (!j.is_array()) throw FormatError("state sets must be arrays of world names");
  StateSet s(idx.size());
  for (const auto& w : j) s.set(world(idx, w));
  return s;
}

inline json write_set(const StateSet& s, const std::vector<std::string>& names) {
  json out = json::array();
  s.for_each([&](std::size_t i) { out.push_back(names[i]); });
  return out;
}

inline Valuation read_valuation(const json& doc, const Rel& leq, const std::map<std::string, std::size_t>& idx) {
  Valuation v;
  if (!doc.contains("valuation")) return v;
  const json& j = doc.at("valuation");
  if (!j.is_object()) throw FormatError("valuation must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    StateSet s = read_set(it.value(), idx);
    if (!is_up_closed(leq, s)) throw FormatError("valuation of '" + it.key() + "' is not closed under the preorder");
    v.emplace(it.key(), std::move(s));
  }
  return v;
}

inline json write_valuation(const Valuation& v, const std::vector<std::string>& names) {
  json out = json::object();
  for (const auto& [p, s] : v) out[p] = write_set(s, names);
  return out;
}

/// A generating set for a preorder: a cycle through each ≤-equivalence class plus the
/// covering pairs between classes. Its reflexive-transitive closure is the preorder.
inline Rel preorder_generators(const Rel& leq) {
  const std::size_t n = leq.size();
  std::vector<std::size_t> cls(n, n);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t s = 0; s < n; ++s) {
    if (cls[s] != n) continue;
    members.emplace_back();
    leq.for_each_successor(s, [&](std::size_t t) {
      if (leq.contains(t, s)) {
        cls[t] = members.size() - 1;
        members.back().push_back(t);
      }
    });
  }
  Rel g(n);
  for (const auto& m : members)
    if (m.size() > 1)
      for (std::size_t i = 0; i < m.size(); ++i) g.add(m[i], m[(i + 1) % m.size()]);
  // Covers between class representatives.
  for (std::size_t a = 0; a < members.size(); ++a) {
    std::size_t s = members[a][0];
    std::vector<std::size_t> ups;
    for (std::size_t b = 0; b < members.size(); ++b)
      if (b != a && leq.contains(s, members[b][0])) ups.push_back(b);
    for (auto b : ups) {
      bool covered = true;
      for (auto c : ups)
        if (c != b && leq.contains(members[c][0], members[b][0])) covered = false;
      if (covered) g.add(s, members[b][0]);
    }
  }
  return g;
}

}  // namespace detail

/// Reads agents, worlds, leq and rel. Every group must have a "rel" entry unless
/// complete_by_intersection is set, in which case only singletons are read.
inline Frame frame_from_json(const json& doc, LoadOptions opt = {}) {
  auto agent_names = detail::require(doc, "agents").get<std::vector<std::string>>();
  AgentSet ag(agent_names);
  auto worlds = detail::require(doc, "worlds").get<std::vector<std::string>>();
  if (worlds.empty()) throw FormatError("a frame needs at least one world");
  auto idx = detail::world_index(worlds);
  Rel leq = detail::read_pairs(detail::require(doc, "leq"), idx);
  if (opt.close_leq || doc.value("close_leq", false)) leq = reflexive_transitive_closure(leq);
  if (!is_preorder(leq)) throw FormatError("leq is not a preorder (use close_leq to close it)");

  const json& rj = detail::require(doc, "rel");
  if (!rj.is_object()) throw FormatError("rel must be an object keyed by group");
  std::vector<std::optional<Rel>> rel(ag.group_count());
  for (auto it = rj.begin(); it != rj.end(); ++it) {
    auto g = ag.parse_group_key(it.key());
    if (!g) throw FormatError("bad group key '" + it.key() + "'");
    if (rel[g->index()]) throw FormatError("duplicate group key '" + it.key() + "'");
    rel[g->index()] = detail::read_pairs(it.value(), idx);
  }
  std::vector<Rel> out;
  for (auto g : ag.groups()) {
    if (opt.complete_by_intersection && g.size() > 1) {
      Rel meet = Rel::full(worlds.size());
      for (std::size_t a = 0; a < ag.size(); ++a)
        if (g.contains(a)) {
          const auto& single = rel[Group::singleton(a).index()];
          if (!single) throw FormatError("missing rel for group '" + ag.name(a) + "'");
          meet &= *single;
        }
      if (rel[g.index()] && !(*rel[g.index()] == meet))
        throw FormatError("rel for '" + ag.group_key(g) + "' differs from the intersection of its members");
      out.push_back(meet);
      continue;
    }
    if (!rel[g.index()]) throw FormatError("missing rel for group '" + ag.group_key(g) + "'");
    out.push_back(*rel[g.index()]);
  }
  return Frame(ag, std::move(leq), std::move(out), std::move(worlds));
}

inline Model model_from_json(const json& doc, LoadOptions opt = {}) {
  Frame f = frame_from_json(doc, opt);
  auto idx = detail::world_index(f.names);
  Valuation v = detail::read_valuation(doc, f.leq, idx);
  return Model{std::move(f), std::move(v)};
}

/// compact_leq writes a generating set of ≤ and marks the document with "close_leq".
inline json to_json(const Frame& f, bool compact_leq = false) {
  json doc;
  doc["agents"] = f.agents.names();
  doc["worlds"] = f.names;
  if (compact_leq) {
    doc["close_leq"] = true;
    doc["leq"] = detail::write_pairs(detail::preorder_generators(f.leq), f.names);
  } else {
    doc["leq"] = detail::write_pairs(f.leq, f.names);
  }
  json rel = json::object();
  for (auto g : f.agents.groups()) rel[f.agents.group_key(g)] = detail::write_pairs(f.r(g), f.names);
  doc["rel"] = std::move(rel);
  return doc;
}

inline json to_json(const Model& m, bool compact_leq = false) {
  json doc = to_json(m.frame, compact_leq);
  doc["valuation"] = detail::write_valuation(m.val, m.frame.names);
  return doc;
}

/// {"worlds", "leq", "r", "valuation"}; the single relation lives under "r".
inline MonoModel mono_from_json(const json& doc, LoadOptions opt = {}) {
  auto worlds = detail::require(doc, "worlds").get<std::vector<std::string>>();
  if (worlds.empty()) throw FormatError("a structure needs at least one world");
  auto idx = detail::world_index(worlds);
  Rel leq = detail::read_pairs(detail::require(doc, "leq"), idx);
  if (opt.close_leq || doc.value("close_leq", false)) leq = reflexive_transitive_closure(leq);
  if (!is_preorder(leq)) throw FormatError("leq is not a preorder (use close_leq to close it)");
  Rel r = detail::read_pairs(detail::require(doc, "r"), idx);
  Valuation v = detail::read_valuation(doc, leq, idx);
  return MonoModel{MonoStructure{std::move(leq), std::move(r), std::move(worlds)}, std::move(v)};
}

inline json to_json(const MonoModel& m) {
  const auto& names = m.structure.names;
  json doc;
  doc["worlds"] = names;
  doc["leq"] = detail::write_pairs(m.structure.leq, names);
  doc["r"] = detail::write_pairs(m.structure.r, names);
  doc["valuation"] = detail::write_valuation(m.val, names);
  return doc;
}

inline bool is_mono_document(const json& doc) { return doc.is_object() && doc.contains("r") && !doc.contains("rel"); }

// ---- derivations and certificates ----

namespace detail {

inline Group read_group(const json& j, const AgentSet& ag) {
  std::vector<std::string> names;
  if (j.is_string()) {
    auto g = ag.parse_group_key(j.get<std::string>());
    if (!g) throw FormatError("bad group '" + j.get<std::string>() + "'");
    return *g;
  }
  if (!j.is_array() || j.empty()) throw FormatError("groups are nonempty arrays of agent names");
  std::uint32_t m = 0;
  for (const auto& a : j) {
    auto i = ag.index_of(a.get<std::string>());
    if (!i) throw FormatError("unknown agent '" + a.get<std::string>() + "'");
    m |= std::uint32_t{1} << *i;
  }
  return Group{m};
}

inline json write_group(Group g, const AgentSet& ag) {
  json out = json::array();
  for (std::size_t a = 0; a < ag.size(); ++a)
    if (g.contains(a)) out.push_back(ag.name(a));
  return out;
}

inline std::size_t read_index(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw FormatError(std::string("'") + key + "' must be a line number");
  return v.get<std::size_t>();
}

inline Justification read_just(const json& j, const AgentSet& ag) {
  Justification out;
  auto kind = parse_just_kind(require(j, "kind").get<std::string>());
  if (!kind) throw FormatError("unknown justification kind '" + j.at("kind").get<std::string>() + "'");
  out.kind = *kind;
  switch (out.kind) {
    case JustKind::kAxiom:
      out.schema = require(j, "id").get<std::string>();
      if (j.contains("alpha")) out.alpha = read_group(j.at("alpha"), ag);
      if (j.contains("beta")) out.beta = read_group(j.at("beta"), ag);
      break;
    case JustKind::kMP:
      out.i = read_index(j, "i");
      out.j = read_index(j, "j");
      break;
    case JustKind::kR1:
    case JustKind::kR2:
    case JustKind::kR3:
      out.i = read_index(j, "line");
      if (j.contains("group")) out.group = read_group(j.at("group"), ag);
      break;
    case JustKind::kSub: {
      out.i = read_index(j, "line");
      const json& s = require(j, "sigma");
      if (!s.is_object()) throw FormatError("sigma must map atoms to formulas");
      for (auto it = s.begin(); it != s.end(); ++it) out.sigma.emplace(it.key(), parse(it.value().get<std::string>(), ag));
      break;
    }
  }
  return out;
}

inline json write_just(const Justification& j, const AgentSet& ag) {
  json out;
  out["kind"] = std::string(name(j.kind));
  switch (j.kind) {
    case JustKind::kAxiom:
      out["id"] = j.schema;
      if (j.alpha) out["alpha"] = write_group(*j.alpha, ag);
      if (j.beta) out["beta"] = write_group(*j.beta, ag);
      break;
    case JustKind::kMP:
      out["i"] = j.i;
      out["j"] = j.j;
      break;
    case JustKind::kR1:
    case JustKind::kR2:
    case JustKind::kR3:
      out["line"] = j.i;
      if (j.group) out["group"] = write_group(*j.group, ag);
      break;
    case JustKind::kSub: {
      out["line"] = j.i;
      json s = json::object();
      for (const auto& [p, f] : j.sigma) s[p] = render(f, ag);
      out["sigma"] = std::move(s);
      break;
    }
  }
  return out;
}

inline std::vector<Line> read_lines(const json& arr, const AgentSet& ag) {
  if (!arr.is_array()) throw FormatError("lines must be an array");
  std::vector<Line> lines;
  for (const auto& l : arr) {
    Formula f = parse(require(l, "formula").get<std::string>(), ag);
    lines.push_back(Line{std::move(f), read_just(require(l, "just"), ag)});
  }
  return lines;
}

/// Agents named anywhere in a line list: modalities and group fields.
inline AgentSet infer_derivation_agents(const json& arr) {
  std::set<std::string> names;
  auto add_group = [&](const json& g) {
    if (g.is_array())
      for (const auto& a : g) names.insert(a.get<std::string>());
  };
  for (const auto& l : arr) {
    if (!l.is_object()) throw FormatError("each line must be an object");
    std::string text = require(l, "formula").get<std::string>();
    if (l.contains("just")) {
      const json& j = l.at("just");
      for (const char* k : {"alpha", "beta", "group"})
        if (j.contains(k)) add_group(j.at(k));
      if (j.contains("sigma") && j.at("sigma").is_object())
        for (const auto& v : j.at("sigma")) text += " " + v.get<std::string>();
    }
    bool modal = false;
    for (std::size_t i = 0; i < text.size(); ++i)
      modal = modal || text[i] == '[' || (text[i] == '<' && text.compare(i, 3, "<->") != 0);
    if (modal) {
      AgentSet found = infer_agents(text);
      for (const auto& n : found.names()) names.insert(n);
    }
  }
  if (names.empty()) return AgentSet({"a"});
  return AgentSet(std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace detail

/// Either {"agents": [...], "logic": "...", "lines": [...]} or a bare array of lines,
/// in which case the agents are the names used (sorted).
inline Derivation derivation_from_json(const json& doc, std::optional<LogicId>* logic_out = nullptr) {
  const json& lines = doc.is_array() ? doc : detail::require(doc, "lines");
  AgentSet ag = doc.is_object() && doc.contains("agents") ? AgentSet(doc.at("agents").get<std::vector<std::string>>())
                                                          : detail::infer_derivation_agents(lines);
  if (doc.is_object() && doc.contains("logic")) {
    auto l = parse_logic(doc.at("logic").get<std::string>());
    if (!l) throw FormatError("unknown logic '" + doc.at("logic").get<std::string>() + "'");
    if (logic_out) *logic_out = *l;
  }
  return Derivation{ag, detail::read_lines(lines, ag)};
}

inline json to_json(const Derivation& d) {
  json doc;
  doc["agents"] = d.agents.names();
  json lines = json::array();
  for (const auto& l : d.lines) lines.push_back({{"formula", render(l.formula, d.agents)}, {"just", detail::write_just(l.just, d.agents)}});
  doc["lines"] = std::move(lines);
  return doc;
}

inline json to_json(const Certificate& c) {
  json doc;
  doc["logic"] = std::string(name(c.logic));
  doc["basis"] = c.basis;
  json basis = json::object();
  for (const auto& s : schema_catalog())
    if (s.id.rfind("IPL", 0) == 0) basis[s.id] = s.text;
  doc["basis_schemas"] = std::move(basis);
  doc["agents"] = c.agents.names();
  doc["theorem"] = render(c.theorem(), c.agents);
  json lines = json::array();
  for (std::size_t i = 0; i < c.lines.size(); ++i)
    lines.push_back({{"n", i + 1},
                     {"formula", render(c.lines[i].formula, c.agents)},
                     {"just", detail::write_just(c.lines[i].just, c.agents)},
                     {"evidence", c.evidence[i].evidence}});
  doc["lines"] = std::move(lines);
  return doc;
}

inline Certificate certificate_from_json(const json& doc) {
  auto logic = parse_logic(detail::require(doc, "logic").get<std::string>());
  if (!logic) throw FormatError("unknown logic");
  AgentSet ag(detail::require(doc, "agents").get<std::vector<std::string>>());
  Certificate c{*logic, detail::require(doc, "basis").get<std::string>(), ag, detail::read_lines(detail::require(doc, "lines"), ag), {}};
  for (const auto& l : doc.at("lines"))
    c.evidence.push_back(LineEvidence{detail::read_index(l, "n"), detail::require(l, "evidence").get<std::string>()});
  return c;
}

inline json to_json(const Rejection& r) { return {{"status", "rejected"}, {"line", r.line}, {"reason", r.reason}}; }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

}  // namespace ieml
