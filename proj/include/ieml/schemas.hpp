#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ieml/frame_classes.hpp"
#include "ieml/parser.hpp"

namespace ieml {

struct Schema {
  std::string id;
  std::string text;
  SchemaBody body;
};

/// Propositional basis; all ten belong to every logic.
inline constexpr std::string_view kIplBasis = "IPL1-IPL10";

inline const std::vector<Schema>& schema_catalog() {
  static const std::vector<Schema> catalog = [] {
    const std::pair<const char*, const char*> raw[] = {
        {"IPL1", "p -> q -> p"},
        {"IPL2", "(p -> q -> r) -> (p -> q) -> p -> r"},
        {"IPL3", "p /\\ q -> p"},
        {"IPL4", "p /\\ q -> q"},
        {"IPL5", "p -> q -> p /\\ q"},
        {"IPL6", "p -> p \\/ q"},
        {"IPL7", "q -> p \\/ q"},
        {"IPL8", "(p -> r) -> (q -> r) -> p \\/ q -> r"},
        {"IPL9", "F -> p"},
        {"IPL10", "T"},
        {"A1", "[α]p /\\ [α]q -> [α](p /\\ q)"},
        {"A2", "<α>(p \\/ q) -> <α>p \\/ <α>q"},
        {"A3", "[α]T"},
        {"A4", "~<α>F"},
        {"A5", "[α](p \\/ q) -> (<α>p -> [α]q) -> [α]q"},
        {"A6", "p -> [α]p"},
        {"A7", "[α]p -> ~~<α>p"},
        {"A8", "[α]p -> p"},
        {"A9", "p -> <α>p"},
        {"A10", "p -> [α]<α>p"},
        {"A11", "<α>[α]p -> p"},
        {"A12", "[α]p \\/ [β]p -> [α∪β]p"},
        {"A13", "<α∪β>p -> <α>p /\\ <β>p"},
        {"A14", "[α]p -> [α][α]p"},
        {"A15", "<α><α>p -> <α>p"},
        {"A16", "<α>p -> [α]<α>p"},
        {"A17", "<α>[α]p -> [α]p"},
    };
    std::vector<Schema> out;
    for (auto [id, text] : raw) {
      auto body = parse_schema(text);
      out.push_back(Schema{id, render(body), body});
    }
    return out;
  }();
  return catalog;
}

inline const Schema* find_schema(std::string_view id) {
  for (const auto& s : schema_catalog())
    if (s.id == id) return &s;
  return nullptr;
}

enum class LogicId { kAll, kDox, kEpi, kPar, kAllD, kDoxD, kEpiD, kParD };

inline constexpr LogicId kAllLogics[] = {LogicId::kAll,  LogicId::kDox,  LogicId::kEpi,  LogicId::kPar,
                                         LogicId::kAllD, LogicId::kDoxD, LogicId::kEpiD, LogicId::kParD};

inline std::string_view name(LogicId l) {
  switch (l) {
    case LogicId::kAll: return "L_all";
    case LogicId::kDox: return "L_dox";
    case LogicId::kEpi: return "L_epi";
    case LogicId::kPar: return "L_par";
    case LogicId::kAllD: return "L_all_D";
    case LogicId::kDoxD: return "L_dox_D";
    case LogicId::kEpiD: return "L_epi_D";
    case LogicId::kParD: return "L_par_D";
  }
  return "?";
}

inline std::optional<LogicId> parse_logic(std::string_view s) {
  for (auto l : kAllLogics)
    if (name(l) == s) return l;
  return std::nullopt;
}

inline bool is_distributed(LogicId l) { return l >= LogicId::kAllD; }

inline LogicId base_logic(LogicId l) {
  return is_distributed(l) ? static_cast<LogicId>(static_cast<int>(l) - 4) : l;
}

/// Schema ids available as axioms in l.
inline std::set<std::string> logic_schemas(LogicId l) {
  std::set<std::string> out;
  for (int i = 1; i <= 10; ++i) out.insert("IPL" + std::to_string(i));
  for (int i = 1; i <= 5; ++i) out.insert("A" + std::to_string(i));
  switch (base_logic(l)) {
    case LogicId::kDox: out.insert("A6"); break;
    case LogicId::kEpi: out.insert({"A6", "A7"}); break;
    case LogicId::kPar: out.insert({"A8", "A9", "A10", "A11"}); break;
    default: break;
  }
  if (is_distributed(l)) out.insert({"A12", "A13"});
  return out;
}

/// The frame class whose validities l is meant to capture; D-variants add standardness.
inline FrameClass logic_class(LogicId l) {
  switch (base_logic(l)) {
    case LogicId::kDox: return FrameClass::kDoxastic;
    case LogicId::kEpi: return FrameClass::kEpistemic;
    case LogicId::kPar: return FrameClass::kPartition;
    default: return FrameClass::kAll;
  }
}

}  // namespace ieml
