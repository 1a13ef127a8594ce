#pragma once

#include <string>
#include <vector>

#include "ieml/proofs.hpp"

namespace testing_support {

struct Mutant {
  std::string what;
  ieml::Derivation d;
  std::size_t bad_line;  // first line the checker must reject
};

// Each mutation is invalid by construction at `bad_line`; earlier lines are untouched.
inline std::vector<Mutant> mutate(const ieml::Derivation& d) {
  using namespace ieml;
  std::vector<Mutant> out;
  auto push = [&](std::string what, std::size_t at, auto&& edit) {
    Derivation m = d;
    edit(m.lines[at - 1]);
    out.push_back({what + " @" + std::to_string(at), std::move(m), at});
  };
  for (std::size_t at = 1; at <= d.lines.size(); ++at) {
    const Line& ln = d.lines[at - 1];
    push("conjoined", at, [](Line& l) { l.formula = Formula::conj(l.formula, l.formula); });
    switch (ln.just.kind) {
      case JustKind::kMP:
        push("swapped mp", at, [](Line& l) { std::swap(l.just.i, l.just.j); });
        push("forward ref", at, [at](Line& l) { l.just.j = at; });
        break;
      case JustKind::kR1:
      case JustKind::kR2:
        push("r1/r2 flipped", at, [](Line& l) { l.just.kind = l.just.kind == JustKind::kR1 ? JustKind::kR2 : JustKind::kR1; });
        [[fallthrough]];
      case JustKind::kR3:
      case JustKind::kSub:
        push("zero ref", at, [](Line& l) { l.just.i = 0; });
        break;
      case JustKind::kAxiom:
        push("unknown schema", at, [](Line& l) { l.just.schema = "A99"; });
        if (ln.just.alpha && d.agents.size() > 1) {
          auto groups = d.agents.groups();
          for (auto g : groups)
            if (!(g == *ln.just.alpha) && !(ln.just.beta && g == *ln.just.beta)) {
              push("rebound alpha", at, [g](Line& l) { l.just.alpha = g; });
              break;
            }
        }
        break;
    }
    if (ln.just.kind == JustKind::kSub && !ln.just.sigma.empty())
      push("renamed sigma", at, [](Line& l) {
        for (auto& [p, a] : l.just.sigma) a = Formula::atom("zz_" + p);
      });
  }
  return out;
}

}  // namespace testing_support
