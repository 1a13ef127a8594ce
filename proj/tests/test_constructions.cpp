#include <gtest/gtest.h>

#include <random>

#include "ieml/claims.hpp"
#include "ieml/constructions.hpp"
#include "ieml/parser.hpp"
#include "ieml/search.hpp"
#include "support/frames.hpp"
#include "support/oracle.hpp"

using namespace ieml;
using testing_support::one_point;
using testing_support::random_valuation;

namespace {

Model with_p(const Frame& f, std::initializer_list<std::size_t> p) {
  return Model{f, {{"p", StateSet::from_list(f.size(), p)}}};
}

// Pointwise comparison through the recursive oracle rather than the closure.
void expect_lift_pointwise(const Model& src, const Model& out, std::size_t block, std::size_t depth) {
  auto fs = oracle::enumerate({"p"}, src.frame.agents.groups(), depth);
  for (const auto& f : fs)
    for (std::size_t t = 0; t < src.size(); ++t) {
      bool want = oracle::sat(src, t, f);
      for (std::size_t x = 0; x < block; ++x)
        ASSERT_EQ(oracle::sat(out, t * block + x, f), want) << render(f, src.frame.agents) << " at " << t;
    }
}

std::vector<Model> small_models(FrameClass c, std::size_t states, std::size_t agents, std::size_t cap, std::uint64_t seed) {
  SizeBudget b;
  b.max_states = states;
  b.max_agents = agents;
  b.max_candidates = cap;
  b.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<Model> out;
  for_each_frame(b, c, [&](const Frame& f) {
    out.push_back(Model{f, random_valuation(rng, f, {"p"})});
    return true;
  });
  return out;
}

}  // namespace

TEST(Standardize, OnePointSingleAgent) {
  Model m = with_p(one_point(true), {0});
  Model out = standardize(m);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_TRUE(has_class(out.frame, FrameClass::kStandard));
  EXPECT_EQ(out.frame.names[1], "w0|g1");
  EXPECT_TRUE(check_frame(out.frame).ok);
  expect_lift_pointwise(m, out, 2, 2);
}

TEST(Standardize, RejectsNonPrestandard) {
  Frame f = one_point(true, 2);
  f.r(Group{3}) = Rel::identity(1);
  f.r(Group{2}) = Rel(1);
  EXPECT_THROW(standardize(Model{f, {}}), PreconditionError);
  EXPECT_THROW(standardize(Model{testing_support::chain2(), {}}, PiVariant::kPartition), PreconditionError);
}

TEST(Standardize, BudgetIsEnforced) {
  Frame f = one_point(true, 2);
  ConstructionBudget b{63};
  EXPECT_THROW(standardize(Model{f, {}}, PiVariant::kDefault, b), BudgetExceeded);
}

TEST(Standardize, RelationMatchesDefinitionOracle) {
  // Brute force (t,g) R′(α) (u,h) over W′ × W′ against the generated relation.
  for (auto [states, agents] : {std::pair{1, 1}, {2, 1}, {1, 2}}) {
    auto models = small_models(FrameClass::kPrestandard, states, agents, 100000, 7);
    std::size_t checked = 0;
    for (const auto& m : models) {
      if (m.size() != static_cast<std::size_t>(states) || checked++ > 25) continue;
      for (auto variant : {PiVariant::kDefault, PiVariant::kPartition}) {
        if (variant == PiVariant::kPartition && !has_class(m.frame, FrameClass::kPartition)) continue;
        Model out = standardize(m, variant);
        IFunctionSpace I(m.size(), m.frame.agents);
        PiTable pi(m.frame, variant);
        const std::size_t ni = I.size();
        for (auto a : m.frame.agents.groups())
          for (std::size_t x = 0; x < out.size(); ++x)
            for (std::size_t y = 0; y < out.size(); ++y)
              ASSERT_EQ(out.frame.r(a).contains(x, y),
                        standard_related(I, m.frame.agents, pi, a, x / ni, x % ni, y / ni, y % ni));
        EXPECT_TRUE(has_class(out.frame, FrameClass::kStandard));
      }
    }
    EXPECT_GT(checked, 0u);
  }
}

TEST(Standardize, ClaimOnSmallModels) {
  for (auto [states, agents] : {std::pair{2, 1}, {1, 2}}) {
    for (const auto& m : small_models(FrameClass::kPrestandard, states, agents, 100000, 11)) {
      Model out = standardize(m);
      std::size_t ni = out.size() / m.size();
      LiftChecker lc(m.frame, out.frame, ni);
      auto r = lc.check(m.val, ClosureOptions{{"p"}, {}, 2});
      ASSERT_TRUE(r.ok) << r.detail;
      auto rel = check_standardize_relations(m, out, PiVariant::kDefault);
      ASSERT_TRUE(rel.ok) << rel.detail;
    }
  }
}

TEST(Standardize, ClaimPointwiseOnTwoAgentTwoStates) {
  Frame f(AgentSet::standard(2), Rel::from_pairs(2, {{0, 0}, {0, 1}, {1, 1}}),
          {Rel::from_pairs(2, {{0, 1}, {1, 1}}), Rel::from_pairs(2, {{0, 1}, {0, 0}}), Rel::from_pairs(2, {{0, 1}})});
  Model m = with_p(f, {1});
  Model out = standardize(m);
  ASSERT_EQ(out.size(), 8192u);
  EXPECT_TRUE(has_class(out.frame, FrameClass::kStandard));
  auto r = LiftChecker(m.frame, out.frame, 4096).check(m.val, ClosureOptions{{"p"}, {}, 2});
  EXPECT_TRUE(r.ok) << r.detail;
  EXPECT_TRUE(check_standardize_relations(m, out, PiVariant::kDefault).ok);
}

TEST(Standardize, PreservesClasses) {
  const FrameClass kept[] = {FrameClass::kDoxastic, FrameClass::kEpistemic, FrameClass::kUd, FrameClass::kRs};
  for (auto [states, agents] : {std::pair{2, 1}, {1, 2}}) {
    for (const auto& m : small_models(FrameClass::kPrestandard, states, agents, 100000, 13)) {
      Model out = standardize(m);
      for (auto c : kept)
        if (has_class(m.frame, c)) EXPECT_TRUE(has_class(out.frame, c)) << name(c);
      if (has_class(m.frame, FrameClass::kPartition)) {
        // The default π breaks transitivity; the partition variant keeps it.
        Model par = standardize(m, PiVariant::kPartition);
        EXPECT_TRUE(has_class(par.frame, FrameClass::kPartition));
        EXPECT_TRUE(has_class(par.frame, FrameClass::kStandard));
        auto r = LiftChecker(m.frame, par.frame, par.size() / m.size()).check(m.val, ClosureOptions{{"p"}, {}, 2});
        EXPECT_TRUE(r.ok) << r.detail;
      }
    }
  }
}

TEST(WitnessH, CasesAndSigmaCondition) {
  Frame f(AgentSet::standard(2), Rel::identity(2),
          {Rel::full(2), Rel::full(2), Rel::from_pairs(2, {{0, 1}, {1, 0}})});
  Model m{f, {}};
  IFunctionSpace I(2, f.agents);
  PiTable pi(f, PiVariant::kDefault);
  std::mt19937_64 rng(17);
  for (auto alpha : f.agents.groups())
    for (auto [t, u] : f.r(alpha).pairs())
      for (int it = 0; it < 300; ++it) {
        std::size_t g = rng() % I.size();
        std::size_t h = witness_h(m, pi, alpha, t, u, g);
        ASSERT_TRUE(standard_related(I, f.agents, pi, alpha, t, g, u, h));
        for (auto beta : f.agents.groups())
          for (std::size_t a = 0; a < 2; ++a) {
            if (!beta.contains(a)) EXPECT_EQ(I.value(h, beta, a), 0u);
            if (beta.contains(a) && alpha.contains(a)) EXPECT_EQ(I.value(h, beta, a), I.value(g, beta, a));
          }
      }
  EXPECT_THROW(witness_h(Model{one_point(false), {}}, PiTable(one_point(false), PiVariant::kDefault), Group{1}, 0, 0, 0),
               PreconditionError);
}

TEST(TransitiveLift, Examples) {
  Model empty = with_p(testing_support::chain2(), {1});
  Model out = transitive_lift(empty);
  for (const auto& r : out.frame.rel) EXPECT_TRUE(r.empty());
  EXPECT_TRUE(has_class(out.frame, FrameClass::kTransitive));

  Model loop = with_p(one_point(true), {});
  Model l2 = transitive_lift(loop);
  EXPECT_EQ(l2.frame.r(Group{1}), Rel::from_pairs(2, {{0, 1}}));
  EXPECT_EQ(l2.frame.names, (std::vector<std::string>{"w0|0", "w0|1"}));
  EXPECT_TRUE(has_class(l2.frame, FrameClass::kTransitive));
  Formula f = parse("<a>T", loop.frame.agents);
  EXPECT_EQ(satisfies(loop, 0, f), satisfies(l2, 0, f));
  EXPECT_TRUE(satisfies(l2, 0, f));
}

TEST(TransitiveLift, ClaimAndClasses) {
  for (std::size_t k = 1; k <= 2; ++k)
    for (const auto& m : small_models(FrameClass::kAll, k == 1 ? 3 : 2, k, 20000, 19)) {
      Model out = transitive_lift(m);
      ASSERT_TRUE(has_class(out.frame, FrameClass::kTransitive));
      for (auto c : {FrameClass::kPrestandard, FrameClass::kStandard})
        if (has_class(m.frame, c)) ASSERT_TRUE(has_class(out.frame, c));
      auto r = LiftChecker(m.frame, out.frame, 2).check(m.val, ClosureOptions{{"p"}, {}, 2});
      ASSERT_TRUE(r.ok) << r.detail;
    }
  Model m = with_p(Frame(AgentSet::standard(1), Rel::identity(2), {Rel::from_pairs(2, {{0, 1}, {1, 0}})}), {0});
  expect_lift_pointwise(m, transitive_lift(m), 2, 2);
}

TEST(RsCollapse, Examples) {
  Model one = with_p(one_point(true), {0});
  EXPECT_EQ(rs_collapse(one).frame, one.frame);
  EXPECT_THROW(rs_collapse(Model{testing_support::chain2(), {}}), PreconditionError);
}

TEST(RsCollapse, ClaimOnUdFrames) {
  std::size_t proper = 0;
  for (std::size_t k = 1; k <= 2; ++k)
    for (const auto& m : small_models(FrameClass::kUd, 3, k, 20000, 23)) {
      Model out = rs_collapse(m);
      ASSERT_TRUE(has_class(out.frame, FrameClass::kRs));
      ASSERT_EQ(out.frame.leq, m.frame.leq);
      if (has_class(m.frame, FrameClass::kRs))
        for (auto g : m.frame.agents.groups()) ASSERT_TRUE(m.frame.r(g).is_subset_of(out.frame.r(g)));
      else
        ++proper;
      auto r = LiftChecker(m.frame, out.frame, 1).check(m.val, ClosureOptions{{"p"}, {}, 2});
      ASSERT_TRUE(r.ok) << r.detail;
    }
  EXPECT_GT(proper, 0u);
}

TEST(PartitionLift, Examples) {
  Model one = with_p(one_point(true), {0});
  Model out = partition_lift(one);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_EQ(out.frame, one.frame);

  Model two = with_p(Frame(AgentSet::standard(1), Rel::identity(2), {Rel::full(2)}), {0});
  Model o2 = partition_lift(two);
  EXPECT_TRUE(has_class(o2.frame, FrameClass::kPartition));
  EXPECT_TRUE(check_partition_relations(two, o2, LiftVariant::kPlain).ok);
  EXPECT_THROW(partition_lift(Model{testing_support::chain2(), {}}), PreconditionError);
}

TEST(PartitionLift, RelationMatchesDefinition) {
  for (const auto& m : small_models(FrameClass::kRs, 3, 1, 20000, 29)) {
    Model out = partition_lift(m);
    JFunctionSpace J(m.frame);
    const std::size_t nj = J.size();
    for (auto b : m.frame.agents.groups())
      for (std::size_t x = 0; x < out.size(); ++x)
        for (std::size_t y = 0; y < out.size(); ++y) {
          std::size_t t = x / nj, u = y / nj;
          bool want = m.frame.r(b).contains(t, u);
          std::size_t gt = J.value(x % nj, t, b), hu = J.value(y % nj, u, b);
          want = want && ((t == u && gt == hu) || (t == hu && gt == u));
          ASSERT_EQ(out.frame.r(b).contains(x, y), want);
        }
  }
}

TEST(PartitionLift, TwoAgentRelationsMatchDefinition) {
  std::size_t seen = 0;
  for (const auto& m : small_models(FrameClass::kRs, 2, 2, 20000, 37))
    for (auto v : {LiftVariant::kPlain, LiftVariant::kPrestandard}) {
      if (v == LiftVariant::kPrestandard && !has_class(m.frame, FrameClass::kPrestandard)) continue;
      ++seen;
      Model out = partition_lift(m, v);
      JFunctionSpace J(m.frame);
      const std::size_t nj = J.size();
      for (auto b : m.frame.agents.groups())
        for (std::size_t x = 0; x < out.size(); ++x)
          for (std::size_t y = 0; y < out.size(); ++y)
            ASSERT_EQ(out.frame.r(b).contains(x, y), partition_related(m.frame, J, v, b, x / nj, x % nj, y / nj, y % nj));
    }
  EXPECT_GT(seen, 10u);
}

TEST(PartitionLift, ClaimAndClasses) {
  std::size_t skipped = 0, done = 0;
  for (std::size_t k = 1; k <= 2; ++k) {
    auto models = small_models(FrameClass::kRs, 3, k, 20000, 31);
    const std::size_t stride = k == 1 ? 1 : 61;
    for (std::size_t mi = 0; mi < models.size(); mi += stride) {
      const Model& m = models[mi];
      for (auto v : {LiftVariant::kPlain, LiftVariant::kPrestandard}) {
        if (v == LiftVariant::kPrestandard && !has_class(m.frame, FrameClass::kPrestandard)) continue;
        Model out;
        try {
          out = partition_lift(m, v);
        } catch (const BudgetExceeded&) {
          ++skipped;
          continue;
        }
        ++done;
        ASSERT_TRUE(has_class(out.frame, FrameClass::kPartition));
        if (v == LiftVariant::kPrestandard) ASSERT_TRUE(has_class(out.frame, FrameClass::kPrestandard));
        auto r = LiftChecker(m.frame, out.frame, out.size() / m.size()).check(m.val, ClosureOptions{{"p"}, {}, 2});
        ASSERT_TRUE(r.ok) << r.detail;
        auto rel = check_partition_relations(m, out, v);
        ASSERT_TRUE(rel.ok) << rel.detail;
      }
    }
  }
  EXPECT_GT(done, 50u);
  RecordProperty("skipped", static_cast<int>(skipped));
}

TEST(PartitionLift, JFunctionIndexing) {
  Frame f(AgentSet::standard(1), Rel::identity(2), {Rel::full(2)});
  JFunctionSpace J(f);
  EXPECT_EQ(J.size(), 4u);
  // identity: g(0)=0 (digit 0), g(1)=1 (digit 1); first cell most significant.
  EXPECT_EQ(J.identity(), 1u);
  EXPECT_EQ(J.value(2, 0, Group{1}), 1u);
  EXPECT_EQ(J.with_value(0, 1, Group{1}, 1), 1u);
}

TEST(Mono, ExpandAndCollapseExamples) {
  MonoModel one{MonoStructure{Rel::identity(1), Rel::identity(1), {"w0"}}, {{"p", StateSet::full(1)}}};
  Model ex = expand_mono(one, AgentSet::standard(2), IelKind::kFull);
  EXPECT_EQ(ex.size(), 1u);
  EXPECT_TRUE(has_class(ex.frame, FrameClass::kStandard));
  EXPECT_TRUE(has_class(ex.frame, FrameClass::kDoxastic));
  EXPECT_TRUE(has_class(ex.frame, FrameClass::kEpistemic));

  MonoModel back = collapse_mono(Model{one_point(true), {}}, Group{1});
  EXPECT_TRUE(is_iel_structure(back.structure, IelKind::kMinus));

  Model empty{testing_support::chain2(), {}};
  MonoModel e = collapse_mono(empty, Group{1});
  EXPECT_TRUE(e.structure.r.empty());
  EXPECT_TRUE(is_iel_structure(e.structure, IelKind::kMinus));
  EXPECT_THROW(collapse_mono(empty, Group{1}, IelKind::kFull), PreconditionError);

  MonoModel bad{MonoStructure{Rel::from_pairs(2, {{0, 0}, {0, 1}, {1, 1}}), Rel::from_pairs(2, {{1, 0}}), {}}, {}};
  EXPECT_THROW(expand_mono(bad, AgentSet::standard(1)), PreconditionError);
}

TEST(Mono, TauClaimBothDirections) {
  std::mt19937_64 rng(37);
  std::size_t structures = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (auto leq : all_preorders(n))
      for (std::uint64_t rm = 0; rm < (std::uint64_t{1} << (n * n)); ++rm) {
        MonoStructure s{Rel::from_mask(n, leq), Rel::from_mask(n, rm), {}};
        if (!is_iel_structure(s, IelKind::kMinus)) continue;
        ++structures;
        Frame tmp(AgentSet::standard(1), s.leq, {s.r});
        MonoModel mm{s, random_valuation(rng, tmp, {"p"})};
        Model ex = expand_mono(mm, AgentSet::standard(2));
        ASSERT_TRUE(has_class(ex.frame, FrameClass::kDoxastic));
        ASSERT_TRUE(has_class(ex.frame, FrameClass::kStandard));
        for (auto g : ex.frame.agents.groups()) ASSERT_TRUE(check_tau_claim(ex, mm, g, 2).ok);
        MonoModel back = collapse_mono(ex, Group{1});
        ASSERT_TRUE(is_iel_structure(back.structure, IelKind::kMinus));
        ASSERT_TRUE(check_tau_claim(ex, back, Group{1}, 2).ok);
        if (is_iel_structure(s, IelKind::kFull)) {
          ASSERT_TRUE(has_class(expand_mono(mm, AgentSet::standard(1), IelKind::kFull).frame, FrameClass::kEpistemic));
          ASSERT_TRUE(is_iel_structure(collapse_mono(ex, Group{1}, IelKind::kFull).structure, IelKind::kFull));
        }
      }
  EXPECT_GT(structures, 20u);
}

TEST(Mono, TauClaimPointwiseOracle) {
  MonoStructure s{Rel::from_pairs(2, {{0, 0}, {0, 1}, {1, 1}}), Rel::from_pairs(2, {{0, 1}, {1, 1}}), {}};
  MonoModel mm{s, {{"p", StateSet::from_list(2, {1})}}};
  Model ex = expand_mono(mm, AgentSet::standard(1));
  for (const auto& f : oracle::enumerate({"p"}, {Group{1}}, 2)) {
    if (!is_diamond_free(f)) continue;
    for (std::size_t t = 0; t < 2; ++t)
      ASSERT_EQ(oracle::sat(ex, t, f), oracle::mono_sat(mm, t, tau(f)));
  }
}
