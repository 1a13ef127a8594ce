#include <gtest/gtest.h>

#include <random>

#include "ieml/claims.hpp"
#include "ieml/parser.hpp"
#include "ieml/semantics.hpp"
#include "support/oracle.hpp"
#include "support/frames.hpp"

using namespace ieml;
using testing_support::chain2;
using testing_support::one_point;
using testing_support::random_frame;
using testing_support::random_valuation;

TEST(CheckFrame, Examples) {
  EXPECT_TRUE(check_frame(one_point(true)).ok);
  Frame f = one_point(true);
  f.leq = Rel(1);
  auto rep = check_frame(f);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.violations.front(), "not reflexive");
  Frame g(AgentSet(), Rel::identity(3), {Rel(3)});
  g.leq.add(0, 1);
  g.leq.add(1, 2);
  rep = check_frame(g);
  ASSERT_FALSE(rep.ok);
  EXPECT_EQ(rep.violations.front(), "not transitive");
  Frame h(AgentSet::standard(2), Rel::identity(1), {Rel(1)});
  EXPECT_FALSE(check_frame(h).ok);
}

TEST(UpSets, Examples) {
  EXPECT_EQ(up_sets(Rel::identity(1)), (std::vector<StateSet>{StateSet(1), StateSet::full(1)}));
  auto chain = chain2().leq;
  EXPECT_EQ(up_sets(chain), (std::vector<StateSet>{StateSet(2), StateSet::from_list(2, {1}), StateSet::full(2)}));
  EXPECT_EQ(up_sets(Rel::identity(2)).size(), 4u);
  EXPECT_THROW(up_sets(Rel::identity(5), 10), BudgetExceeded);
}

TEST(UpSets, MatchesFilteredPowerset) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rng() % 6;
    Rel r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 4 == 0) r.add(i, j);
    Rel leq = reflexive_transitive_closure(r);
    std::vector<StateSet> want;
    for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
      bool closed = true;
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
          if ((m >> s & 1) && leq.contains(s, t) && !(m >> t & 1)) closed = false;
      if (closed) want.push_back(StateSet::from_mask(n, m));
    }
    ASSERT_EQ(up_sets(leq), want);
  }
}

TEST(Satisfies, Examples) {
  const AgentSet ag;
  Model top{one_point(false), {}};
  EXPECT_TRUE(satisfies(top, 0, Formula::top()));
  Model m{chain2(), {{"p", StateSet::from_list(2, {1})}}};
  EXPECT_FALSE(satisfies(m, 0, parse("p \\/ ~p", ag)));
  EXPECT_TRUE(satisfies(m, 1, parse("p \\/ ~p", ag)));
  EXPECT_FALSE(true_in_model(m, parse("p", ag)));
  EXPECT_TRUE(true_in_model(m, Formula::top()));
  Model dox{chain2(), {{"p", StateSet(2)}}};
  EXPECT_TRUE(satisfies(dox, 0, parse("[a]p", ag)));
  Model refl{one_point(true), {{"p", StateSet::full(1)}}};
  EXPECT_TRUE(true_in_model(refl, parse("[a]p", ag)));
  EXPECT_THROW(satisfies(refl, 1, Formula::top()), std::out_of_range);
}

TEST(Satisfies, AgreesWithPointwiseOracle) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 1 + rng() % 4, k = 1 + rng() % 2;
    Frame f = random_frame(rng, n, k);
    Model m{f, random_valuation(rng, f, {"p", "q"})};
    auto groups = f.agents.groups();
    for (int j = 0; j < 10; ++j) {
      auto a = oracle::random_formula(rng, {"p", "q"}, groups, 3);
      auto ts = truth_set(m, a);
      for (std::size_t s = 0; s < n; ++s) ASSERT_EQ(ts.test(s), oracle::sat(m, s, a)) << render(a, f.agents);
      for (auto sem : {DiamondSemantics::kWijesekera}) {
        auto tv = truth_set(m, a, sem);
        for (std::size_t s = 0; s < n; ++s) ASSERT_EQ(tv.test(s), oracle::sat(m, s, a, sem));
      }
    }
  }
}

TEST(Satisfies, Heredity) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 200; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 4, 1 + rng() % 2);
    Model m{f, random_valuation(rng, f, {"p", "q"})};
    auto res = check_heredity(m, ClosureOptions{{"p", "q"}, {}, 2});
    ASSERT_TRUE(res.ok) << res.detail;
  }
}

TEST(Satisfies, WordHeredityMatchesGeneralClosure) {
  std::mt19937_64 rng(31);
  int broken = 0;
  for (int it = 0; it < 300; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 5, 1 + rng() % 2);
    auto pf = std::make_shared<const PreparedFrame>(f);
    auto groups = f.agents.groups();
    Valuation v = random_valuation(rng, f, {"p", "q"});
    // A stray world in V(q) usually breaks closure somewhere.
    if (it % 2) v["q"].set(rng() % f.size());
    ClosureOptions opt{{"p", "q"}, groups, 2};
    ModelAlgebra alg(pf, v);
    FormulaClosure c({&alg}, opt);
    auto bad = c.run([&](const FormulaClosure::Entry& e) { return is_up_closed(f.leq, e.sets[0]); });
    auto small = detail::small_heredity(*pf, v, opt);
    ASSERT_EQ(small.ok, !bad);
    ASSERT_EQ(small.tuples, c.entries().size());
    if (bad) {
      ++broken;
      EXPECT_EQ(*small.witness, bad->witness);
    }

    detail::MaskAlgebra ma(*pf, groups);
    for (int k = 0; k < 20; ++k) {
      StateSet a = StateSet::from_mask(f.size(), rng()), b = StateSet::from_mask(f.size(), rng());
      EXPECT_EQ(ma.implies(a.to_mask(), b.to_mask()), alg.implies(a, b).to_mask());
      for (std::size_t g = 0; g < groups.size(); ++g) {
        EXPECT_EQ(ma.box(g, a.to_mask()), alg.box(groups[g], a).to_mask());
        EXPECT_EQ(ma.dia(g, a.to_mask()), alg.dia(groups[g], a).to_mask());
      }
    }
  }
  EXPECT_GT(broken, 10);
}

TEST(Closure, MatchesSyntacticEnumeration) {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 30; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 3, 1);
    Model m{f, random_valuation(rng, f, {"p"})};
    auto pf = std::make_shared<const PreparedFrame>(f);
    ModelAlgebra alg(pf, m.val);
    FormulaClosure c({&alg}, ClosureOptions{{"p"}, f.agents.groups(), 2});
    c.run([](const auto&) { return true; });
    std::set<StateSet> from_closure;
    for (const auto& e : c.entries()) {
      from_closure.insert(e.sets[0]);
      ASSERT_EQ(truth_set(m, e.witness), e.sets[0]);
      ASSERT_LE(e.witness.depth(), 2u);
    }
    std::set<StateSet> from_enum;
    for (const auto& a : oracle::enumerate({"p"}, f.agents.groups(), 2)) from_enum.insert(truth_set(m, a));
    ASSERT_EQ(from_closure, from_enum);
  }
}

TEST(Variants, OnePointAgree) {
  Model m{one_point(true), {{"p", StateSet::full(1)}}};
  auto f = parse("<a>p", AgentSet());
  for (auto v : {DiamondSemantics::kPrenosil, DiamondSemantics::kFischerServi, DiamondSemantics::kWijesekera})
    EXPECT_TRUE(satisfies_variant(m, 0, f, v));
}

TEST(Variants, PrenosilIsDefault) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 100; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 3, 2);
    Model m{f, random_valuation(rng, f, {"p"})};
    auto a = oracle::random_formula(rng, {"p"}, f.agents.groups(), 3);
    for (std::size_t s = 0; s < f.size(); ++s)
      ASSERT_EQ(satisfies(m, s, a), satisfies_variant(m, s, a, DiamondSemantics::kPrenosil));
  }
}

TEST(Variants, FischerServiRejectsNonConfluent) {
  // (0,1) ∈ ≥, 0 R 0 would need 1 R∘≥ 0: R(1) = ∅.
  Frame f(AgentSet(), Rel::from_pairs(2, {{0, 0}, {1, 1}, {0, 1}}), {Rel::from_pairs(2, {{0, 0}})});
  ASSERT_FALSE(has_class(f, FrameClass::kForwardConfluent));
  Model m{f, {}};
  EXPECT_THROW(satisfies_variant(m, 0, parse("<a>T", AgentSet()), DiamondSemantics::kFischerServi), PreconditionError);
}

TEST(Variants, AgreeOnForwardConfluentFrames) {
  std::mt19937_64 rng(37);
  int seen = 0;
  while (seen < 60) {
    Frame f = random_frame(rng, 1 + rng() % 3, 1 + rng() % 2);
    Rel geq = f.leq.converse();
    for (auto& r : f.rel) r = compose(geq, r);
    ASSERT_TRUE(has_class(f, FrameClass::kForwardConfluent));
    Model m{f, random_valuation(rng, f, {"p"})};
    auto res = check_variant_agreement(m, ClosureOptions{{"p"}, {}, 2});
    ASSERT_TRUE(res.ok) << res.detail;
    auto a = oracle::random_formula(rng, {"p"}, f.agents.groups(), 3);
    for (std::size_t s = 0; s < f.size(); ++s) {
      bool p = oracle::sat(m, s, a, DiamondSemantics::kPrenosil);
      ASSERT_EQ(p, oracle::sat(m, s, a, DiamondSemantics::kFischerServi));
      ASSERT_EQ(p, oracle::sat(m, s, a, DiamondSemantics::kWijesekera));
    }
    ++seen;
  }
}

TEST(Validity, Examples) {
  const AgentSet ag;
  EXPECT_TRUE(valid_in_frame(chain2(), Formula::top()));
  EXPECT_TRUE(valid_in_frame(chain2(), parse("[a]p /\\ [a]q -> [a](p /\\ q)", ag)));
  auto w = find_falsifying_valuation(chain2(), parse("p \\/ ~p", ag));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->first.at("p"), StateSet::from_list(2, {1}));
  EXPECT_EQ(w->second, 0u);
}

TEST(Validity, RenamingInvariantAndMatchesFullEnumeration) {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 150; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 3, 1 + rng() % 2);
    auto a = oracle::random_formula(rng, {"p", "q"}, f.agents.groups(), 3);
    auto renamed = substitute(a, Substitution<Group>{{"p", Formula::atom("x1")}, {"q", Formula::atom("y")}});
    bool v = valid_in_frame(f, a);
    ASSERT_EQ(v, valid_in_frame(f, renamed));
    // Independent check: all valuations over p, q and an unused r.
    bool all = true;
    auto ups = up_sets(f.leq);
    for (const auto& x : ups)
      for (const auto& y : ups)
        for (const auto& z : ups) {
          Model m{f, {{"p", x}, {"q", y}, {"r", z}}};
          for (std::size_t s = 0; s < f.size(); ++s) all = all && oracle::sat(m, s, a);
        }
    ASSERT_EQ(v, all);
  }
}

TEST(Validity, BoxAntitoneInRelation) {
  std::mt19937_64 rng(43);
  for (int it = 0; it < 200; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 4, 1);
    Frame g = f;
    for (std::size_t s = 0; s < f.size(); ++s)
      for (std::size_t t = 0; t < f.size(); ++t)
        if (rng() % 3 == 0) g.rel[0].add(s, t);
    Valuation v = random_valuation(rng, f, {"p"});
    auto small = truth_set(Model{f, v}, parse("[a]p", f.agents));
    auto big = truth_set(Model{g, v}, parse("[a]p", f.agents));
    ASSERT_TRUE(big.is_subset_of(small));
  }
}

TEST(Validity, BudgetExceeded) {
  Frame f(AgentSet(), Rel::identity(6), {Rel(6)});
  EXPECT_THROW(valid_in_frame(f, parse("p /\\ q /\\ r /\\ s -> p", AgentSet()), 1000), BudgetExceeded);
}
