#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ieml/frame_classes.hpp"
#include "ieml/search.hpp"
#include "support/frames.hpp"

using namespace ieml;
using testing_support::chain2;
using testing_support::one_point;
using testing_support::random_frame;

namespace {

// Pointwise readings of the class definitions.
bool ref_doxastic(const Frame& f) {
  for (const auto& r : f.rel)
    for (auto [s, t] : r.pairs())
      if (!f.leq.contains(s, t)) return false;
  return true;
}

bool ref_epistemic(const Frame& f) {
  if (!ref_doxastic(f)) return false;
  for (const auto& r : f.rel)
    for (std::size_t s = 0; s < f.size(); ++s) {
      bool found = false;
      for (std::size_t v = 0; v < f.size(); ++v)
        for (std::size_t t = 0; t < f.size(); ++t) found = found || (f.leq.contains(s, v) && r.contains(v, t));
      if (!found) return false;
    }
  return true;
}

// s ≤∘R∘≤ t (up) or s ≥∘R∘≥ t (down)
bool detour(const Frame& f, const Rel& r, std::size_t s, std::size_t t, bool up) {
  auto le = [&](std::size_t x, std::size_t y) { return up ? f.leq.contains(x, y) : f.leq.contains(y, x); };
  for (std::size_t v = 0; v < f.size(); ++v)
    for (std::size_t w = 0; w < f.size(); ++w)
      if (le(s, v) && r.contains(v, w) && le(w, t)) return true;
  return false;
}

bool ref_ud(const Frame& f) {
  for (const auto& r : f.rel)
    for (std::size_t s = 0; s < f.size(); ++s) {
      if (!detour(f, r, s, s, true) || !detour(f, r, s, s, false)) return false;
      for (std::size_t t = 0; t < f.size(); ++t)
        if (r.contains(s, t) && (!detour(f, r, t, s, true) || !detour(f, r, t, s, false))) return false;
    }
  return true;
}

bool ref_forward_confluent(const Frame& f) {
  for (const auto& r : f.rel)
    for (std::size_t s = 0; s < f.size(); ++s)
      for (std::size_t v = 0; v < f.size(); ++v)
        for (std::size_t t = 0; t < f.size(); ++t) {
          if (!(f.leq.contains(v, s) && r.contains(v, t))) continue;
          bool ok = false;
          for (std::size_t w = 0; w < f.size(); ++w) ok = ok || (r.contains(s, w) && f.leq.contains(t, w));
          if (!ok) return false;
        }
  return true;
}

bool ref_prestandard(const Frame& f, bool eq) {
  for (auto a : f.agents.groups())
    for (auto b : f.agents.groups())
      for (std::size_t s = 0; s < f.size(); ++s)
        for (std::size_t t = 0; t < f.size(); ++t) {
          bool u = f.r(a | b).contains(s, t), m = f.r(a).contains(s, t) && f.r(b).contains(s, t);
          if (u && !m) return false;
          if (eq && m && !u) return false;
        }
  return true;
}

bool has(const std::vector<FrameClass>& v, FrameClass c) { return std::find(v.begin(), v.end(), c) != v.end(); }

}  // namespace

TEST(FrameClasses, OnePointFullHasEveryTag) {
  for (std::size_t k = 1; k <= 3; ++k) {
    auto tags = classify(one_point(true, k));
    EXPECT_EQ(tags.size(), kAllFrameClasses.size());
  }
}

TEST(FrameClasses, ChainWithEmptyRelations) {
  Frame f = chain2();
  EXPECT_TRUE(has_class(f, FrameClass::kDoxastic));
  EXPECT_FALSE(has_class(f, FrameClass::kEpistemic));
  EXPECT_FALSE(has_class(f, FrameClass::kUd));
}

TEST(FrameClasses, StandardByIntersection) {
  Frame f(AgentSet::standard(2), Rel::identity(2),
          {Rel::from_pairs(2, {{0, 0}, {1, 1}}), Rel::from_pairs(2, {{0, 0}}), Rel::from_pairs(2, {{0, 0}})});
  EXPECT_TRUE(has_class(f, FrameClass::kStandard));
  f.rel[2] = Rel(2);
  EXPECT_TRUE(has_class(f, FrameClass::kPrestandard));
  EXPECT_FALSE(has_class(f, FrameClass::kStandard));
}

TEST(FrameClasses, NamesRoundTrip) {
  for (auto c : kAllFrameClasses) EXPECT_EQ(parse_frame_class(name(c)), c);
  EXPECT_FALSE(parse_frame_class("nope"));
}

TEST(FrameClasses, AgreeWithPointwiseDefinitions) {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 3000; ++it) {
    Frame f = random_frame(rng, 1 + rng() % 4, 1 + rng() % 2);
    if (it % 3 == 0)
      for (auto& r : f.rel) r &= f.leq;
    if (it % 5 == 0)
      for (auto& r : f.rel) r = r | r.converse() | Rel::identity(f.size());
    if (it % 7 == 0) f.rel.back() = f.rel.back() & f.rel.front();
    auto tags = classify(f);
    for (auto c : kAllFrameClasses) ASSERT_EQ(has(tags, c), has_class(f, c)) << name(c);
    ASSERT_EQ(has_class(f, FrameClass::kDoxastic), ref_doxastic(f));
    ASSERT_EQ(has_class(f, FrameClass::kEpistemic), ref_epistemic(f));
    ASSERT_EQ(has_class(f, FrameClass::kUd), ref_ud(f));
    ASSERT_EQ(has_class(f, FrameClass::kForwardConfluent), ref_forward_confluent(f));
    ASSERT_EQ(has_class(f, FrameClass::kPrestandard), ref_prestandard(f, false));
    ASSERT_EQ(has_class(f, FrameClass::kStandard), ref_prestandard(f, true));
    ASSERT_EQ(has_class(f, FrameClass::kRs), has_class(f, FrameClass::kReflexive) && has_class(f, FrameClass::kSymmetric));
    ASSERT_EQ(has_class(f, FrameClass::kUd),
              has_class(f, FrameClass::kUdReflexive) && has_class(f, FrameClass::kUdSymmetric));
  }
}

TEST(FrameClasses, InclusionChainsOnSmallFrames) {
  for (std::size_t k = 1; k <= 2; ++k) {
    SizeBudget b;
    b.max_states = 3;
    b.max_agents = k;
    b.max_candidates = 20000;
    b.seed = 5;
    std::size_t seen = 0, rs = 0;
    for_each_frame(b, FrameClass::kAll, [&](const Frame& f) {
      ++seen;
      auto tags = classify(f);
      if (has(tags, FrameClass::kPartition)) EXPECT_TRUE(has(tags, FrameClass::kRs));
      if (has(tags, FrameClass::kRs)) {
        ++rs;
        EXPECT_TRUE(has(tags, FrameClass::kUd));
      }
      if (has(tags, FrameClass::kStandard)) EXPECT_TRUE(has(tags, FrameClass::kPrestandard));
      if (has(tags, FrameClass::kEpistemic)) EXPECT_TRUE(has(tags, FrameClass::kDoxastic));
      if (has(tags, FrameClass::kStandard))
        for (auto g : f.agents.groups()) {
          Rel meet = Rel::full(f.size());
          for (std::size_t a = 0; a < k; ++a)
            if (g.contains(a)) meet &= f.r(Group::singleton(a));
          EXPECT_EQ(f.r(g), meet);
        }
      return true;
    });
    EXPECT_GT(seen, 100u);
    EXPECT_GT(rs, 0u);
  }
  for (auto c : {FrameClass::kRs, FrameClass::kPartition, FrameClass::kStandard}) {
    SizeBudget b;
    b.max_states = 3;
    b.max_agents = 2;
    b.max_candidates = 5000;
    std::size_t n = 0;
    for_each_frame(b, c, [&](const Frame& f) {
      ++n;
      if (c == FrameClass::kRs || c == FrameClass::kPartition) EXPECT_TRUE(has_class(f, FrameClass::kUd));
      if (c == FrameClass::kStandard) EXPECT_TRUE(has_class(f, FrameClass::kPrestandard));
      return true;
    });
    EXPECT_GT(n, 0u);
  }
}

TEST(IelStructures, Examples) {
  MonoStructure one{Rel::identity(1), Rel::identity(1), {"w0"}};
  EXPECT_TRUE(is_iel_structure(one, IelKind::kMinus));
  EXPECT_TRUE(is_iel_structure(one, IelKind::kFull));
  Rel chain = Rel::from_pairs(2, {{0, 0}, {0, 1}, {1, 1}});
  MonoStructure empty{chain, Rel(2), {}};
  EXPECT_TRUE(is_iel_structure(empty, IelKind::kMinus));
  EXPECT_FALSE(is_iel_structure(empty, IelKind::kFull));
  // ≤∘R = {(0,1)} ⊆ R.
  MonoStructure single{chain, Rel::from_pairs(2, {{0, 1}}), {}};
  EXPECT_TRUE(is_iel_structure(single, IelKind::kMinus));
  EXPECT_FALSE(is_iel_structure(single, IelKind::kFull));
  MonoStructure bad{chain, Rel::from_pairs(2, {{1, 0}}), {}};
  EXPECT_FALSE(is_iel_structure(bad, IelKind::kMinus));
}
