// Copyright 2026 The sdid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "support.hpp"

namespace sdid {
namespace {

using testing::kTableTol;
using testing::kValueTol;

InfluenceDiagram two_node(double pa, double pb0, double pb1) {
  InfluenceDiagram g;
  auto a = g.add_node("a", NodeKind::kRandom, {"0", "1"});
  auto b = g.add_node("b", NodeKind::kRandom, {"0", "1"});
  g.add_arc(a, b);
  g.set_cpt(Cpt{a, {}, {1 - pa, pa}});
  g.set_cpt(Cpt{b, {a}, {1 - pb0, pb0, 1 - pb1, pb1}});
  return g;
}

// Random DAG with positive CPTs on every node.
InfluenceDiagram random_network(Rng& rng, std::size_t n) {
  auto g = random_dag(rng, n, 0.4);
  for (NodeIndex v = 0; v < g.size(); ++v) {
    NodeSet ps = g.parents(v);
    g.set_cpt(Cpt{v, ps, gen_detail::positive_rows(rng, product_of(g.cards(ps)), 2)});
  }
  return g;
}

void expect_same_joint(const InfluenceDiagram& a, const InfluenceDiagram& b) {
  auto ja = joint_distribution(a, {});
  auto jb = joint_distribution(b, {});
  ASSERT_EQ(ja.table.size(), jb.table.size());
  for (std::size_t i = 0; i < ja.table.size(); ++i) {
    ASSERT_NEAR(ja.table[i], jb.table[i], kTableTol);
  }
}

TEST(ReverseArc, BayesRule) {
  // P(a=1) = 0.3, P(b=1 | a) = (0.2, 0.9): P(b=1) = 0.7*0.2 + 0.3*0.9 = 0.41.
  auto g = reverse_arc(two_node(0.3, 0.2, 0.9), 0, 1);
  EXPECT_TRUE(g.has_arc(1, 0));
  EXPECT_FALSE(g.has_arc(0, 1));
  const auto& b = *g.cpt(1);
  EXPECT_TRUE(b.parents.empty());
  EXPECT_NEAR(b.rows[1], 0.41, kTableTol);
  const auto& a = *g.cpt(0);
  EXPECT_EQ(a.parents, NodeSet{1});
  EXPECT_NEAR(a.rows[1], 0.3 * 0.1 / 0.59, kTableTol);  // P(a=1 | b=0)
  EXPECT_NEAR(a.rows[3], 0.27 / 0.41, kTableTol);       // P(a=1 | b=1)
}

TEST(ReverseArc, ImpossibleConditionGetsUniformRow) {
  auto g = reverse_arc(two_node(0.3, 0.0, 0.0), 0, 1);
  const auto& a = *g.cpt(0);
  EXPECT_DOUBLE_EQ(a.rows[2], 0.5);
  EXPECT_DOUBLE_EQ(a.rows[3], 0.5);
  expect_same_joint(two_node(0.3, 0.0, 0.0), g);
}

TEST(ReverseArc, Involution) {
  auto g = two_node(0.35, 0.6, 0.15);
  auto back = reverse_arc(reverse_arc(g, 0, 1), 1, 0);
  EXPECT_EQ(back.arcs(), g.arcs());
  for (NodeIndex v : {0, 1}) {
    ASSERT_EQ(back.cpt(v)->rows.size(), g.cpt(v)->rows.size());
    for (std::size_t i = 0; i < g.cpt(v)->rows.size(); ++i) {
      EXPECT_NEAR(back.cpt(v)->rows[i], g.cpt(v)->rows[i], kTableTol);
    }
  }
}

TEST(ReverseArc, PreservesJointOnRandomNetworks) {
  Rng rng(2024);
  int reversed = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_network(rng, 3 + rng.below(4));
    for (auto [a, b] : g.arcs()) {
      if (has_indirect_path(g, a, b)) continue;
      auto r = reverse_arc(g, a, b);
      ASSERT_TRUE(validate(r).ok());
      expect_same_joint(g, r);
      ++reversed;
    }
  }
  EXPECT_GT(reversed, 40);
}

TEST(ReverseArc, Errors) {
  auto g = two_node(0.5, 0.5, 0.5);
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;
  };
  EXPECT_EQ(code([&] { reverse_arc(g, 1, 0); }), ErrorCode::kSchema);
  auto w = wildcatter();
  EXPECT_EQ(code([&] { reverse_arc(w, w.index_of("test"), w.index_of("test-result")); }),
            ErrorCode::kNotRandom);
  // a -> b -> c plus a -> c: reversing a -> c would close a cycle.
  InfluenceDiagram t;
  auto a = t.add_node("a", NodeKind::kRandom, {"0", "1"});
  auto b = t.add_node("b", NodeKind::kRandom, {"0", "1"});
  auto c = t.add_node("c", NodeKind::kRandom, {"0", "1"});
  t.add_arc(a, b);
  t.add_arc(b, c);
  t.add_arc(a, c);
  EXPECT_EQ(code([&] { reverse_arc(t, a, c); }), ErrorCode::kCycleWouldForm);
}

TEST(Smooth, Wildcatter) {
  auto g = wildcatter();
  auto s = smooth(g);
  EXPECT_TRUE(is_smooth(s));
  EXPECT_TRUE(is_stepwise_decomposable(s));
  auto ss = s.index_of("seismic-structure");
  auto tr = s.index_of("test-result");
  EXPECT_TRUE(s.has_arc(tr, ss));
  EXPECT_FALSE(s.has_arc(ss, tr));
  EXPECT_EQ(s.parents(tr), NodeSet{s.index_of("test")});
  for (NodeIndex d : g.nodes_of_kind(NodeKind::kDecision)) {
    EXPECT_EQ(s.parents(d), g.parents(d));
  }
  EXPECT_TRUE(validate(s).ok());
}

TEST(Smooth, SmoothDiagramIsUntouched) {
  auto g = umbrella();
  EXPECT_EQ(serialize_diagram(smooth(g)), serialize_diagram(g));
}

TEST(Smooth, StrongEquivalenceOnRandomDiagrams) {
  for (const auto& g : testing::corpus(Smoothness::kNonSmooth, 4, 21)) {
    ASSERT_FALSE(is_smooth(g));
    auto s = smooth(g);
    ASSERT_TRUE(is_smooth(s));
    auto best = brute_force_optimal(g);
    auto best_s = brute_force_optimal(s);
    EXPECT_NEAR(best.value, best_s.value, kValueTol);
    EXPECT_NEAR(expected_value(s, best.policy), best.value, kValueTol);
    EXPECT_NEAR(expected_value(g, best_s.policy), best.value, kValueTol);
  }
}

TEST(MakeRoot, WildcatterSeismicStructure) {
  auto g = wildcatter();
  auto ss = g.index_of("seismic-structure");
  auto r = make_root(g, ss);
  EXPECT_TRUE(r.parents(ss).empty());
  EXPECT_TRUE(validate(r).ok());
  EXPECT_NEAR(brute_force_optimal(r).value, brute_force_optimal(g).value, kValueTol);
}

TEST(MakeRoot, RandomNetworksKeepJoint) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_network(rng, 5);
    NodeIndex c = g.size() - 1;
    auto r = make_root(g, c);
    EXPECT_TRUE(r.parents(c).empty());
    expect_same_joint(g, r);
  }
}

TEST(MakeRoot, RejectsDecisionParent) {
  auto g = umbrella(true);
  EXPECT_THROW(make_root(g, g.index_of("v")), Error);
  auto w = wildcatter();
  try {
    make_root(w, w.index_of("test-result"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotRandom);
  }
}

TEST(PadValueParents, ReplicatesRowsAndKeepsValue) {
  auto g = smooth(wildcatter());
  auto sections = extract_sections(g);
  auto drill = g.index_of("drill");
  // Section 2 holds drill-cost, which already depends on drill; section 3's
  // value nodes get drill as an extra parent.
  auto padded = pad_value_parents(g, drill, sections[3]);
  auto sales = padded.index_of("oil-sales");
  EXPECT_TRUE(padded.has_arc(drill, sales));
  const auto& before = *g.value_table(sales);
  const auto& after = *padded.value_table(sales);
  ASSERT_EQ(after.rows.size(), before.rows.size() * 2);
  for (std::size_t r = 0; r < before.rows.size(); ++r) {
    EXPECT_EQ(after.rows[2 * r], before.rows[r]);
    EXPECT_EQ(after.rows[2 * r + 1], before.rows[r]);
  }
  EXPECT_NEAR(brute_force_optimal(padded).value, brute_force_optimal(g).value, kValueTol);
}

}  // namespace
}  // namespace sdid
