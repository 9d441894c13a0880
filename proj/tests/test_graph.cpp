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

#include <set>

#include "support.hpp"

namespace sdid {
namespace {

using Edge = std::pair<NodeIndex, NodeIndex>;

InfluenceDiagram chain() {
  InfluenceDiagram g;
  auto a = g.add_node("a", NodeKind::kRandom, {"0", "1"});
  auto b = g.add_node("b", NodeKind::kRandom, {"0", "1"});
  auto c = g.add_node("c", NodeKind::kRandom, {"0", "1"});
  g.add_arc(a, b);
  g.add_arc(b, c);
  return g;
}

InfluenceDiagram collider() {
  InfluenceDiagram g;
  auto a = g.add_node("a", NodeKind::kRandom, {"0", "1"});
  auto b = g.add_node("b", NodeKind::kRandom, {"0", "1"});
  auto c = g.add_node("c", NodeKind::kRandom, {"0", "1"});
  g.add_arc(a, b);
  g.add_arc(c, b);
  return g;
}

NodeSet ids(const InfluenceDiagram& g, std::initializer_list<const char*> names) {
  NodeSet out;
  for (auto n : names) out.push_back(g.index_of(n));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(MoralGraph, Chain) {
  EXPECT_EQ(moral_graph(chain()).edges, (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(MoralGraph, ColliderMarriesParents) {
  EXPECT_EQ(moral_graph(collider()).edges, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(MoralGraph, WildcatterEdgesFromParentPairs) {
  auto g = wildcatter();
  auto m = moral_graph(g);
  // Enumerate arcs and co-parent pairs straight from the parent lists.
  std::set<Edge> expected;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    const auto& ps = g.parents(v);
    for (auto p : ps) expected.insert({std::min(p, v), std::max(p, v)});
    for (auto p : ps) {
      for (auto q : ps) {
        if (p < q) expected.insert({p, q});
      }
    }
  }
  EXPECT_EQ(std::set<Edge>(m.edges.begin(), m.edges.end()), expected);
  EXPECT_TRUE(m.adjacent(g.index_of("test"), g.index_of("test-result")));
  EXPECT_TRUE(m.adjacent(g.index_of("oil-produced"), g.index_of("market-information")));
}

TEST(MSeparation, Examples) {
  EXPECT_TRUE(m_separated(chain(), 0, 2, {1}));
  EXPECT_FALSE(m_separated(collider(), 0, 2, {1}));
  auto g = chain();
  EXPECT_TRUE(m_separated(g, 1, 0, {1}));
  EXPECT_TRUE(m_separated(g, 1, 2, {1}));
  EXPECT_FALSE(m_separated(g, 0, 2, {}));
}

TEST(MSeparation, AgreesWithPathEnumeration) {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_dag(rng, 2 + rng.below(6), 0.35);
    auto m = moral_graph(g);
    const std::size_t n = g.size();
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      NodeSet sep;
      std::vector<bool> blocked(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          sep.push_back(i);
          blocked[i] = true;
        }
      }
      for (NodeIndex x = 0; x < n; ++x) {
        for (NodeIndex y = 0; y < n; ++y) {
          if (x == y) continue;
          bool expect = blocked[x] || blocked[y] || !testing::connected_avoiding(m, x, y, blocked);
          ASSERT_EQ(m_separated(m, x, y, sep), expect);
        }
      }
    }
  }
}

TEST(Streams, Umbrella) {
  auto g = umbrella();
  EXPECT_EQ(downstream(g, g.index_of("d")), ids(g, {"w", "d", "v"}));
  EXPECT_TRUE(upstream(g, g.index_of("d")).empty());
}

TEST(Streams, IsolatedNodeIsUpstream) {
  auto g = umbrella();
  g.add_node("z", NodeKind::kRandom, {"0", "1"});
  g.set_cpt(Cpt{g.index_of("z"), {}, {0.5, 0.5}});
  auto up = upstream(g, g.index_of("d"));
  EXPECT_TRUE(std::binary_search(up.begin(), up.end(), g.index_of("z")));
}

TEST(Streams, WildcatterSmoothedTestResultUpstreamOfSale) {
  auto g = smooth(wildcatter());
  auto up = upstream(g, g.index_of("oil-sale-policy"));
  EXPECT_TRUE(std::binary_search(up.begin(), up.end(), g.index_of("test-result")));
  EXPECT_TRUE(std::binary_search(up.begin(), up.end(), g.index_of("seismic-structure")));
}

TEST(Streams, Partition) {
  for (const auto& g : testing::corpus(Smoothness::kAny, 10, 4)) {
    for (NodeIndex d : g.nodes_of_kind(NodeKind::kDecision)) {
      auto s = streams(g, moral_graph(g), d);
      auto frontier = membership(g.size(), g.parents(d));
      for (NodeIndex v = 0; v < g.size(); ++v) {
        int count = s.downstream[v] + s.upstream[v] + frontier[v];
        ASSERT_EQ(count, 1) << g.id(v);
      }
      EXPECT_TRUE(s.downstream[d]);
    }
  }
}

TEST(Sdid, WildcatterFigures) {
  auto fig1 = wildcatter();
  EXPECT_TRUE(is_stepwise_decomposable(fig1));
  EXPECT_FALSE(is_smooth(fig1));
  EXPECT_FALSE(is_smooth_at(fig1, fig1.index_of("drill")));
  EXPECT_EQ(non_smooth_decisions(fig1), NodeSet{fig1.index_of("drill")});
  EXPECT_TRUE(is_smooth(smooth(fig1)));
}

TEST(Sdid, Umbrella) {
  EXPECT_TRUE(is_stepwise_decomposable(umbrella()));
  EXPECT_TRUE(is_smooth(umbrella()));
}

TEST(Sdid, EarlierDecisionDownstreamIsRejected) {
  // d1 and d2 both influence one value node that d2 does not observe d1
  // through: d1 stays connected to d2's downstream.
  InfluenceDiagram g;
  auto d1 = g.add_node("d1", NodeKind::kDecision, {"0", "1"});
  auto x = g.add_node("x", NodeKind::kRandom, {"0", "1"});
  auto d2 = g.add_node("d2", NodeKind::kDecision, {"0", "1"});
  auto v = g.add_node("v", NodeKind::kValue);
  g.add_arc(d1, x);
  g.add_arc(x, d2);
  g.add_arc(d1, v);
  g.add_arc(d2, v);
  g.set_cpt(Cpt{x, {d1}, {0.5, 0.5, 0.5, 0.5}});
  g.set_value_table(ValueTable{v, {d1, d2}, {0, 1, 2, 3}});
  EXPECT_FALSE(is_stepwise_decomposable(g));
  try {
    extract_sections(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSdid);
  }
}

TEST(Sections, Umbrella) {
  auto g = umbrella();
  auto s = extract_sections(g);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(s[0].nodes.empty());
  EXPECT_TRUE(s[0].is_initial());
  EXPECT_EQ(s[1].nodes, ids(g, {"w", "d", "v"}));
  EXPECT_TRUE(s[1].is_terminal());
}

TEST(Sections, WildcatterFigure2) {
  auto g = smooth(wildcatter());
  auto s = extract_sections(g);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_TRUE(s[0].nodes.empty());
  EXPECT_EQ(*s[1].exit, ids(g, {"test", "test-result"}));
  EXPECT_EQ(s[2].entry, ids(g, {"test", "test-result"}));
  EXPECT_EQ(*s[2].exit, ids(g, {"oil-produced", "market-information"}));
  EXPECT_EQ(s[3].entry, ids(g, {"oil-produced", "market-information"}));
  EXPECT_EQ(s[1].nodes, ids(g, {"test", "test-cost", "test-result"}));
  EXPECT_EQ(s[3].nodes, ids(g, {"oil-produced", "market-information", "oil-sale-policy",
                                "sale-cost", "oil-sales"}));
}

TEST(Sections, RejectsNonSmooth) {
  try {
    extract_sections(wildcatter());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSmooth);
  }
}

TEST(Sections, NoDecisions) {
  auto g = chain();
  for (NodeIndex v = 0; v < 3; ++v) {
    NodeSet ps = g.parents(v);
    std::vector<double> rows;
    for (std::size_t r = 0; r < product_of(g.cards(ps)); ++r) rows.insert(rows.end(), {0.5, 0.5});
    g.set_cpt(Cpt{v, ps, rows});
  }
  auto s = extract_sections(g);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].nodes.size(), 3u);
}

TEST(Sections, PartitionProperties) {
  for (const auto& g : testing::corpus(Smoothness::kSmooth, 15, 5)) {
    auto sections = extract_sections(g);
    auto order = decision_ordering(g);
    std::vector<int> seen(g.size(), 0);
    for (const auto& s : sections) {
      for (auto v : s.nodes) ++seen[v];
    }
    std::vector<bool> frontier(g.size(), false);
    for (auto d : order) {
      for (auto p : g.parents(d)) frontier[p] = true;
    }
    for (NodeIndex v = 0; v < g.size(); ++v) {
      ASSERT_GE(seen[v], 1) << g.id(v);
      if (!frontier[v]) EXPECT_EQ(seen[v], 1) << g.id(v);
    }
    // Consecutive sections share exactly the frontier between them.
    for (std::size_t i = 0; i + 1 < sections.size(); ++i) {
      NodeSet shared;
      std::set_intersection(sections[i].nodes.begin(), sections[i].nodes.end(),
                            sections[i + 1].nodes.begin(), sections[i + 1].nodes.end(),
                            std::back_inserter(shared));
      EXPECT_EQ(shared, g.parents(order[i]));
    }
    // Arcs into decisions belong to no section, every other arc to one.
    for (auto [a, b] : g.arcs()) {
      int count = 0;
      for (const auto& s : sections) {
        count += std::count(s.arcs.begin(), s.arcs.end(), Arc{a, b});
      }
      EXPECT_EQ(count, g.kind(b) == NodeKind::kDecision ? 0 : 1) << g.id(a) << "->" << g.id(b);
    }
    // Initial section holds no decisions.
    for (auto v : sections[0].nodes) EXPECT_NE(g.kind(v), NodeKind::kDecision);
  }
}

}  // namespace
}  // namespace sdid
