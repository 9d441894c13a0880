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

double oracle_vpi(const InfluenceDiagram& g, const VpiQuery& q) {
  return brute_force_optimal(build_full_modified(g, q)).value - brute_force_optimal(g).value;
}

// Optimal value by enumerating the policies of every decision but the last
// and choosing the last one pointwise for each configuration of its parents.
double optimal_with_pointwise_last(const InfluenceDiagram& g) {
  auto order = decision_ordering(g);
  const NodeIndex last = order.back();
  const NodeSet& obs = g.parents(last);
  NodeSet vars;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (g.kind(v) != NodeKind::kValue) vars.push_back(v);
  }
  auto row = [&](const std::vector<NodeIndex>& parents, const std::vector<std::size_t>& a) {
    std::size_t r = 0;
    for (auto q : parents) r = r * g.card(q) + a[q];
    return r;
  };
  InfluenceDiagram head = g;
  for (auto p : obs) head.remove_arc(p, last);
  double best = -std::numeric_limits<double>::infinity();
  testing::for_each_policy(head, [&](const Policy& p) {
    // weight[parent row][option] = sum of probability times utility.
    std::vector<double> weight(product_of(g.cards(obs)) * g.card(last), 0.0);
    std::vector<std::size_t> a(g.size(), 0);
    for (Odometer o(g.cards(vars)); !o.done(); o.next()) {
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = o[i];
      double w = 1.0;
      for (auto v : vars) {
        if (g.kind(v) == NodeKind::kRandom) {
          w *= g.cpt(v)->rows[row(g.cpt(v)->parents, a) * g.card(v) + a[v]];
        } else if (v != last) {
          for (const auto& f : p.functions) {
            if (f.decision == v && f.table[row(f.parents, a)] != a[v]) w = 0.0;
          }
        }
      }
      if (w == 0.0) continue;
      double u = 0.0;
      for (NodeIndex v : g.nodes_of_kind(NodeKind::kValue)) {
        u += g.value_table(v)->rows[row(g.value_table(v)->parents, a)];
      }
      weight[row(obs, a) * g.card(last) + a[last]] += w * u;
    }
    double total = 0.0;
    for (std::size_t r = 0; r < weight.size(); r += g.card(last)) {
      total += *std::max_element(weight.begin() + r, weight.begin() + r + g.card(last));
    }
    best = std::max(best, total);
  });
  return best;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kParse;
}

std::vector<StageTag> tags(const VpiReport& r) {
  std::vector<StageTag> out;
  for (const auto& s : r.stages) out.push_back(s.tag);
  return out;
}

TEST(Vpi, Umbrella) {
  auto r = vpi(umbrella(), {"w", "d"});
  EXPECT_EQ(r.vpi, 1.0 - 0.7);
  EXPECT_EQ(r.original_value, 0.7);
  EXPECT_EQ(r.modified_value, 1.0);
  EXPECT_EQ(r.route, VpiRoute::kIncremental);
  EXPECT_EQ(r.s, 1u);
  EXPECT_EQ(r.t, 2u);
}

TEST(FindT, Wildcatter) {
  auto g = smooth(wildcatter());
  EXPECT_EQ(find_t(g, g.index_of("market-information")), 3u);
  EXPECT_EQ(find_t(g, g.index_of("seismic-structure")), 3u);
  EXPECT_EQ(find_t(g, g.index_of("oil-produced")), 3u);
}

TEST(FindT, TerminalOnly) {
  auto g = umbrella();
  EXPECT_EQ(find_t(g, g.index_of("w")), 2u);
}

TEST(Vpi, WildcatterMarketInformation) {
  auto g = wildcatter();
  auto r = vpi(g, {"market-information", "drill"});
  EXPECT_EQ(r.route, VpiRoute::kIncremental);
  EXPECT_EQ(r.s, 2u);
  EXPECT_EQ(r.t, 3u);
  EXPECT_EQ(tags(r), (std::vector<StageTag>{StageTag::kUnchanged, StageTag::kEntry,
                                            StageTag::kExitReused, StageTag::kUnchanged}));
  EXPECT_EQ(r.counters.eliminations_performed, 0u);
  EXPECT_GT(r.counters.eliminations_saved, 0u);
  EXPECT_NEAR(r.vpi, oracle_vpi(g, {"market-information", "drill"}), kValueTol);
  EXPECT_GT(r.vpi, 1.0);
}

TEST(Vpi, WildcatterSeismicStructureAtSalePolicyIsZero) {
  auto g = wildcatter();
  auto r = vpi(g, {"seismic-structure", "oil-sale-policy"});
  EXPECT_EQ(r.route, VpiRoute::kShortcut);
  EXPECT_EQ(r.vpi, 0.0);
  auto full = build_full_modified(g, {"seismic-structure", "oil-sale-policy"});
  EXPECT_NEAR(optimal_with_pointwise_last(full), r.original_value, kValueTol);
}

TEST(Vpi, PointwiseOracleAgreesWithBruteForce) {
  auto g = wildcatter();
  EXPECT_NEAR(optimal_with_pointwise_last(g), brute_force_optimal(g).value, kValueTol);
}

TEST(Vpi, WildcatterOtherQueries) {
  auto g = wildcatter();
  auto r = vpi(g, {"market-information", "test"});
  EXPECT_NEAR(r.vpi, oracle_vpi(g, {"market-information", "test"}), kValueTol);
  // The oracle cannot afford these policy spaces; check the scratch route
  // against the pointwise oracle on the last decision instead.
  for (VpiQuery q : {VpiQuery{"oil-underground", "oil-sale-policy"},
                     VpiQuery{"test-result", "oil-sale-policy"}}) {
    auto s = vpi(g, q);
    EXPECT_NEAR(s.modified_value, optimal_with_pointwise_last(build_full_modified(g, q)),
                kValueTol)
        << q.c << " @ " << q.d_s;
    EXPECT_GE(s.vpi, -kValueTol);
  }
  for (VpiQuery q : {VpiQuery{"oil-underground", "drill"}, VpiQuery{"seismic-structure", "drill"},
                     VpiQuery{"oil-underground", "test"}}) {
    EXPECT_GE(vpi(g, q).vpi, -kValueTol) << q.c << " @ " << q.d_s;
  }
}

TEST(Vpi, IncrementalMatchesScratchAndOracle) {
  std::size_t incremental = 0;
  GeneratorOptions o;
  o.max_frame = 2;
  o.max_random = 6;
  o.policy_cap = 256;
  o.joint_cap = 4000;
  for (std::size_t k = 2; k <= 4; ++k) {
    Rng rng(61 + k);
    o.min_decisions = o.max_decisions = k;
    for (int i = 0; i < 12; ++i) {
      auto g = random_sdid(rng, o);
      if (!g) continue;
      const double base = brute_force_optimal(*g).value;
      VpiEngine engine(*g);
      for (const auto& q : admissible_queries(*g)) {
        auto r = engine.run(q);
        EXPECT_GE(r.vpi, -kValueTol);
        if (r.route == VpiRoute::kShortcut) EXPECT_EQ(r.vpi, 0.0);
        if (r.route == VpiRoute::kIncremental) {
          ++incremental;
          EXPECT_LE(max_table_difference(*r.modified_condensation,
                                         condense(*r.modified_diagram)),
                    kTableTol);
        }
        auto full = build_full_modified(*g, q);
        if (policy_count(full) > 20000) continue;
        EXPECT_NEAR(r.vpi, brute_force_optimal(full).value - base, kValueTol)
            << q.c << " @ " << q.d_s << "\n" << serialize_diagram(*g);
      }
    }
  }
  EXPECT_GT(incremental, 20u);
}

TEST(Vpi, CacheGivesSameAnswers) {
  auto g = wildcatter();
  VpiEngine fresh(g);
  auto cached = parse_condensation(serialize_condensation(fresh.base_condensation()));
  for (const auto& q : admissible_queries(g)) {
    auto a = vpi(g, q);
    auto b = vpi(g, q, cached);
    EXPECT_EQ(a.vpi, b.vpi) << q.c << " @ " << q.d_s;
    EXPECT_EQ(tags(a), tags(b));
  }
}

TEST(Vpi, CacheFromOtherDiagramIsRejected) {
  auto other = condense(umbrella());
  EXPECT_EQ(code_of([&] { vpi(wildcatter(), {"market-information", "drill"}, other); }),
            ErrorCode::kProvenanceMismatch);
}

TEST(Vpi, EngineReusesItsCondensation) {
  VpiEngine engine(wildcatter());
  auto first = engine.run({"market-information", "drill"});
  auto second = engine.run({"market-information", "drill"});
  EXPECT_FALSE(first.cache_used);
  EXPECT_TRUE(second.cache_used);
  EXPECT_EQ(first.vpi, second.vpi);
}

TEST(Vpi, Errors) {
  auto g = wildcatter();
  EXPECT_EQ(code_of([&] { vpi(g, {"nothing", "drill"}); }), ErrorCode::kUnsupportedQuery);
  EXPECT_EQ(code_of([&] { vpi(g, {"test", "drill"}); }), ErrorCode::kNotRandom);
  EXPECT_EQ(code_of([&] { vpi(g, {"oil-underground", "test-result"}); }),
            ErrorCode::kUnsupportedQuery);
  EXPECT_EQ(code_of([&] { vpi(g, {"test-result", "drill"}); }), ErrorCode::kUnsupportedQuery);
  EXPECT_EQ(code_of([&] { vpi(g, {"oil-produced", "drill"}); }), ErrorCode::kCycleWouldForm);
  EXPECT_EQ(code_of([&] { vpi(umbrella(true), {"w", "d"}); }), ErrorCode::kUnsupportedQuery);
}

TEST(IncrementalCondense, RejectsForeignCondensation) {
  auto g = smooth(wildcatter());
  auto mi = g.index_of("market-information");
  EXPECT_EQ(code_of([&] { incremental_condense(condense(umbrella()), g, mi); }),
            ErrorCode::kProvenanceMismatch);
}

TEST(BuildModified, AddsArcsBeforeT) {
  auto g = smooth(wildcatter());
  auto m = build_modified(g, {"market-information", "drill"});
  EXPECT_TRUE(m.has_arc(g.index_of("market-information"), g.index_of("drill")));
  EXPECT_EQ(m.arcs().size(), g.arcs().size() + 1);
  auto full = build_full_modified(g, {"market-information", "test"});
  EXPECT_TRUE(full.has_arc(g.index_of("market-information"), g.index_of("test")));
  EXPECT_TRUE(full.has_arc(g.index_of("market-information"), g.index_of("drill")));
}

TEST(Reports, TsvAndJson) {
  auto reports = vpi_batch(umbrella(), {{"w", "d"}});
  EXPECT_EQ(reports_to_tsv(reports), "query\tvpi\treused_stages\trecomputed_stages\nw->d\t0.3\t1\t1\n");
  auto j = report_to_json(reports[0]);
  EXPECT_EQ(j["route"], "incremental");
  EXPECT_EQ(j["stages"].size(), 2u);
  auto qs = queries_from_json(parse_json_text(R"([{"c": "w", "d_s": "d"}])"));
  EXPECT_EQ(qs, (std::vector<VpiQuery>{{"w", "d"}}));
  EXPECT_THROW(queries_from_json(parse_json_text(R"([{"c": 3}])")), Error);
}

}  // namespace
}  // namespace sdid
