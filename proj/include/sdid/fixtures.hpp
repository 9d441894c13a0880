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

#pragma once

// Small diagrams used by the tests, the CLI and the data/ files.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sdid/diagram.hpp"

namespace sdid {

// Weather w (rain 0.3, sun 0.7), decision d (take, leave), payoff 1 when the
// umbrella choice suits the weather and 0 otherwise.
inline InfluenceDiagram umbrella(bool observe_weather = false) {
  InfluenceDiagram g;
  auto w = g.add_node("w", NodeKind::kRandom, {"rain", "sun"});
  auto d = g.add_node("d", NodeKind::kDecision, {"take", "leave"});
  auto v = g.add_node("v", NodeKind::kValue);
  g.add_arc(w, v);
  g.add_arc(d, v);
  if (observe_weather) g.add_arc(w, d);
  g.set_cpt(Cpt{w, {}, {0.3, 0.7}});
  g.set_value_table(ValueTable{v, {w, d}, {1.0, 0.0, 0.0, 1.0}});
  return g;
}

namespace fixture_detail {

// Strictly positive rows drawn from a fixed stream.
inline std::vector<double> random_rows(std::mt19937_64& rng, std::size_t rows,
                                       std::size_t width) {
  std::vector<double> out;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(width);
    double sum = 0.0;
    for (auto& x : row) {
      x = 0.05 + 0.95 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      sum += x;
    }
    for (auto& x : row) out.push_back(x / sum);
  }
  return out;
}

}  // namespace fixture_detail

inline constexpr std::uint64_t kWildcatSeed = 19930707;

// The oil wildcatter graph (Zhang, Qi and Poole, Fig. 1). The graph is exact;
// the probabilities come from a fixed random stream and the payoffs are
// round numbers, since the figure carries no numbers. The test result is
// "none" with certainty when no test is made.
inline InfluenceDiagram wildcatter(std::uint64_t seed = kWildcatSeed) {
  std::mt19937_64 rng(seed);
  InfluenceDiagram g;
  auto test = g.add_node("test", NodeKind::kDecision, {"no", "yes"});
  auto test_cost = g.add_node("test-cost", NodeKind::kValue);
  auto ou = g.add_node("oil-underground", NodeKind::kRandom, {"dry", "wet", "soaking"});
  auto ss = g.add_node("seismic-structure", NodeKind::kRandom, {"none", "open", "closed"});
  auto tr = g.add_node("test-result", NodeKind::kRandom, {"none", "closed", "open"});
  auto drill = g.add_node("drill", NodeKind::kDecision, {"no", "yes"});
  auto drill_cost = g.add_node("drill-cost", NodeKind::kValue);
  auto op = g.add_node("oil-produced", NodeKind::kRandom, {"none", "low", "high"});
  auto mi = g.add_node("market-information", NodeKind::kRandom, {"weak", "strong"});
  auto osp = g.add_node("oil-sale-policy", NodeKind::kDecision, {"store", "sell"});
  auto sale_cost = g.add_node("sale-cost", NodeKind::kValue);
  auto sales = g.add_node("oil-sales", NodeKind::kValue);

  g.add_arc(test, test_cost);
  g.add_arc(test, tr);
  g.add_arc(ou, ss);
  g.add_arc(ss, tr);
  g.add_arc(test, drill);
  g.add_arc(tr, drill);
  g.add_arc(drill, drill_cost);
  g.add_arc(drill, op);
  g.add_arc(ou, op);
  g.add_arc(op, osp);
  g.add_arc(mi, osp);
  g.add_arc(osp, sale_cost);
  g.add_arc(op, sales);
  g.add_arc(mi, sales);
  g.add_arc(osp, sales);
  g.set_decision_order({test, drill, osp});

  using fixture_detail::random_rows;
  g.set_cpt(Cpt{ou, {}, random_rows(rng, 1, 3)});
  g.set_cpt(Cpt{ss, {ou}, random_rows(rng, 3, 3)});
  // (seismic-structure, test) -> test-result
  std::vector<double> tr_rows;
  for (std::size_t s = 0; s < 3; ++s) {
    tr_rows.insert(tr_rows.end(), {1.0, 0.0, 0.0});
    auto seen = random_rows(rng, 1, 3);
    tr_rows.insert(tr_rows.end(), seen.begin(), seen.end());
  }
  g.set_cpt(Cpt{tr, {ss, test}, tr_rows});
  // (oil-underground, drill) -> oil-produced; nothing comes out without drilling.
  std::vector<double> op_rows;
  for (std::size_t u = 0; u < 3; ++u) {
    op_rows.insert(op_rows.end(), {1.0, 0.0, 0.0});
    auto yes = random_rows(rng, 1, 3);
    op_rows.insert(op_rows.end(), yes.begin(), yes.end());
  }
  g.set_cpt(Cpt{op, {ou, drill}, op_rows});
  g.set_cpt(Cpt{mi, {}, random_rows(rng, 1, 2)});

  g.set_value_table(ValueTable{test_cost, {test}, {0.0, -10.0}});
  g.set_value_table(ValueTable{drill_cost, {drill}, {0.0, -100.0}});
  g.set_value_table(ValueTable{sale_cost, {osp}, {-5.0, -20.0}});
  // (oil-produced, market-information, oil-sale-policy)
  g.set_value_table(ValueTable{sales,
                               {mi, op, osp},
                               {
                                   0.0, 0.0, 60.0, 50.0, 150.0, 120.0,    // weak
                                   0.0, 0.0, 60.0, 110.0, 150.0, 260.0,   // strong
                               }});
  return g;
}

}  // namespace sdid
