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

// Seeded random influence diagrams for property tests and the CLI --seed flag.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sdid/graph.hpp"
#include "sdid/oracle.hpp"
#include "sdid/transform.hpp"
#include "sdid/vpi.hpp"

namespace sdid {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return uniform() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 engine_;
};

enum class Smoothness { kAny, kSmooth, kNonSmooth };

struct GeneratorOptions {
  std::size_t min_decisions = 1;
  std::size_t max_decisions = 4;
  std::size_t max_random = 8;
  std::size_t max_frame = 3;
  std::size_t max_parents = 2;
  double policy_cap = 4096;       // keeps the oracle cheap
  std::size_t joint_cap = 20000;  // configurations over random and decision nodes
  Smoothness smoothness = Smoothness::kSmooth;
  std::size_t attempts = 10000;
};

namespace gen_detail {

inline std::vector<double> positive_rows(Rng& rng, std::size_t rows, std::size_t width) {
  std::vector<double> out;
  out.reserve(rows * width);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(width);
    double sum = 0.0;
    for (auto& x : row) {
      x = 0.05 + 0.95 * rng.uniform();
      sum += x;
    }
    for (auto x : row) out.push_back(x / sum);
  }
  return out;
}

inline std::vector<std::string> frame_of(std::size_t n) {
  std::vector<std::string> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back("v" + std::to_string(i));
  return f;
}

// Up to `count` distinct members of `pool`.
inline NodeSet sample(Rng& rng, NodeSet pool, std::size_t count) {
  NodeSet out;
  while (!pool.empty() && out.size() < count) {
    std::size_t i = rng.below(pool.size());
    out.push_back(pool[i]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// One layered candidate: random nodes are spread over the gaps between
// decisions and mostly draw parents from their own or the previous gap.
inline InfluenceDiagram candidate(Rng& rng, const GeneratorOptions& o) {
  InfluenceDiagram g;
  const std::size_t k = rng.between(o.min_decisions, o.max_decisions);
  const std::size_t n = rng.between(std::max<std::size_t>(k, 2), o.max_random);
  std::vector<std::size_t> layer_of(n);
  for (auto& l : layer_of) l = rng.below(k + 1);
  std::sort(layer_of.begin(), layer_of.end());

  std::vector<NodeSet> layer(k + 1);   // random nodes per gap
  std::vector<NodeIndex> decisions;
  std::size_t next_random = 0;
  for (std::size_t gap = 0; gap <= k; ++gap) {
    while (next_random < n && layer_of[next_random] == gap) {
      auto v = g.add_node("x" + std::to_string(next_random), NodeKind::kRandom,
                          frame_of(rng.between(2, o.max_frame)));
      ++next_random;
      NodeSet pool = layer[gap];
      if (gap > 0) {
        pool.push_back(decisions[gap - 1]);
        pool.insert(pool.end(), layer[gap - 1].begin(), layer[gap - 1].end());
      }
      std::sort(pool.begin(), pool.end());
      for (auto p : sample(rng, pool, rng.below(o.max_parents + 1))) g.add_arc(p, v);
      layer[gap].push_back(v);
    }
    if (gap == k) break;
    auto d = g.add_node("d" + std::to_string(gap + 1), NodeKind::kDecision,
                        frame_of(rng.between(2, o.max_frame)));
    NodeSet pool = layer[gap];
    if (gap > 0) pool.push_back(decisions[gap - 1]);
    std::sort(pool.begin(), pool.end());
    for (auto p : sample(rng, pool, rng.below(o.max_parents + 1))) g.add_arc(p, d);
    decisions.push_back(d);
  }

  // Each decision must reach the next one.
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (descendants(g, decisions[i])[decisions[i + 1]]) continue;
    NodeSet via;
    for (auto p : g.parents(decisions[i + 1])) {
      if (g.kind(p) == NodeKind::kRandom && !g.has_arc(decisions[i], p) &&
          !descendants(g, p)[decisions[i]]) {
        via.push_back(p);
      }
    }
    if (!via.empty() && rng.chance(0.7)) {
      g.add_arc(decisions[i], rng.pick(via));
    } else {
      g.add_arc(decisions[i], decisions[i + 1]);
    }
  }

  // Value nodes: one per gap, parents from that gap and its decision.
  for (std::size_t gap = 0; gap <= k; ++gap) {
    NodeSet pool = layer[gap];
    if (gap > 0) pool.push_back(decisions[gap - 1]);
    if (pool.empty() || (gap == 0 && rng.chance(0.5))) continue;
    std::sort(pool.begin(), pool.end());
    auto v = g.add_node("u" + std::to_string(gap), NodeKind::kValue);
    NodeSet ps = sample(rng, pool, rng.between(1, std::min<std::size_t>(3, pool.size())));
    if (gap > 0 && rng.chance(0.6) &&
        std::find(ps.begin(), ps.end(), decisions[gap - 1]) == ps.end()) {
      ps.push_back(decisions[gap - 1]);
      std::sort(ps.begin(), ps.end());
    }
    for (auto p : ps) g.add_arc(p, v);
  }

  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (g.kind(v) == NodeKind::kRandom) {
      NodeSet ps = g.parents(v);
      g.set_cpt(Cpt{v, ps, positive_rows(rng, product_of(g.cards(ps)), g.card(v))});
    } else if (g.kind(v) == NodeKind::kValue) {
      NodeSet ps = g.parents(v);
      std::vector<double> rows(product_of(g.cards(ps)));
      for (auto& x : rows) x = std::round(rng.uniform() * 2000.0) / 100.0 - 5.0;
      g.set_value_table(ValueTable{v, ps, rows});
    }
  }
  return g;
}

inline bool small_enough(const InfluenceDiagram& g, const GeneratorOptions& o) {
  std::size_t joint = 1;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (g.kind(v) != NodeKind::kValue) joint *= g.card(v);
  }
  return joint <= o.joint_cap && policy_count(g) <= o.policy_cap;
}

inline bool sections_ok(const InfluenceDiagram& g) {
  try {
    extract_sections(g);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace gen_detail

// A regular SDID drawn from `rng`; nullopt if no candidate passes within the
// attempt budget.
inline std::optional<InfluenceDiagram> random_sdid(Rng& rng, const GeneratorOptions& o = {}) {
  for (std::size_t attempt = 0; attempt < o.attempts; ++attempt) {
    InfluenceDiagram g = gen_detail::candidate(rng, o);
    if (!validate(g).ok()) continue;
    try {
      if (!is_stepwise_decomposable(g)) continue;
      bool smooth_now = is_smooth(g);
      if (o.smoothness == Smoothness::kSmooth && !smooth_now) continue;
      if (o.smoothness == Smoothness::kNonSmooth) {
        if (smooth_now) continue;
        InfluenceDiagram s = smooth(g);
        if (!gen_detail::sections_ok(s) || !gen_detail::small_enough(s, o)) continue;
      } else if (!gen_detail::sections_ok(g)) {
        continue;
      }
    } catch (const Error&) {
      continue;
    }
    if (!gen_detail::small_enough(g, o)) continue;
    return g;
  }
  return std::nullopt;
}

inline std::optional<InfluenceDiagram> random_sdid(std::uint64_t seed,
                                                   const GeneratorOptions& o = {}) {
  Rng rng(seed);
  return random_sdid(rng, o);
}

// Every admissible (c, d_s) pair of the diagram, in index order.
inline std::vector<VpiQuery> admissible_queries(const InfluenceDiagram& g) {
  std::vector<VpiQuery> out;
  for (NodeIndex d : g.nodes_of_kind(NodeKind::kDecision)) {
    auto below = descendants(g, d);
    for (NodeIndex c : g.nodes_of_kind(NodeKind::kRandom)) {
      if (g.has_arc(c, d) || below[c]) continue;
      out.push_back(VpiQuery{g.id(c), g.id(d)});
    }
  }
  return out;
}

// A plain random DAG (random nodes only) for graph-level property tests.
inline InfluenceDiagram random_dag(Rng& rng, std::size_t n, double density) {
  InfluenceDiagram g;
  for (std::size_t i = 0; i < n; ++i) {
    g.add_node("n" + std::to_string(i), NodeKind::kRandom, {"a", "b"});
  }
  for (NodeIndex b = 0; b < n; ++b) {
    for (NodeIndex a = 0; a < b; ++a) {
      if (rng.chance(density)) g.add_arc(a, b);
    }
  }
  return g;
}

}  // namespace sdid
