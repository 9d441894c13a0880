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

// Shared helpers for the test binaries: diagram builders, corpora and
// brute-force references that do not go through the library's algorithms.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdid/fixtures.hpp"
#include "sdid/generator.hpp"
#include "sdid/sdid.hpp"

namespace sdid::testing {

inline constexpr double kValueTol = 1e-9;
inline constexpr double kTableTol = 1e-12;

// Random regular SDIDs, an equal share for each decision count 1..4.
inline std::vector<InfluenceDiagram> corpus(Smoothness mode, std::size_t per_k,
                                            std::uint64_t seed) {
  std::vector<InfluenceDiagram> out;
  for (std::size_t k = 1; k <= 4; ++k) {
    Rng rng(seed * 1000 + k);
    GeneratorOptions o;
    o.smoothness = mode;
    o.min_decisions = o.max_decisions = k;
    for (std::size_t i = 0; i < per_k; ++i) {
      auto g = random_sdid(rng, o);
      if (g) out.push_back(std::move(*g));
    }
  }
  return out;
}

// Every policy of g in lexicographic order.
inline void for_each_policy(const InfluenceDiagram& g,
                            const std::function<void(const Policy&)>& visit) {
  auto order = decision_ordering(g);
  std::vector<std::size_t> radices;
  std::vector<std::size_t> rows;
  for (auto d : order) {
    rows.push_back(product_of(g.cards(g.parents(d))));
    radices.insert(radices.end(), rows.back(), g.card(d));
  }
  for (Odometer o(radices); !o.done(); o.next()) {
    Policy p;
    std::size_t at = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      DecisionFunction f{order[i], g.parents(order[i]), {}};
      for (std::size_t r = 0; r < rows[i]; ++r) f.table.push_back(o[at++]);
      p.functions.push_back(std::move(f));
    }
    visit(p);
  }
}

// Path search on the moral graph by explicit enumeration of simple paths.
inline bool connected_avoiding(const MoralGraph& m, NodeIndex x, NodeIndex y,
                               const std::vector<bool>& blocked) {
  std::vector<bool> on_path(m.adjacency.size(), false);
  std::function<bool(NodeIndex)> walk = [&](NodeIndex u) {
    if (u == y) return true;
    on_path[u] = true;
    for (std::size_t w = 0; w < m.adjacency.size(); ++w) {
      bool edge = false;
      for (auto [a, b] : m.edges) {
        if ((a == u && b == w) || (a == w && b == u)) edge = true;
      }
      if (edge && !on_path[w] && !blocked[w] && walk(w)) return true;
    }
    on_path[u] = false;
    return false;
  };
  return walk(x);
}

inline std::string data_path(const std::string& name) {
  return std::string(SDID_DATA_DIR) + "/" + name;
}

}  // namespace sdid::testing
