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

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sdid/diagram.hpp"

namespace sdid {

// Undirected graph on the diagram's nodes: an edge joins nodes that are
// adjacent in the directed graph or share a child.
struct MoralGraph {
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;  // (a, b), a < b, sorted
  std::vector<NodeSet> adjacency;

  bool adjacent(NodeIndex a, NodeIndex b) const {
    return std::binary_search(adjacency[a].begin(), adjacency[a].end(), b);
  }
};

inline MoralGraph moral_graph(const InfluenceDiagram& g) {
  MoralGraph m;
  m.adjacency.resize(g.size());
  auto link = [&](NodeIndex a, NodeIndex b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    m.edges.emplace_back(a, b);
  };
  for (auto [from, to] : g.arcs()) link(from, to);
  for (NodeIndex c = 0; c < g.size(); ++c) {
    const NodeSet& ps = g.parents(c);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
    }
  }
  std::sort(m.edges.begin(), m.edges.end());
  m.edges.erase(std::unique(m.edges.begin(), m.edges.end()), m.edges.end());
  for (auto [a, b] : m.edges) {
    m.adjacency[a].push_back(b);
    m.adjacency[b].push_back(a);
  }
  for (auto& adj : m.adjacency) std::sort(adj.begin(), adj.end());
  return m;
}

// Nodes reachable from `start` without entering `blocked`.
inline std::vector<bool> reachable_avoiding(const MoralGraph& m,
                                            NodeIndex start,
                                            const std::vector<bool>& blocked) {
  std::vector<bool> seen(m.adjacency.size(), false);
  if (blocked[start]) return seen;
  std::vector<NodeIndex> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    for (NodeIndex w : m.adjacency[u]) {
      if (!seen[w] && !blocked[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

inline std::vector<bool> membership(std::size_t n, const NodeSet& set) {
  std::vector<bool> out(n, false);
  for (auto v : set) out[v] = true;
  return out;
}

inline bool m_separated(const MoralGraph& m, NodeIndex x, NodeIndex y,
                        const NodeSet& separator) {
  auto blocked = membership(m.adjacency.size(), separator);
  if (blocked[x] || blocked[y]) return true;
  return !reachable_avoiding(m, x, blocked)[y];
}

inline bool m_separated(const InfluenceDiagram& g, NodeIndex x, NodeIndex y,
                        const NodeSet& separator) {
  return m_separated(moral_graph(g), x, y, separator);
}

// downstream(d): nodes not m-separated from d by its parents (contains d).
// upstream(d): nodes outside the parents that are m-separated from d.
struct Streams {
  std::vector<bool> downstream;
  std::vector<bool> upstream;
};

inline Streams streams(const InfluenceDiagram& g, const MoralGraph& m,
                       NodeIndex d) {
  auto frontier = membership(g.size(), g.parents(d));
  Streams s;
  s.downstream = reachable_avoiding(m, d, frontier);
  s.upstream.assign(g.size(), false);
  for (NodeIndex i = 0; i < g.size(); ++i) {
    s.upstream[i] = !frontier[i] && !s.downstream[i];
  }
  return s;
}

inline NodeSet to_set(const std::vector<bool>& mask) {
  NodeSet out;
  for (NodeIndex i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(i);
  }
  return out;
}

inline NodeSet downstream(const InfluenceDiagram& g, NodeIndex d) {
  return to_set(streams(g, moral_graph(g), d).downstream);
}

inline NodeSet upstream(const InfluenceDiagram& g, NodeIndex d) {
  return to_set(streams(g, moral_graph(g), d).upstream);
}

inline bool is_stepwise_decomposable(const InfluenceDiagram& g) {
  auto order = decision_ordering(g);
  MoralGraph m = moral_graph(g);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto down = streams(g, m, order[i]).downstream;
    for (std::size_t j = 0; j < i; ++j) {
      if (down[order[j]]) return false;
    }
  }
  return true;
}

// Arcs from the downstream of the decision's parents into those parents.
inline std::vector<Arc> offending_arcs(const InfluenceDiagram& g,
                                       const MoralGraph& m, NodeIndex d) {
  auto down = streams(g, m, d).downstream;
  std::vector<Arc> out;
  for (NodeIndex p : g.parents(d)) {
    for (NodeIndex q : g.parents(p)) {
      if (down[q]) out.emplace_back(q, p);
    }
  }
  return out;
}

inline bool is_smooth_at(const InfluenceDiagram& g, NodeIndex d) {
  return offending_arcs(g, moral_graph(g), d).empty();
}

// Decisions at which the diagram is not smooth, in regular order.
inline std::vector<NodeIndex> non_smooth_decisions(const InfluenceDiagram& g) {
  MoralGraph m = moral_graph(g);
  std::vector<NodeIndex> out;
  for (NodeIndex d : decision_ordering(g)) {
    if (!offending_arcs(g, m, d).empty()) out.push_back(d);
  }
  return out;
}

inline bool is_smooth(const InfluenceDiagram& g) {
  return non_smooth_decisions(g).empty();
}

// The sub-network between consecutive decision frontiers. Index 0 is the
// initial section, index k the terminal one.
struct Section {
  std::size_t index = 0;
  std::optional<NodeIndex> decision;  // d_i; absent for the initial section
  NodeSet entry;                      // parents of d_i, ascending
  std::optional<NodeSet> exit;        // parents of d_{i+1}; absent if terminal
  NodeSet nodes;                      // every member, ascending
  std::vector<Arc> arcs;              // induced arcs minus those inside entry+d_i
  std::vector<Cpt> cpts;              // random members outside entry+d_i
  std::vector<ValueTable> values;     // value members
  std::map<NodeIndex, std::size_t> cards;

  bool is_initial() const { return !decision.has_value(); }
  bool is_terminal() const { return !exit.has_value(); }

  // Conditioning coordinates: the entry frontier followed by the decision.
  NodeSet conditioners() const {
    NodeSet out = entry;
    if (decision) out.push_back(*decision);
    return out;
  }

  bool contains(NodeIndex v) const {
    return std::binary_search(nodes.begin(), nodes.end(), v);
  }

  bool is_conditioner(NodeIndex v) const {
    return (decision && *decision == v) ||
           std::binary_search(entry.begin(), entry.end(), v);
  }

  std::vector<std::size_t> cards_of(const NodeSet& vars) const {
    std::vector<std::size_t> out;
    for (auto v : vars) out.push_back(cards.at(v));
    return out;
  }

  friend bool operator==(const Section&, const Section&) = default;
};

namespace detail {

inline Section make_section(const InfluenceDiagram& g, std::size_t index,
                            std::optional<NodeIndex> decision, NodeSet entry,
                            std::optional<NodeSet> exit,
                            const std::vector<bool>& member) {
  Section s;
  s.index = index;
  s.decision = decision;
  s.entry = std::move(entry);
  s.exit = std::move(exit);
  s.nodes = to_set(member);

  auto conditioner = membership(g.size(), s.entry);
  if (decision) conditioner[*decision] = true;

  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedSections,
                "section " + std::to_string(index) + ": " + what);
  };

  if (decision && !member[*decision]) fail("decision is not a member");
  for (NodeIndex v : s.nodes) {
    s.cards[v] = g.card(v);
    if (conditioner[v]) continue;
    NodeKind kind = g.kind(v);
    if (kind == NodeKind::kDecision) {
      fail("decision '" + g.id(v) + "' lies outside the entry frontier");
    }
    for (NodeIndex p : g.parents(v)) {
      if (!member[p]) {
        fail("'" + g.id(v) + "' has parent '" + g.id(p) +
             "' outside the section");
      }
    }
    if (kind == NodeKind::kRandom) {
      s.cpts.push_back(g.cpt(v).value());
    } else {
      s.values.push_back(g.value_table(v).value());
    }
  }
  for (auto [from, to] : g.arcs()) {
    if (!member[from] || !member[to]) continue;
    if (conditioner[from] && conditioner[to]) continue;
    s.arcs.emplace_back(from, to);
  }
  std::sort(s.arcs.begin(), s.arcs.end());
  return s;
}

}  // namespace detail

// Splits a smooth regular SDID into its chain of sections.
inline std::vector<Section> extract_sections(const InfluenceDiagram& g) {
  auto order = decision_ordering(g);
  if (!is_stepwise_decomposable(g)) {
    throw Error(ErrorCode::kNotSdid, "diagram is not stepwise-decomposable");
  }
  auto rough = non_smooth_decisions(g);
  if (!rough.empty()) {
    throw Error(ErrorCode::kNotSmooth, "not smooth at '" + g.id(rough[0]) + "'");
  }

  const std::size_t n = g.size();
  const std::size_t k = order.size();
  std::vector<Section> out;
  if (k == 0) {
    out.push_back(detail::make_section(g, 0, std::nullopt, {}, std::nullopt,
                                       std::vector<bool>(n, true)));
    return out;
  }

  MoralGraph m = moral_graph(g);
  std::vector<Streams> st;
  std::vector<NodeSet> frontier;
  for (NodeIndex d : order) {
    st.push_back(streams(g, m, d));
    frontier.push_back(g.parents(d));
  }

  {
    std::vector<bool> member = st[0].upstream;
    for (auto v : frontier[0]) member[v] = true;
    out.push_back(detail::make_section(g, 0, std::nullopt, {}, frontier[0],
                                       member));
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    std::vector<bool> member(n, false);
    for (NodeIndex v = 0; v < n; ++v) {
      member[v] = st[i].downstream[v] && st[i + 1].upstream[v];
    }
    for (auto v : frontier[i]) member[v] = true;
    for (auto v : frontier[i + 1]) member[v] = true;
    out.push_back(detail::make_section(g, i + 1, order[i], frontier[i],
                                       frontier[i + 1], member));
  }
  {
    std::vector<bool> member = st[k - 1].downstream;
    for (auto v : frontier[k - 1]) member[v] = true;
    out.push_back(detail::make_section(g, k, order[k - 1], frontier[k - 1],
                                       std::nullopt, member));
  }
  return out;
}

}  // namespace sdid
