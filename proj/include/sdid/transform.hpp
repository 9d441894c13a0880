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
#include <vector>

#include "sdid/factor.hpp"
#include "sdid/graph.hpp"

namespace sdid {

namespace detail {

inline NodeSet set_union(NodeSet a, const NodeSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

inline NodeSet without(NodeSet a, NodeIndex v) {
  a.erase(std::remove(a.begin(), a.end(), v), a.end());
  return a;
}

inline Factor cpt_factor(const InfluenceDiagram& g, const Cpt& c) {
  auto cards = g.cards(c.parents);
  cards.push_back(g.card(c.child));
  return Factor::from_cpt(c, cards);
}

inline std::vector<std::size_t> topo_position(const InfluenceDiagram& g) {
  auto order = topological_order(g).value();
  std::vector<std::size_t> pos(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  return pos;
}

}  // namespace detail

// Reverses a -> b between two random nodes (Bayes rule on their CPTs). The
// joint over the random nodes given the decisions is unchanged; conditioning
// configurations of probability zero get a uniform row for a.
inline InfluenceDiagram reverse_arc(const InfluenceDiagram& g, NodeIndex a,
                                    NodeIndex b) {
  if (!g.has_arc(a, b)) {
    throw Error(ErrorCode::kSchema,
                "no arc '" + g.id(a) + "' -> '" + g.id(b) + "' to reverse");
  }
  if (g.kind(a) != NodeKind::kRandom || g.kind(b) != NodeKind::kRandom) {
    throw Error(ErrorCode::kNotRandom,
                "arc '" + g.id(a) + "' -> '" + g.id(b) +
                    "' does not join two random nodes");
  }
  if (has_indirect_path(g, a, b)) {
    throw Error(ErrorCode::kCycleWouldForm,
                "another directed path leads from '" + g.id(a) + "' to '" +
                    g.id(b) + "'");
  }

  const NodeSet pa = g.parents(a);
  const NodeSet pb = detail::without(g.parents(b), a);
  const NodeSet new_pb = detail::set_union(pa, pb);
  const NodeSet new_pa = detail::set_union(new_pb, {b});

  Factor joint = multiply(detail::cpt_factor(g, g.cpt(a).value()),
                          detail::cpt_factor(g, g.cpt(b).value()));
  std::vector<NodeIndex> b_layout = new_pb;
  b_layout.push_back(b);
  Factor b_given = reorder(marginalize(joint, {a}), b_layout);
  std::vector<NodeIndex> a_layout = new_pa;
  a_layout.push_back(a);
  Factor a_joint = reorder(joint, a_layout);

  const std::size_t card_a = g.card(a);
  std::vector<double> a_rows(a_joint.size(), 0.0);
  std::vector<std::size_t> assign(g.size(), 0);
  Odometer row(g.cards(new_pa));
  for (std::size_t r = 0; !row.done(); ++r, row.next()) {
    for (std::size_t i = 0; i < new_pa.size(); ++i) assign[new_pa[i]] = row[i];
    double denom = b_given.table[b_given.offset(assign)];
    for (std::size_t x = 0; x < card_a; ++x) {
      a_rows[r * card_a + x] =
          denom > 0.0 ? a_joint.table[r * card_a + x] / denom
                      : 1.0 / static_cast<double>(card_a);
    }
  }

  InfluenceDiagram out = g;
  out.remove_arc(a, b);
  out.add_arc(b, a);
  for (NodeIndex x : new_pa) {
    if (x != b && !out.has_arc(x, a)) out.add_arc(x, a);
  }
  for (NodeIndex x : new_pb) {
    if (!out.has_arc(x, b)) out.add_arc(x, b);
  }
  out.set_cpt(Cpt{a, new_pa, std::move(a_rows)});
  out.set_cpt(Cpt{b, new_pb, std::move(b_given.table)});
  return out;
}

// Reverses arcs from the downstream of each decision's frontier into the
// frontier until the diagram is smooth. Decisions are handled in reverse
// regular order; at each step the offending arc with the topologically latest
// tail (then earliest head) is reversed.
inline InfluenceDiagram smooth(const InfluenceDiagram& g) {
  if (!is_stepwise_decomposable(g)) {
    throw Error(ErrorCode::kNotSdid, "smoothing requires an SDID");
  }
  InfluenceDiagram cur = g;
  constexpr std::size_t kMaxReversals = 10000;
  std::size_t reversals = 0;
  while (!is_smooth(cur)) {
    auto order = decision_ordering(cur);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      for (;;) {
        auto bad = offending_arcs(cur, moral_graph(cur), *it);
        if (bad.empty()) break;
        auto pos = detail::topo_position(cur);
        auto pick = *std::min_element(bad.begin(), bad.end(),
                                      [&](const Arc& x, const Arc& y) {
                                        if (pos[x.first] != pos[y.first]) {
                                          return pos[x.first] > pos[y.first];
                                        }
                                        return pos[x.second] < pos[y.second];
                                      });
        if (cur.kind(pick.first) != NodeKind::kRandom ||
            cur.kind(pick.second) != NodeKind::kRandom) {
          throw Error(ErrorCode::kNotSmoothable,
                      "arc '" + cur.id(pick.first) + "' -> '" +
                          cur.id(pick.second) +
                          "' breaks smoothness and cannot be reversed");
        }
        cur = reverse_arc(cur, pick.first, pick.second);
        if (++reversals > kMaxReversals) {
          throw Error(ErrorCode::kNotSmoothable, "reversal budget exhausted");
        }
      }
    }
  }
  if (!is_stepwise_decomposable(cur)) {
    throw Error(ErrorCode::kNotSmoothable,
                "smoothing produced a diagram that is not an SDID");
  }
  return cur;
}

// Reverses arcs into c, latest parent first, until c has no parents.
inline InfluenceDiagram make_root(const InfluenceDiagram& g, NodeIndex c) {
  if (g.kind(c) != NodeKind::kRandom) {
    throw Error(ErrorCode::kNotRandom, "'" + g.id(c) + "' is not a random node");
  }
  InfluenceDiagram cur = g;
  while (!cur.parents(c).empty()) {
    auto pos = detail::topo_position(cur);
    const NodeSet& ps = cur.parents(c);
    NodeIndex a = *std::max_element(ps.begin(), ps.end(), [&](NodeIndex x, NodeIndex y) {
      return pos[x] < pos[y];
    });
    if (cur.kind(a) != NodeKind::kRandom) {
      throw Error(ErrorCode::kNotRandom,
                  "'" + cur.id(c) + "' has decision parent '" + cur.id(a) + "'");
    }
    cur = reverse_arc(cur, a, c);
  }
  return cur;
}

// Adds d as a vacuous parent of every value node in the section.
inline InfluenceDiagram pad_value_parents(const InfluenceDiagram& g, NodeIndex d,
                                          const Section& section) {
  InfluenceDiagram out = g;
  const std::size_t options = g.card(d);
  for (NodeIndex v : section.nodes) {
    if (g.kind(v) != NodeKind::kValue || g.has_arc(d, v)) continue;
    ValueTable t = g.value_table(v).value();
    std::vector<double> rows;
    rows.reserve(t.rows.size() * options);
    for (double x : t.rows) rows.insert(rows.end(), options, x);
    t.parents.push_back(d);
    t.rows = std::move(rows);
    out.add_arc(d, v);
    out.set_value_table(std::move(t));
  }
  return out;
}

}  // namespace sdid
