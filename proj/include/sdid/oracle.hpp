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

// Brute-force ground truth. Everything here works on the full joint table over
// the random and decision nodes and depends on nothing but diagram.hpp, so it
// cannot share a bug with the elimination code.

#include <cmath>
#include <limits>
#include <vector>

#include "sdid/diagram.hpp"

namespace sdid {

// Dense table over `vars` (ascending), last variable innermost.
struct JointTable {
  std::vector<NodeIndex> vars;
  std::vector<std::size_t> cards;
  std::vector<double> table;

  double sum() const {
    double s = 0.0;
    for (double x : table) s += x;
    return s;
  }
};

namespace oracle_detail {

struct Space {
  std::vector<NodeIndex> vars;         // random and decision nodes, ascending
  std::vector<std::size_t> cards;
  std::vector<std::size_t> stride;     // indexed by NodeIndex (0 for value nodes)
  std::size_t size = 1;
};

inline Space space_of(const InfluenceDiagram& g) {
  Space s;
  s.stride.assign(g.size(), 0);
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (g.kind(v) == NodeKind::kValue) continue;
    s.vars.push_back(v);
    s.cards.push_back(g.card(v));
  }
  for (std::size_t i = s.vars.size(); i-- > 0;) {
    s.stride[s.vars[i]] = s.size;
    s.size *= s.cards[i];
  }
  return s;
}

inline std::size_t row_of(const InfluenceDiagram& g, const std::vector<NodeIndex>& parents,
                          const std::vector<std::size_t>& value) {
  std::size_t r = 0;
  for (auto p : parents) r = r * g.card(p) + value[p];
  return r;
}

// Calls visit(flat index, assignment by NodeIndex) for every configuration.
template <typename Visit>
void for_each_config(const InfluenceDiagram& g, const Space& s, Visit&& visit) {
  std::vector<std::size_t> value(g.size(), 0);
  std::size_t flat = 0;
  for (Odometer o(s.cards); !o.done(); o.next(), ++flat) {
    for (std::size_t i = 0; i < s.vars.size(); ++i) value[s.vars[i]] = o[i];
    visit(flat, value);
  }
}

inline double chance_mass(const InfluenceDiagram& g, const std::vector<std::size_t>& value) {
  double p = 1.0;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (g.kind(v) != NodeKind::kRandom) continue;
    const Cpt& c = g.cpt(v).value();
    p *= c.rows[row_of(g, c.parents, value) * g.card(v) + value[v]];
  }
  return p;
}

inline double utility(const InfluenceDiagram& g, const std::vector<std::size_t>& value) {
  double u = 0.0;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (g.kind(v) != NodeKind::kValue) continue;
    const ValueTable& t = g.value_table(v).value();
    u += t.rows[row_of(g, t.parents, value)];
  }
  return u;
}

inline const DecisionFunction& function_for(const InfluenceDiagram& g, const Policy& p,
                                            NodeIndex d) {
  const DecisionFunction* found = nullptr;
  for (const auto& f : p.functions) {
    if (f.decision != d) continue;
    if (found) {
      throw Error(ErrorCode::kPolicyArityMismatch, "two decision functions for '" + g.id(d) + "'");
    }
    found = &f;
  }
  if (!found) {
    throw Error(ErrorCode::kPolicyArityMismatch, "no decision function for '" + g.id(d) + "'");
  }
  if (found->parents != g.parents(d)) {
    throw Error(ErrorCode::kPolicyArityMismatch,
                "decision function for '" + g.id(d) + "' has the wrong parents");
  }
  std::size_t rows = 1;
  for (auto q : found->parents) rows *= g.card(q);
  if (found->table.size() != rows) {
    throw Error(ErrorCode::kPolicyArityMismatch,
                "decision function for '" + g.id(d) + "' has " +
                    std::to_string(found->table.size()) + " rows, expected " +
                    std::to_string(rows));
  }
  for (auto x : found->table) {
    if (x >= g.card(d)) {
      throw Error(ErrorCode::kPolicyArityMismatch,
                  "decision function for '" + g.id(d) + "' picks a value outside the frame");
    }
  }
  return *found;
}

}  // namespace oracle_detail

// P_delta over the random and decision nodes.
inline JointTable joint_distribution(const InfluenceDiagram& g, const Policy& policy) {
  auto s = oracle_detail::space_of(g);
  std::vector<const DecisionFunction*> fn(g.size(), nullptr);
  for (NodeIndex d : g.nodes_of_kind(NodeKind::kDecision)) {
    fn[d] = &oracle_detail::function_for(g, policy, d);
  }
  JointTable out{s.vars, s.cards, std::vector<double>(s.size, 0.0)};
  oracle_detail::for_each_config(g, s, [&](std::size_t flat, const std::vector<std::size_t>& value) {
    double p = oracle_detail::chance_mass(g, value);
    for (NodeIndex d : g.nodes_of_kind(NodeKind::kDecision)) {
      const auto& f = *fn[d];
      const Cpt k = policy_to_kernel(g, f);
      p *= k.rows[oracle_detail::row_of(g, f.parents, value) * g.card(d) + value[d]];
    }
    out.table[flat] = p;
  });
  return out;
}

// Sum over value nodes of E_delta[f_v].
inline double expected_value(const InfluenceDiagram& g, const Policy& policy) {
  auto joint = joint_distribution(g, policy);
  auto s = oracle_detail::space_of(g);
  double total = 0.0;
  oracle_detail::for_each_config(g, s, [&](std::size_t flat, const std::vector<std::size_t>& value) {
    if (joint.table[flat] != 0.0) total += joint.table[flat] * oracle_detail::utility(g, value);
  });
  return total;
}

struct OracleResult {
  double value = 0.0;
  Policy policy;
  std::size_t policies_examined = 0;
};

inline constexpr double kDefaultPolicyCap = 1e7;

// Number of distinct policies, as a real so that huge counts do not wrap.
inline double policy_count(const InfluenceDiagram& g) {
  double count = 1.0;
  for (NodeIndex d : g.nodes_of_kind(NodeKind::kDecision)) {
    double rows = 1.0;
    for (auto p : g.parents(d)) rows *= static_cast<double>(g.card(p));
    count *= std::pow(static_cast<double>(g.card(d)), rows);
  }
  return count;
}

// Exhaustive maximization of expected_value. Policies are visited in
// lexicographic order of their concatenated tables (decisions in regular
// order), and only a strictly better value replaces the incumbent.
inline OracleResult brute_force_optimal(const InfluenceDiagram& g,
                                        double cap = kDefaultPolicyCap) {
  const auto order = decision_ordering(g);
  const double count = policy_count(g);
  if (count > cap) {
    throw Error(ErrorCode::kTooLarge, "policy space has " + std::to_string(count) +
                                          " members, cap is " + std::to_string(cap));
  }

  // Weight p(C | D) * U(C, D) per full configuration.
  auto s = oracle_detail::space_of(g);
  std::vector<double> weight(s.size, 0.0);
  oracle_detail::for_each_config(g, s, [&](std::size_t flat, const std::vector<std::size_t>& value) {
    double p = oracle_detail::chance_mass(g, value);
    if (p != 0.0) weight[flat] = p * oracle_detail::utility(g, value);
  });

  NodeSet chance = g.nodes_of_kind(NodeKind::kRandom);
  std::vector<std::size_t> chance_cards = g.cards(chance);

  std::vector<std::size_t> rows_of(order.size());
  std::vector<std::size_t> first_digit(order.size());
  std::vector<std::size_t> radices;
  for (std::size_t i = 0; i < order.size(); ++i) {
    rows_of[i] = product_of(g.cards(g.parents(order[i])));
    first_digit[i] = radices.size();
    radices.insert(radices.end(), rows_of[i], g.card(order[i]));
  }

  OracleResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> value(g.size(), 0);
  for (Odometer pol(radices); !pol.done(); pol.next()) {
    double ev = 0.0;
    for (Odometer c(chance_cards); !c.done(); c.next()) {
      std::size_t flat = 0;
      for (std::size_t j = 0; j < chance.size(); ++j) {
        value[chance[j]] = c[j];
        flat += s.stride[chance[j]] * c[j];
      }
      for (std::size_t i = 0; i < order.size(); ++i) {
        NodeIndex d = order[i];
        std::size_t r = oracle_detail::row_of(g, g.parents(d), value);
        value[d] = pol[first_digit[i] + r];
        flat += s.stride[d] * value[d];
      }
      ev += weight[flat];
    }
    ++best.policies_examined;
    if (ev > best.value) {
      best.value = ev;
      best.policy.functions.clear();
      for (std::size_t i = 0; i < order.size(); ++i) {
        DecisionFunction f{order[i], g.parents(order[i]), {}};
        for (std::size_t r = 0; r < rows_of[i]; ++r) f.table.push_back(pol[first_digit[i] + r]);
        best.policy.functions.push_back(std::move(f));
      }
    }
  }
  return best;
}

}  // namespace sdid
