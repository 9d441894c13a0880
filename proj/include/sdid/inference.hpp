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

// P(targets | conditioners). Row r is a conditioner configuration, column c a
// target configuration, both in canonical layout.
struct ConditionalTable {
  NodeSet conditioners;
  std::vector<std::size_t> conditioner_cards;
  NodeSet targets;
  std::vector<std::size_t> target_cards;
  std::vector<double> table;
  // Rows whose conditional was undefined and were filled uniformly.
  std::vector<std::size_t> uniform_rows;

  std::size_t rows() const { return product_of(conditioner_cards); }
  std::size_t cols() const { return product_of(target_cards); }
  double at(std::size_t r, std::size_t c) const { return table[r * cols() + c]; }

  friend bool operator==(const ConditionalTable&, const ConditionalTable&) = default;
};

// Per-call accounting so callers can tell reuse from recomputation.
struct InferenceStats {
  std::size_t eliminations = 0;
  std::size_t entries_computed = 0;
};

enum class EliminationHeuristic { kMinFill, kReverseMinFill };

namespace detail {

// Random members reachable backwards from `seeds` without crossing a
// conditioning coordinate: the only CPTs that matter for those seeds.
inline std::vector<Factor> relevant_factors(const Section& s, NodeSet seeds) {
  std::vector<bool> wanted;
  NodeIndex max_index = s.nodes.empty() ? 0 : s.nodes.back();
  wanted.assign(max_index + 1, false);
  while (!seeds.empty()) {
    NodeIndex v = seeds.back();
    seeds.pop_back();
    if (wanted[v] || s.is_conditioner(v)) continue;
    wanted[v] = true;
    for (const Cpt& c : s.cpts) {
      if (c.child == v) {
        for (auto p : c.parents) seeds.push_back(p);
      }
    }
  }
  std::vector<Factor> out;
  for (const Cpt& c : s.cpts) {
    if (!wanted[c.child]) continue;
    std::vector<std::size_t> cards;
    for (auto p : c.parents) cards.push_back(s.cards.at(p));
    cards.push_back(s.cards.at(c.child));
    out.push_back(Factor::from_cpt(c, cards));
  }
  return out;
}

// Joint of `unknown` given the conditioners, laid out over
// (conditioners present in the factors, unknown).
inline Factor conditional_joint(const Section& s, const NodeSet& unknown,
                                EliminationHeuristic heuristic,
                                InferenceStats* stats) {
  auto factors = relevant_factors(s, unknown);
  NodeSet keep = s.conditioners();
  keep.insert(keep.end(), unknown.begin(), unknown.end());
  std::set<NodeIndex> vars;
  for (const auto& f : factors) vars.insert(f.vars.begin(), f.vars.end());
  NodeSet drop;
  for (auto v : vars) {
    if (std::find(keep.begin(), keep.end(), v) == keep.end()) drop.push_back(v);
  }
  auto order = min_fill_order(factors, drop);
  if (heuristic == EliminationHeuristic::kReverseMinFill) {
    std::reverse(order.begin(), order.end());
  }
  if (stats) ++stats->eliminations;
  return eliminate(std::move(factors), order, keep);
}

inline std::vector<std::size_t> assignment_buffer(const Section& s) {
  return std::vector<std::size_t>(s.nodes.empty() ? 1 : s.nodes.back() + 1, 0);
}

}  // namespace detail

// P(exit frontier | entry frontier, decision) inside a section. For the
// initial section the conditioners are empty and the single row is the prior.
inline ConditionalTable section_conditional(
    const Section& s, InferenceStats* stats = nullptr,
    EliminationHeuristic heuristic = EliminationHeuristic::kMinFill) {
  ConditionalTable out;
  out.conditioners = s.conditioners();
  out.conditioner_cards = s.cards_of(out.conditioners);
  out.targets = s.exit.value_or(NodeSet{});
  out.target_cards = s.cards_of(out.targets);

  NodeSet unknown;
  for (auto v : out.targets) {
    if (!s.is_conditioner(v)) unknown.push_back(v);
  }
  Factor joint = unknown.empty()
                     ? Factor::unit()
                     : detail::conditional_joint(s, unknown, heuristic, stats);

  const std::size_t rows = out.rows();
  const std::size_t cols = out.cols();
  out.table.assign(rows * cols, 0.0);
  auto assign = detail::assignment_buffer(s);
  Odometer row(out.conditioner_cards);
  for (std::size_t r = 0; r < rows; ++r, row.next()) {
    for (std::size_t i = 0; i < out.conditioners.size(); ++i) {
      assign[out.conditioners[i]] = row[i];
    }
    Odometer col(out.target_cards);
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c, col.next()) {
      bool consistent = true;
      for (std::size_t j = 0; j < out.targets.size(); ++j) {
        NodeIndex v = out.targets[j];
        if (s.is_conditioner(v)) {
          if (assign[v] != col[j]) consistent = false;
        } else {
          assign[v] = col[j];
        }
      }
      if (!consistent) continue;
      double p = joint.table[joint.offset(assign)];
      out.table[r * cols + c] = p;
      sum += p;
    }
    if (sum <= 0.0) {
      for (std::size_t c = 0; c < cols; ++c) out.table[r * cols + c] = 1.0 / cols;
      out.uniform_rows.push_back(r);
    }
  }
  if (stats && !unknown.empty()) stats->entries_computed += out.table.size();
  return out;
}

// P(parents of d_1) from the initial section; the unit factor when d_1 has
// no parents.
inline Factor section_prior(const Section& initial, InferenceStats* stats = nullptr) {
  ConditionalTable t = section_conditional(initial, stats);
  Factor f;
  f.vars = t.targets;
  f.cards = t.target_cards;
  f.table = t.table;
  return f;
}

// Expected value of one value node given the section's conditioners, as a
// table over (entry frontier, decision).
inline std::vector<double> value_projection(
    const Section& s, const ValueTable& v, InferenceStats* stats = nullptr,
    EliminationHeuristic heuristic = EliminationHeuristic::kMinFill) {
  NodeSet cond = s.conditioners();
  auto cond_cards = s.cards_of(cond);
  NodeSet unknown;
  for (auto p : v.parents) {
    if (!s.is_conditioner(p)) unknown.push_back(p);
  }
  std::sort(unknown.begin(), unknown.end());
  auto unknown_cards = s.cards_of(unknown);

  Factor joint = unknown.empty()
                     ? Factor::unit()
                     : detail::conditional_joint(s, unknown, heuristic, stats);

  std::vector<std::size_t> value_cards;
  for (auto p : v.parents) value_cards.push_back(s.cards.at(p));
  auto value_offset = [&](const std::vector<std::size_t>& assign) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < v.parents.size(); ++i) {
      idx = idx * value_cards[i] + assign[v.parents[i]];
    }
    return idx;
  };

  std::vector<double> out(product_of(cond_cards), 0.0);
  auto assign = detail::assignment_buffer(s);
  Odometer row(cond_cards);
  for (std::size_t r = 0; r < out.size(); ++r, row.next()) {
    for (std::size_t i = 0; i < cond.size(); ++i) assign[cond[i]] = row[i];
    double acc = 0.0;
    for (Odometer u(unknown_cards); !u.done(); u.next()) {
      for (std::size_t j = 0; j < unknown.size(); ++j) assign[unknown[j]] = u[j];
      acc += joint.table[joint.offset(assign)] * v.rows[value_offset(assign)];
    }
    out[r] = acc;
  }
  if (stats && !unknown.empty()) stats->entries_computed += out.size();
  return out;
}

}  // namespace sdid
