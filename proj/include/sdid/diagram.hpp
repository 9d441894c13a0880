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
#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sdid/errors.hpp"

namespace sdid {

enum class NodeKind { kRandom, kDecision, kValue };

inline const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kRandom: return "random";
    case NodeKind::kDecision: return "decision";
    case NodeKind::kValue: return "value";
  }
  return "?";
}

using NodeIndex = std::size_t;
using NodeSet = std::vector<NodeIndex>;  // kept sorted ascending
using Arc = std::pair<NodeIndex, NodeIndex>;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kRandom;
  // Ordered categorical values; empty for value nodes.
  std::vector<std::string> frame;

  friend bool operator==(const Node&, const Node&) = default;
};

// P(child | parents). Rows are laid out lexicographically over the parent
// configuration in the listed parent order, with the child value innermost.
struct Cpt {
  NodeIndex child = 0;
  std::vector<NodeIndex> parents;
  std::vector<double> rows;

  friend bool operator==(const Cpt&, const Cpt&) = default;
};

// f_v(parents), one entry per parent configuration in the same layout.
struct ValueTable {
  NodeIndex node = 0;
  std::vector<NodeIndex> parents;
  std::vector<double> rows;

  friend bool operator==(const ValueTable&, const ValueTable&) = default;
};

// Maps each parent configuration of a decision to the index of the chosen
// value in the decision's frame.
struct DecisionFunction {
  NodeIndex decision = 0;
  std::vector<NodeIndex> parents;
  std::vector<std::size_t> table;

  friend bool operator==(const DecisionFunction&, const DecisionFunction&) =
      default;
};

// One decision function per decision node, in regular decision order.
struct Policy {
  std::vector<DecisionFunction> functions;

  friend bool operator==(const Policy&, const Policy&) = default;
};

inline std::size_t product_of(std::span<const std::size_t> cards) {
  std::size_t n = 1;
  for (auto c : cards) n *= c;
  return n;
}

// Mixed-radix counter over a configuration space, last digit fastest.
class Odometer {
 public:
  explicit Odometer(std::vector<std::size_t> radices)
      : radices_(std::move(radices)), digits_(radices_.size(), 0) {
    done_ = std::any_of(radices_.begin(), radices_.end(),
                        [](std::size_t r) { return r == 0; });
  }

  bool done() const { return done_; }
  const std::vector<std::size_t>& digits() const { return digits_; }
  std::size_t operator[](std::size_t i) const { return digits_[i]; }

  void next() {
    for (std::size_t i = radices_.size(); i-- > 0;) {
      if (++digits_[i] < radices_[i]) return;
      digits_[i] = 0;
    }
    done_ = true;
  }

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> digits_;
  bool done_ = false;
};

class InfluenceDiagram {
 public:
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  NodeKind kind(NodeIndex i) const { return nodes_.at(i).kind; }
  const std::string& id(NodeIndex i) const { return nodes_.at(i).id; }
  std::size_t card(NodeIndex i) const { return nodes_.at(i).frame.size(); }

  std::optional<NodeIndex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex index_of(const std::string& id) const {
    auto found = find(id);
    if (!found) throw SchemaError(id, "undeclared node");
    return *found;
  }

  NodeIndex add_node(std::string id, NodeKind kind,
                     std::vector<std::string> frame = {}) {
    if (index_.count(id)) throw SchemaError(id, "duplicate node id");
    NodeIndex i = nodes_.size();
    index_.emplace(id, i);
    nodes_.push_back(Node{std::move(id), kind, std::move(frame)});
    parents_.emplace_back();
    children_.emplace_back();
    cpts_.emplace_back();
    values_.emplace_back();
    return i;
  }

  void add_arc(NodeIndex from, NodeIndex to) {
    if (from >= size() || to >= size()) {
      throw Error(ErrorCode::kSchema, "arc endpoint out of range");
    }
    if (has_arc(from, to)) {
      throw SchemaError(id(from), "duplicate arc to '" + id(to) + "'");
    }
    arcs_.emplace_back(from, to);
    insert_sorted(children_[from], to);
    insert_sorted(parents_[to], from);
  }

  void add_arc(const std::string& from, const std::string& to) {
    add_arc(index_of(from), index_of(to));
  }

  void remove_arc(NodeIndex from, NodeIndex to) {
    auto it = std::find(arcs_.begin(), arcs_.end(), Arc{from, to});
    if (it == arcs_.end()) return;
    arcs_.erase(it);
    erase_sorted(children_[from], to);
    erase_sorted(parents_[to], from);
  }

  bool has_arc(NodeIndex from, NodeIndex to) const {
    return std::binary_search(children_[from].begin(), children_[from].end(),
                              to);
  }

  const std::vector<Arc>& arcs() const { return arcs_; }
  const NodeSet& parents(NodeIndex i) const { return parents_.at(i); }
  const NodeSet& children(NodeIndex i) const { return children_.at(i); }

  void set_cpt(Cpt cpt) {
    NodeIndex i = cpt.child;
    cpts_.at(i) = std::move(cpt);
  }
  void clear_cpt(NodeIndex i) { cpts_.at(i).reset(); }
  const std::optional<Cpt>& cpt(NodeIndex i) const { return cpts_.at(i); }

  void set_value_table(ValueTable table) {
    NodeIndex i = table.node;
    values_.at(i) = std::move(table);
  }
  const std::optional<ValueTable>& value_table(NodeIndex i) const {
    return values_.at(i);
  }

  void set_decision_order(std::vector<NodeIndex> order) {
    decision_order_ = std::move(order);
  }
  void clear_decision_order() { decision_order_.reset(); }
  const std::optional<std::vector<NodeIndex>>& declared_decision_order() const {
    return decision_order_;
  }

  NodeSet nodes_of_kind(NodeKind kind) const {
    NodeSet out;
    for (NodeIndex i = 0; i < size(); ++i) {
      if (nodes_[i].kind == kind) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> cards(std::span<const NodeIndex> vars) const {
    std::vector<std::size_t> out;
    out.reserve(vars.size());
    for (auto v : vars) out.push_back(card(v));
    return out;
  }

  friend bool operator==(const InfluenceDiagram& a, const InfluenceDiagram& b) {
    return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_ && a.cpts_ == b.cpts_ &&
           a.values_ == b.values_ && a.decision_order_ == b.decision_order_;
  }

 private:
  static void insert_sorted(NodeSet& set, NodeIndex v) {
    set.insert(std::lower_bound(set.begin(), set.end(), v), v);
  }
  static void erase_sorted(NodeSet& set, NodeIndex v) {
    auto it = std::lower_bound(set.begin(), set.end(), v);
    if (it != set.end() && *it == v) set.erase(it);
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<Arc> arcs_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<std::optional<Cpt>> cpts_;
  std::vector<std::optional<ValueTable>> values_;
  std::optional<std::vector<NodeIndex>> decision_order_;
};

// Kahn's algorithm, smallest index first among ready nodes. Empty optional
// when the graph has a directed cycle.
inline std::optional<std::vector<NodeIndex>> topological_order(
    const InfluenceDiagram& g) {
  std::vector<std::size_t> indegree(g.size());
  for (NodeIndex i = 0; i < g.size(); ++i) indegree[i] = g.parents(i).size();
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<NodeIndex> order;
  while (!ready.empty()) {
    NodeIndex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (NodeIndex c : g.children(u)) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != g.size()) return std::nullopt;
  return order;
}

// Nodes reachable from `from` by a directed path of length >= 1.
inline std::vector<bool> descendants(const InfluenceDiagram& g, NodeIndex from) {
  std::vector<bool> seen(g.size(), false);
  std::vector<NodeIndex> stack(g.children(from).begin(),
                               g.children(from).end());
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    for (NodeIndex c : g.children(u)) stack.push_back(c);
  }
  return seen;
}

// True when a directed path from `from` to `to` exists that does not use the
// direct arc from -> to.
inline bool has_indirect_path(const InfluenceDiagram& g, NodeIndex from,
                              NodeIndex to) {
  std::vector<bool> seen(g.size(), false);
  std::vector<NodeIndex> stack;
  for (NodeIndex c : g.children(from)) {
    if (c != to) stack.push_back(c);
  }
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    if (seen[u]) continue;
    seen[u] = true;
    for (NodeIndex c : g.children(u)) stack.push_back(c);
  }
  return false;
}

struct Violation {
  std::string rule;
  std::string node;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool contains(const std::string& rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
  }
};

inline constexpr double kRowSumTolerance = 1e-9;

namespace detail {

inline std::string format_sum(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

inline bool same_set(std::vector<NodeIndex> a, std::vector<NodeIndex> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline bool has_duplicates(std::vector<NodeIndex> a) {
  std::sort(a.begin(), a.end());
  return std::adjacent_find(a.begin(), a.end()) != a.end();
}

}  // namespace detail

// Collects every structural and numerical problem instead of stopping at the
// first one.
inline ValidationReport validate(const InfluenceDiagram& g) {
  ValidationReport report;
  auto add = [&](std::string rule, NodeIndex node, std::string message) {
    report.violations.push_back(
        Violation{std::move(rule), g.id(node), std::move(message)});
  };

  if (!topological_order(g)) {
    report.violations.push_back(
        Violation{"acyclic", "", "directed cycle in the graph"});
  }

  for (NodeIndex i = 0; i < g.size(); ++i) {
    const Node& n = g.node(i);
    if (n.kind == NodeKind::kValue) {
      if (!g.children(i).empty()) {
        add("value-leaf", i, "value node has child '" +
                                 g.id(g.children(i).front()) + "'");
      }
      if (!n.frame.empty()) add("frame", i, "value node declares a frame");
    } else {
      if (n.frame.empty()) add("frame", i, "empty frame");
      std::unordered_set<std::string> distinct(n.frame.begin(), n.frame.end());
      if (distinct.size() != n.frame.size()) {
        add("frame", i, "frame values are not distinct");
      }
    }

    if (n.kind != NodeKind::kRandom && g.cpt(i)) {
      add("cpt", i, std::string(to_string(n.kind)) + " node carries a cpt");
    }
    if (n.kind != NodeKind::kValue && g.value_table(i)) {
      add("value-table", i,
          std::string(to_string(n.kind)) + " node carries a value table");
    }

    if (n.kind == NodeKind::kRandom) {
      const auto& cpt = g.cpt(i);
      if (!cpt) {
        add("cpt", i, "random node has no cpt");
        continue;
      }
      if (detail::has_duplicates(cpt->parents) ||
          !detail::same_set(cpt->parents, g.parents(i))) {
        add("cpt", i, "cpt parents differ from graph parents");
        continue;
      }
      std::size_t child_card = n.frame.size();
      std::size_t configs = product_of(g.cards(cpt->parents));
      if (child_card == 0 || cpt->rows.size() != configs * child_card) {
        add("arity", i,
            "cpt has " + std::to_string(cpt->rows.size()) +
                " entries, expected " + std::to_string(configs * child_card));
        continue;
      }
      for (std::size_t r = 0; r < configs; ++r) {
        double sum = 0.0;
        bool in_range = true;
        for (std::size_t c = 0; c < child_card; ++c) {
          double p = cpt->rows[r * child_card + c];
          if (!std::isfinite(p) || p < 0.0 || p > 1.0) in_range = false;
          sum += p;
        }
        if (!in_range) {
          add("cpt-range", i,
              "row " + std::to_string(r) + " has an entry outside [0,1]");
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
          add("cpt-normalization", i,
              "row " + std::to_string(r) + " sums to " +
                  detail::format_sum(sum) + " != 1");
        }
      }
    } else if (n.kind == NodeKind::kValue) {
      const auto& table = g.value_table(i);
      if (!table) {
        add("value-table", i, "value node has no value table");
        continue;
      }
      if (detail::has_duplicates(table->parents) ||
          !detail::same_set(table->parents, g.parents(i))) {
        add("value-table", i, "value table parents differ from graph parents");
        continue;
      }
      std::size_t configs = product_of(g.cards(table->parents));
      if (table->rows.size() != configs) {
        add("arity", i,
            "value table has " + std::to_string(table->rows.size()) +
                " entries, expected " + std::to_string(configs));
        continue;
      }
      for (double x : table->rows) {
        if (!std::isfinite(x)) {
          add("value-range", i, "value table entry is not finite");
          break;
        }
      }
    }
  }

  if (const auto& order = g.declared_decision_order()) {
    if (!detail::same_set(*order, g.nodes_of_kind(NodeKind::kDecision)) ||
        detail::has_duplicates(*order)) {
      report.violations.push_back(
          Violation{"decision-order", "",
                    "declared decision order is not a permutation of the "
                    "decision nodes"});
    }
  }
  return report;
}

// The regular total order d_1, ..., d_k. A declared order is checked against
// reachability; otherwise reachability alone must order every pair.
inline std::vector<NodeIndex> decision_ordering(const InfluenceDiagram& g) {
  NodeSet decisions = g.nodes_of_kind(NodeKind::kDecision);
  std::vector<std::vector<bool>> reach;
  reach.reserve(decisions.size());
  for (NodeIndex d : decisions) reach.push_back(descendants(g, d));

  auto reaches = [&](std::size_t a, std::size_t b) {
    return static_cast<bool>(reach[a][decisions[b]]);
  };

  if (const auto& declared = g.declared_decision_order()) {
    if (!detail::same_set(*declared, decisions) ||
        detail::has_duplicates(*declared)) {
      throw Error(ErrorCode::kNotRegular,
                  "declared order is not a permutation of the decisions");
    }
    std::vector<std::size_t> position(g.size());
    for (std::size_t p = 0; p < declared->size(); ++p) {
      position[(*declared)[p]] = p;
    }
    for (std::size_t a = 0; a < decisions.size(); ++a) {
      for (std::size_t b = 0; b < decisions.size(); ++b) {
        if (a != b && reaches(a, b) &&
            position[decisions[a]] > position[decisions[b]]) {
          throw Error(ErrorCode::kNotRegular,
                      "declared order puts '" + g.id(decisions[b]) +
                          "' before '" + g.id(decisions[a]) +
                          "' which reaches it");
        }
      }
    }
    return *declared;
  }

  // Sort by number of decision ancestors; a total order exists iff every
  // consecutive pair is connected by reachability.
  std::vector<std::size_t> ancestors(decisions.size(), 0);
  for (std::size_t a = 0; a < decisions.size(); ++a) {
    for (std::size_t b = 0; b < decisions.size(); ++b) {
      if (a != b && reaches(b, a)) ++ancestors[a];
    }
  }
  std::vector<std::size_t> idx(decisions.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ancestors[a] < ancestors[b];
  });
  for (std::size_t p = 0; p + 1 < idx.size(); ++p) {
    if (!reaches(idx[p], idx[p + 1])) {
      throw Error(ErrorCode::kNotRegular,
                  "decisions '" + g.id(decisions[idx[p]]) + "' and '" +
                      g.id(decisions[idx[p + 1]]) +
                      "' are not ordered by the graph; declare an order");
    }
  }
  std::vector<NodeIndex> out;
  for (auto i : idx) out.push_back(decisions[i]);
  return out;
}

// Degenerate kernel P(d | parents) = 1 exactly where d equals the decision
// function's choice.
inline Cpt policy_to_kernel(const InfluenceDiagram& g,
                            const DecisionFunction& df) {
  std::size_t options = g.card(df.decision);
  Cpt out;
  out.child = df.decision;
  out.parents = df.parents;
  out.rows.assign(df.table.size() * options, 0.0);
  for (std::size_t r = 0; r < df.table.size(); ++r) {
    out.rows[r * options + df.table[r]] = 1.0;
  }
  return out;
}

}  // namespace sdid
