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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sdid/diagram_io.hpp"
#include "sdid/graph.hpp"
#include "sdid/inference.hpp"

namespace sdid {

// Which part of the source diagram a stage was built from.
struct SectionOutline {
  std::size_t index = 0;
  std::optional<NodeIndex> decision;
  NodeSet entry;
  std::optional<NodeSet> exit;
  NodeSet nodes;

  static SectionOutline of(const Section& s) {
    return SectionOutline{s.index, s.decision, s.entry, s.exit, s.nodes};
  }

  friend bool operator==(const SectionOutline&, const SectionOutline&) = default;
};

// Stage i of the chain MDP. The state x_i ranges over the configurations of
// `state_vars` (a single value when empty); the reward is laid out over
// (x_i, d_i) with the decision innermost.
struct CondensedStage {
  std::size_t index = 0;
  NodeSet state_vars;
  std::vector<std::size_t> state_cards;
  std::optional<NodeIndex> decision;
  std::size_t decision_card = 1;
  std::optional<ConditionalTable> kernel;  // P(x_{i+1} | x_i, d_i)
  std::vector<double> reward;
  SectionOutline source;

  std::size_t state_size() const { return product_of(state_cards); }

  friend bool operator==(const CondensedStage&, const CondensedStage&) = default;
};

struct Condensation {
  std::vector<Node> nodes;  // catalogue of the source diagram's nodes
  std::string digest;       // content digest of the source diagram
  std::vector<CondensedStage> stages;

  std::size_t decisions() const { return stages.empty() ? 0 : stages.size() - 1; }

  friend bool operator==(const Condensation&, const Condensation&) = default;
};

// f_i: the sum of the section's value projections; identically zero when the
// section has no value nodes. A single entry (f_0) for the initial section.
inline std::vector<double> local_value(
    const Section& s, InferenceStats* stats = nullptr,
    EliminationHeuristic heuristic = EliminationHeuristic::kMinFill) {
  std::vector<double> total(product_of(s.cards_of(s.conditioners())), 0.0);
  for (const ValueTable& v : s.values) {
    auto part = value_projection(s, v, stats, heuristic);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
  }
  return total;
}

inline CondensedStage condense_section(const InfluenceDiagram& g, const Section& s,
                                       InferenceStats* stats = nullptr) {
  CondensedStage st;
  st.index = s.index;
  st.state_vars = s.entry;
  st.state_cards = g.cards(s.entry);
  st.decision = s.decision;
  st.decision_card = s.decision ? g.card(*s.decision) : 1;
  if (!s.is_terminal()) st.kernel = section_conditional(s, stats);
  st.reward = local_value(s, stats);
  st.source = SectionOutline::of(s);
  return st;
}

inline Condensation condense(const InfluenceDiagram& g, InferenceStats* stats = nullptr) {
  auto sections = extract_sections(g);
  Condensation c;
  c.nodes = g.nodes();
  c.digest = content_digest(g);
  for (const Section& s : sections) c.stages.push_back(condense_section(g, s, stats));
  return c;
}

// Arity checks between consecutive stages.
inline void check_condensation(const Condensation& c) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kMalformedCondensation, what);
  };
  if (c.stages.empty()) fail("no stages");
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    const auto& st = c.stages[i];
    if (st.index != i) fail("stage index mismatch");
    if (st.state_cards.size() != st.state_vars.size()) fail("state arity");
    if (st.reward.size() != st.state_size() * st.decision_card) {
      fail("stage " + std::to_string(i) + " reward has wrong size");
    }
    bool last = i + 1 == c.stages.size();
    if (last != !st.kernel.has_value()) {
      fail("stage " + std::to_string(i) + " kernel presence is wrong");
    }
    if (!st.kernel) continue;
    const auto& next = c.stages[i + 1];
    NodeSet cond = st.state_vars;
    if (st.decision) cond.push_back(*st.decision);
    if (st.kernel->conditioners != cond || st.kernel->targets != next.state_vars) {
      fail("stage " + std::to_string(i) + " kernel coordinates do not chain");
    }
    if (st.kernel->table.size() != st.kernel->rows() * st.kernel->cols() ||
        st.kernel->rows() != st.state_size() * st.decision_card ||
        st.kernel->cols() != next.state_size()) {
      fail("stage " + std::to_string(i) + " kernel has wrong size");
    }
  }
}

// Largest absolute entry difference between two condensations, or infinity
// when their stage structure differs.
inline double max_table_difference(const Condensation& a, const Condensation& b) {
  constexpr double kApart = std::numeric_limits<double>::infinity();
  if (a.stages.size() != b.stages.size()) return kApart;
  double worst = 0.0;
  auto compare = [&](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return true;
  };
  for (std::size_t i = 0; i < a.stages.size(); ++i) {
    const auto& p = a.stages[i];
    const auto& q = b.stages[i];
    if (p.state_vars != q.state_vars || p.decision != q.decision ||
        p.kernel.has_value() != q.kernel.has_value()) {
      return kApart;
    }
    if (!compare(p.reward, q.reward)) return kApart;
    if (!p.kernel) continue;
    if (p.kernel->conditioners != q.kernel->conditioners ||
        p.kernel->targets != q.kernel->targets || !compare(p.kernel->table, q.kernel->table)) {
      return kApart;
    }
  }
  return worst;
}

namespace detail {

inline Json ids_of(const std::vector<Node>& nodes, const NodeSet& set) {
  Json out = Json::array();
  for (auto v : set) out.push_back(nodes.at(v).id);
  return out;
}

inline NodeSet ids_to_set(const std::vector<Node>& nodes, const Json& j) {
  NodeSet out;
  for (const auto& e : j) {
    auto name = e.get<std::string>();
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [&](const Node& n) { return n.id == name; });
    if (it == nodes.end()) {
      throw Error(ErrorCode::kMalformedCondensation, "unknown variable '" + name + "'");
    }
    out.push_back(static_cast<NodeIndex>(it - nodes.begin()));
  }
  return out;
}

inline std::vector<std::size_t> cards_from(const std::vector<Node>& nodes, const NodeSet& s) {
  std::vector<std::size_t> out;
  for (auto v : s) out.push_back(nodes.at(v).frame.size());
  return out;
}

}  // namespace detail

inline Json condensation_to_json(const Condensation& c) {
  Json root;
  root["digest"] = c.digest;
  Json vars = Json::array();
  for (const Node& n : c.nodes) {
    Json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    j["frame"] = n.frame;
    vars.push_back(std::move(j));
  }
  root["variables"] = std::move(vars);
  Json stages = Json::array();
  for (const auto& st : c.stages) {
    Json j;
    j["index"] = st.index;
    j["state_vars"] = detail::ids_of(c.nodes, st.state_vars);
    j["decision"] = st.decision ? Json(c.nodes.at(*st.decision).id) : Json(nullptr);
    if (st.kernel) {
      Json k;
      k["conditioners"] = detail::ids_of(c.nodes, st.kernel->conditioners);
      k["targets"] = detail::ids_of(c.nodes, st.kernel->targets);
      k["rows"] = detail::real_list(st.kernel->table);
      k["uniform_rows"] = st.kernel->uniform_rows;
      j["kernel"] = std::move(k);
    } else {
      j["kernel"] = nullptr;
    }
    j["reward"] = detail::real_list(st.reward);
    Json src;
    src["entry"] = detail::ids_of(c.nodes, st.source.entry);
    src["exit"] = st.source.exit ? detail::ids_of(c.nodes, *st.source.exit) : Json(nullptr);
    src["nodes"] = detail::ids_of(c.nodes, st.source.nodes);
    j["section"] = std::move(src);
    stages.push_back(std::move(j));
  }
  root["stages"] = std::move(stages);
  return root;
}

inline std::string serialize_condensation(const Condensation& c) {
  return to_text(condensation_to_json(c));
}

inline Condensation condensation_from_json(const Json& root) {
  try {
    Condensation c;
    c.digest = root.at("digest").get<std::string>();
    for (const auto& v : root.at("variables")) {
      Node n;
      n.id = v.at("id").get<std::string>();
      n.kind = detail::parse_kind(n.id, v.at("kind").get<std::string>());
      n.frame = v.at("frame").get<std::vector<std::string>>();
      c.nodes.push_back(std::move(n));
    }
    for (const auto& j : root.at("stages")) {
      CondensedStage st;
      st.index = j.at("index").get<std::size_t>();
      st.state_vars = detail::ids_to_set(c.nodes, j.at("state_vars"));
      st.state_cards = detail::cards_from(c.nodes, st.state_vars);
      if (!j.at("decision").is_null()) {
        st.decision = detail::ids_to_set(c.nodes, Json::array({j.at("decision")}))[0];
        st.decision_card = c.nodes.at(*st.decision).frame.size();
      }
      if (!j.at("kernel").is_null()) {
        const Json& k = j.at("kernel");
        ConditionalTable t;
        t.conditioners = detail::ids_to_set(c.nodes, k.at("conditioners"));
        t.conditioner_cards = detail::cards_from(c.nodes, t.conditioners);
        t.targets = detail::ids_to_set(c.nodes, k.at("targets"));
        t.target_cards = detail::cards_from(c.nodes, t.targets);
        t.table = k.at("rows").get<std::vector<double>>();
        t.uniform_rows = k.at("uniform_rows").get<std::vector<std::size_t>>();
        st.kernel = std::move(t);
      }
      st.reward = j.at("reward").get<std::vector<double>>();
      const Json& src = j.at("section");
      st.source.index = st.index;
      st.source.decision = st.decision;
      st.source.entry = detail::ids_to_set(c.nodes, src.at("entry"));
      if (!src.at("exit").is_null()) st.source.exit = detail::ids_to_set(c.nodes, src.at("exit"));
      st.source.nodes = detail::ids_to_set(c.nodes, src.at("nodes"));
      c.stages.push_back(std::move(st));
    }
    check_condensation(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedCondensation, e.what());
  }
}

inline Condensation parse_condensation(std::string_view text) {
  return condensation_from_json(parse_json_text(text));
}

}  // namespace sdid
