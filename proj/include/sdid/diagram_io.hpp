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

#include <string>
#include <string_view>

#include "sdid/diagram.hpp"
#include "sdid/json_io.hpp"

namespace sdid {

namespace detail {

inline NodeKind parse_kind(const std::string& id, const std::string& s) {
  if (s == "random") return NodeKind::kRandom;
  if (s == "decision") return NodeKind::kDecision;
  if (s == "value") return NodeKind::kValue;
  throw SchemaError(id, "unknown node kind '" + s + "'");
}

inline const Json& require(const Json& obj, const char* key,
                           const std::string& owner) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(owner, std::string("missing key '") + key + "'");
  }
  return obj.at(key);
}

inline std::string as_string(const Json& j, const std::string& owner) {
  if (!j.is_string()) throw SchemaError(owner, "expected a string");
  return j.get<std::string>();
}

inline std::vector<double> as_reals(const Json& j, const std::string& owner) {
  if (!j.is_array()) throw SchemaError(owner, "rows must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw SchemaError(owner, "rows must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline std::vector<NodeIndex> as_node_list(const InfluenceDiagram& g,
                                           const Json& j,
                                           const std::string& owner) {
  if (!j.is_array()) throw SchemaError(owner, "expected a list of node ids");
  std::vector<NodeIndex> out;
  for (const auto& e : j) {
    auto name = as_string(e, owner);
    auto found = g.find(name);
    if (!found) {
      throw SchemaError(owner, "references undeclared node '" + name + "'");
    }
    out.push_back(*found);
  }
  return out;
}

inline Json node_list(const InfluenceDiagram& g,
                      const std::vector<NodeIndex>& nodes) {
  Json out = Json::array();
  for (auto n : nodes) out.push_back(g.id(n));
  return out;
}

inline Json real_list(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

}  // namespace detail

inline InfluenceDiagram diagram_from_json(const Json& root) {
  const std::string top = "<root>";
  InfluenceDiagram g;
  const Json& nodes = detail::require(root, "nodes", top);
  if (!nodes.is_array()) throw SchemaError(top, "'nodes' must be a list");
  for (const auto& n : nodes) {
    std::string id = detail::as_string(detail::require(n, "id", top), top);
    NodeKind kind =
        detail::parse_kind(id, detail::as_string(detail::require(n, "kind", id), id));
    std::vector<std::string> frame;
    if (n.contains("frame")) {
      if (!n.at("frame").is_array()) throw SchemaError(id, "frame must be a list");
      for (const auto& v : n.at("frame")) frame.push_back(detail::as_string(v, id));
    }
    g.add_node(std::move(id), kind, std::move(frame));
  }

  if (root.contains("arcs")) {
    for (const auto& a : root.at("arcs")) {
      if (!a.is_array() || a.size() != 2) {
        throw SchemaError(top, "arc must be a [from, to] pair");
      }
      std::string from = detail::as_string(a[0], top);
      std::string to = detail::as_string(a[1], top);
      if (!g.find(from)) throw SchemaError(from, "arc from undeclared node");
      if (!g.find(to)) throw SchemaError(to, "arc to undeclared node");
      g.add_arc(from, to);
    }
  }

  if (root.contains("cpts")) {
    for (const auto& c : root.at("cpts")) {
      std::string child =
          detail::as_string(detail::require(c, "child", top), top);
      auto idx = g.find(child);
      if (!idx) throw SchemaError(child, "cpt for undeclared node");
      if (g.cpt(*idx)) throw SchemaError(child, "duplicate cpt");
      Cpt cpt;
      cpt.child = *idx;
      cpt.parents = detail::as_node_list(g, detail::require(c, "parents", child), child);
      cpt.rows = detail::as_reals(detail::require(c, "rows", child), child);
      g.set_cpt(std::move(cpt));
    }
  }

  if (root.contains("values")) {
    for (const auto& v : root.at("values")) {
      std::string node = detail::as_string(detail::require(v, "node", top), top);
      auto idx = g.find(node);
      if (!idx) throw SchemaError(node, "value table for undeclared node");
      if (g.value_table(*idx)) throw SchemaError(node, "duplicate value table");
      ValueTable table;
      table.node = *idx;
      table.parents = detail::as_node_list(g, detail::require(v, "parents", node), node);
      table.rows = detail::as_reals(detail::require(v, "rows", node), node);
      g.set_value_table(std::move(table));
    }
  }

  if (root.contains("decision_order")) {
    g.set_decision_order(
        detail::as_node_list(g, root.at("decision_order"), "decision_order"));
  }
  return g;
}

inline InfluenceDiagram parse_diagram(std::string_view text) {
  return diagram_from_json(parse_json_text(text));
}

inline Json diagram_to_json(const InfluenceDiagram& g) {
  Json root;
  Json nodes = Json::array();
  for (const Node& n : g.nodes()) {
    Json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    if (n.kind != NodeKind::kValue || !n.frame.empty()) {
      j["frame"] = n.frame;
    }
    nodes.push_back(std::move(j));
  }
  root["nodes"] = std::move(nodes);

  Json arcs = Json::array();
  for (auto [from, to] : g.arcs()) arcs.push_back(Json::array({g.id(from), g.id(to)}));
  root["arcs"] = std::move(arcs);

  Json cpts = Json::array();
  Json values = Json::array();
  for (NodeIndex i = 0; i < g.size(); ++i) {
    if (const auto& c = g.cpt(i)) {
      Json j;
      j["child"] = g.id(i);
      j["parents"] = detail::node_list(g, c->parents);
      j["rows"] = detail::real_list(c->rows);
      cpts.push_back(std::move(j));
    }
    if (const auto& v = g.value_table(i)) {
      Json j;
      j["node"] = g.id(i);
      j["parents"] = detail::node_list(g, v->parents);
      j["rows"] = detail::real_list(v->rows);
      values.push_back(std::move(j));
    }
  }
  root["cpts"] = std::move(cpts);
  root["values"] = std::move(values);
  if (const auto& order = g.declared_decision_order()) {
    root["decision_order"] = detail::node_list(g, *order);
  }
  return root;
}

inline std::string serialize_diagram(const InfluenceDiagram& g) {
  return to_text(diagram_to_json(g));
}

// FNV-1a over the canonical serialization; identifies a diagram's content
// for condensation caching.
inline std::string content_digest(const InfluenceDiagram& g) {
  std::string text = serialize_diagram(g);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sdid
