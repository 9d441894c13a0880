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
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdid/condensation.hpp"
#include "sdid/mdp.hpp"
#include "sdid/transform.hpp"

namespace sdid {

// Observe random node c before decision d_s and every later decision.
struct VpiQuery {
  std::string c;
  std::string d_s;

  friend bool operator==(const VpiQuery&, const VpiQuery&) = default;
};

enum class StageTag { kUnchanged, kEntry, kMiddle, kExitReused, kExitRecomputed, kRecomputed };

inline const char* to_string(StageTag tag) {
  switch (tag) {
    case StageTag::kUnchanged: return "unchanged";
    case StageTag::kEntry: return "entry";
    case StageTag::kMiddle: return "middle";
    case StageTag::kExitReused: return "exit-reused";
    case StageTag::kExitRecomputed: return "exit-recomputed";
    case StageTag::kRecomputed: return "recomputed";
  }
  return "?";
}

inline bool is_reuse(StageTag tag) {
  return tag != StageTag::kExitRecomputed && tag != StageTag::kRecomputed;
}

struct StageReport {
  std::size_t index = 0;
  StageTag tag = StageTag::kUnchanged;
  std::size_t eliminations = 0;
  std::size_t eliminations_saved = 0;
  std::size_t entries_copied = 0;
  std::size_t entries_computed = 0;
};

struct ReuseCounters {
  std::size_t eliminations_performed = 0;
  std::size_t eliminations_saved = 0;
  std::size_t entries_copied = 0;
  std::size_t entries_computed = 0;

  void add(const StageReport& s) {
    eliminations_performed += s.eliminations;
    eliminations_saved += s.eliminations_saved;
    entries_copied += s.entries_copied;
    entries_computed += s.entries_computed;
  }
};

struct IncrementalResult {
  Condensation condensation;
  std::vector<StageReport> stages;
};

enum class VpiRoute { kShortcut, kIncremental, kScratch };

inline const char* to_string(VpiRoute r) {
  switch (r) {
    case VpiRoute::kShortcut: return "shortcut";
    case VpiRoute::kIncremental: return "incremental";
    case VpiRoute::kScratch: return "scratch";
  }
  return "?";
}

struct VpiReport {
  VpiQuery query;
  double vpi = 0.0;
  double original_value = 0.0;
  double modified_value = 0.0;
  std::size_t s = 0;
  std::size_t t = 0;
  VpiRoute route = VpiRoute::kShortcut;
  bool cache_used = false;
  std::vector<StageReport> stages;
  ReuseCounters counters;
  // Incremental route only: the padded I' and its condensation.
  std::optional<InfluenceDiagram> modified_diagram;
  std::optional<Condensation> modified_condensation;
};

// Largest t such that c belongs to section I(d_{t-1}, d_t). A node found only
// in the terminal section gets k+1, one found only in the initial section 0.
inline std::size_t find_t(const std::vector<Section>& sections, NodeIndex c) {
  const std::size_t k = sections.size() - 1;
  std::vector<std::size_t> hits;
  for (const auto& s : sections) {
    if (s.contains(c)) hits.push_back(s.index);
  }
  if (hits.size() == 1 && hits[0] == 0 && k > 0) return 0;
  std::size_t t = k + 1;
  for (auto j : hits) {
    if (j < k) t = j + 1;
  }
  return t;
}

inline std::size_t find_t(const InfluenceDiagram& g, NodeIndex c) {
  return find_t(extract_sections(g), c);
}

namespace vpi_detail {

struct Resolved {
  NodeIndex c = 0;
  NodeIndex d_s = 0;
  std::size_t s = 0;  // 1-based position of d_s in the regular order
  std::vector<NodeIndex> order;
};

inline Resolved resolve(const InfluenceDiagram& g, const VpiQuery& q) {
  Resolved r;
  auto c = g.find(q.c);
  auto d = g.find(q.d_s);
  if (!c) throw Error(ErrorCode::kUnsupportedQuery, "unknown node '" + q.c + "'");
  if (!d) throw Error(ErrorCode::kUnsupportedQuery, "unknown node '" + q.d_s + "'");
  if (g.kind(*c) != NodeKind::kRandom) {
    throw Error(ErrorCode::kNotRandom, "'" + q.c + "' is not a random node");
  }
  if (g.kind(*d) != NodeKind::kDecision) {
    throw Error(ErrorCode::kUnsupportedQuery, "'" + q.d_s + "' is not a decision node");
  }
  if (g.has_arc(*c, *d)) {
    throw Error(ErrorCode::kUnsupportedQuery,
                "'" + q.c + "' is already observed at '" + q.d_s + "'");
  }
  if (descendants(g, *d)[*c]) {
    throw Error(ErrorCode::kCycleWouldForm,
                "'" + q.c + "' is a descendant of '" + q.d_s + "'");
  }
  r.c = *c;
  r.d_s = *d;
  r.order = decision_ordering(g);
  r.s = static_cast<std::size_t>(std::find(r.order.begin(), r.order.end(), *d) -
                                 r.order.begin()) + 1;
  return r;
}

inline bool has(const NodeSet& set, NodeIndex v) {
  return std::binary_search(set.begin(), set.end(), v);
}

inline NodeSet minus(NodeSet set, NodeIndex v) {
  set.erase(std::remove(set.begin(), set.end(), v), set.end());
  return set;
}

inline SectionOutline outline_without(SectionOutline o, NodeIndex c) {
  o.entry = minus(o.entry, c);
  if (o.exit) o.exit = minus(*o.exit, c);
  o.nodes = minus(o.nodes, c);
  return o;
}

// For every configuration of `vars`: its index with c dropped and c's value.
struct Projection {
  std::vector<std::size_t> index;
  std::vector<std::size_t> c_value;
};

inline Projection drop(const NodeSet& vars, const std::vector<std::size_t>& cards,
                       NodeIndex c) {
  Projection p;
  for (Odometer o(cards); !o.done(); o.next()) {
    std::size_t idx = 0;
    std::size_t cv = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == c) {
        cv = o[i];
      } else {
        idx = idx * cards[i] + o[i];
      }
    }
    p.index.push_back(idx);
    p.c_value.push_back(cv);
  }
  return p;
}

// Elimination calls a from-scratch computation of the section would make.
inline std::size_t kernel_cost(const Section& s) {
  if (!s.exit) return 0;
  for (auto v : *s.exit) {
    if (!s.is_conditioner(v)) return 1;
  }
  return 0;
}

inline std::size_t reward_cost(const Section& s) {
  std::size_t n = 0;
  for (const auto& v : s.values) {
    for (auto p : v.parents) {
      if (!s.is_conditioner(p)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

inline bool uniform_row(const ConditionalTable& k, std::size_t r) {
  return std::binary_search(k.uniform_rows.begin(), k.uniform_rows.end(), r);
}

inline ConditionalTable blank_kernel(const Section& s) {
  ConditionalTable k;
  k.conditioners = s.conditioners();
  k.conditioner_cards = s.cards_of(k.conditioners);
  k.targets = *s.exit;
  k.target_cards = s.cards_of(k.targets);
  k.table.assign(k.rows() * k.cols(), 0.0);
  return k;
}

inline void fill_uniform(ConditionalTable& k, std::size_t r) {
  const std::size_t cols = k.cols();
  for (std::size_t y = 0; y < cols; ++y) k.table[r * cols + y] = 1.0 / static_cast<double>(cols);
  k.uniform_rows.push_back(r);
}

// f'(e', d) = f(e, d): the reward does not depend on the newly observed c.
inline std::vector<double> widen_reward(const std::vector<double>& f, const Section& s,
                                        NodeIndex c, std::size_t options) {
  auto pe = drop(s.entry, s.cards_of(s.entry), c);
  std::vector<double> out;
  out.reserve(pe.index.size() * options);
  for (std::size_t e = 0; e < pe.index.size(); ++e) {
    for (std::size_t d = 0; d < options; ++d) out.push_back(f[pe.index[e] * options + d]);
  }
  return out;
}

// P'(x', c | e, d) = P(x | e, d) P(c): c is a root outside the section.
inline ConditionalTable entry_kernel(const ConditionalTable& orig, const Section& s,
                                     NodeIndex c, const std::vector<double>& prior) {
  ConditionalTable k = blank_kernel(s);
  auto px = drop(k.targets, k.target_cards, c);
  const std::size_t cols = k.cols();
  for (std::size_t r = 0; r < k.rows(); ++r) {
    if (uniform_row(orig, r)) {
      fill_uniform(k, r);
      continue;
    }
    for (std::size_t y = 0; y < cols; ++y) {
      k.table[r * cols + y] = orig.at(r, px.index[y]) * prior[px.c_value[y]];
    }
  }
  return k;
}

// c joins both frontiers and is carried through unchanged.
inline ConditionalTable middle_kernel(const ConditionalTable& orig, const Section& s,
                                      NodeIndex c, std::size_t options) {
  ConditionalTable k = blank_kernel(s);
  auto pe = drop(s.entry, s.cards_of(s.entry), c);
  auto px = drop(k.targets, k.target_cards, c);
  const bool c_was_entry = has(orig.conditioners, c);
  const std::size_t cols = k.cols();
  for (std::size_t e = 0; e < pe.index.size(); ++e) {
    for (std::size_t d = 0; d < options; ++d) {
      std::size_t r = e * options + d;
      std::size_t r0 = c_was_entry ? r : pe.index[e] * options + d;
      if (uniform_row(orig, r0)) {
        fill_uniform(k, r);
        continue;
      }
      for (std::size_t y = 0; y < cols; ++y) {
        if (px.c_value[y] == pe.c_value[e]) k.table[r * cols + y] = orig.at(r0, px.index[y]);
      }
    }
  }
  return k;
}

// Conditional renormalization: P(x | e, c, d) = P(x | e, d) / P(c | e, d),
// where c is already one of the targets.
inline ConditionalTable renormalized_kernel(const ConditionalTable& orig, const Section& s,
                                            NodeIndex c, std::size_t options) {
  ConditionalTable k = blank_kernel(s);
  auto pe = drop(s.entry, s.cards_of(s.entry), c);
  auto px = drop(k.targets, k.target_cards, c);
  const std::size_t cols = k.cols();
  for (std::size_t e = 0; e < pe.index.size(); ++e) {
    for (std::size_t d = 0; d < options; ++d) {
      std::size_t r = e * options + d;
      std::size_t r0 = pe.index[e] * options + d;
      double denom = 0.0;
      if (!uniform_row(orig, r0)) {
        for (std::size_t y = 0; y < cols; ++y) {
          if (px.c_value[y] == pe.c_value[e]) denom += orig.at(r0, y);
        }
      }
      if (denom <= 0.0) {
        fill_uniform(k, r);
        continue;
      }
      for (std::size_t y = 0; y < cols; ++y) {
        if (px.c_value[y] == pe.c_value[e]) k.table[r * cols + y] = orig.at(r0, y) / denom;
      }
    }
  }
  return k;
}

inline std::size_t table_entries(const CondensedStage& st) {
  return st.reward.size() + (st.kernel ? st.kernel->table.size() : 0);
}

}  // namespace vpi_detail

// I' = g plus arcs c -> d_i for s <= i < t (existing arcs skipped). Arcs to d_t
// and later decisions are left out: c is upstream of their frontiers, so the
// information they would carry is of no use.
inline InfluenceDiagram add_information_arcs(const InfluenceDiagram& g, NodeIndex c,
                                             const std::vector<NodeIndex>& order,
                                             std::size_t from, std::size_t to) {
  InfluenceDiagram out = g;
  for (std::size_t i = from; i <= to && i <= order.size(); ++i) {
    NodeIndex d = order[i - 1];
    if (out.has_arc(c, d)) continue;
    if (descendants(out, d)[c]) {
      throw Error(ErrorCode::kCycleWouldForm,
                  "arc '" + g.id(c) + "' -> '" + g.id(d) + "' would close a cycle");
    }
    out.add_arc(c, d);
  }
  return out;
}

// Expects a smooth regular SDID in which c is already a root.
inline InfluenceDiagram build_modified(const InfluenceDiagram& g, const VpiQuery& q) {
  auto r = vpi_detail::resolve(g, q);
  std::size_t t = find_t(g, r.c);
  if (t <= r.s) return g;
  return add_information_arcs(g, r.c, r.order, r.s, t - 1);
}

// The literal query diagram: c observed at d_s and every later decision.
inline InfluenceDiagram build_full_modified(const InfluenceDiagram& g, const VpiQuery& q) {
  auto r = vpi_detail::resolve(g, q);
  return add_information_arcs(g, r.c, r.order, r.s, r.order.size());
}

// Condenses `modified` stage by stage, reusing the tables of `orig` wherever
// the section structure allows it.
inline IncrementalResult incremental_condense(const Condensation& orig,
                                              const InfluenceDiagram& modified, NodeIndex c) {
  using namespace vpi_detail;
  auto sections = extract_sections(modified);
  if (orig.nodes != modified.nodes() || orig.stages.size() != sections.size()) {
    throw Error(ErrorCode::kProvenanceMismatch,
                "condensation does not belong to the query's base diagram");
  }
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (outline_without(SectionOutline::of(sections[i]), c) !=
        outline_without(orig.stages[i].source, c)) {
      throw Error(ErrorCode::kProvenanceMismatch,
                  "stage " + std::to_string(i) + " was built from a different section");
    }
  }

  IncrementalResult out;
  out.condensation.nodes = orig.nodes;
  out.condensation.digest = content_digest(modified);
  const bool c_is_root = modified.parents(c).empty();

  for (const Section& sec : sections) {
    const CondensedStage& o = orig.stages[sec.index];
    StageReport rep;
    rep.index = sec.index;
    CondensedStage st;
    st.index = sec.index;
    st.state_vars = sec.entry;
    st.state_cards = modified.cards(sec.entry);
    st.decision = sec.decision;
    st.decision_card = sec.decision ? modified.card(*sec.decision) : 1;
    st.source = SectionOutline::of(sec);
    const std::size_t options = st.decision_card;

    const bool in_n = has(o.source.nodes, c);
    const bool in_e = has(o.source.entry, c);
    const bool in_x = o.source.exit && has(*o.source.exit, c);
    const bool new_e = has(sec.entry, c) && !in_e;
    const bool new_x = sec.exit && has(*sec.exit, c) && !in_x;
    const bool nodes_ok = minus(sec.nodes, c) == minus(o.source.nodes, c);

    auto reuse_all = [&](StageTag tag) {
      rep.tag = tag;
      rep.eliminations_saved = kernel_cost(sec) + reward_cost(sec);
      rep.entries_copied = table_entries(st);
    };

    if (!nodes_ok) {
      rep.tag = StageTag::kRecomputed;
    } else if (!new_e && !new_x) {
      st.kernel = o.kernel;
      st.reward = o.reward;
      reuse_all(StageTag::kUnchanged);
    } else if (!new_e && new_x && !in_e && !in_n && c_is_root) {
      st.kernel = entry_kernel(*o.kernel, sec, c, modified.cpt(c)->rows);
      st.reward = o.reward;
      reuse_all(StageTag::kEntry);
    } else if (!new_e && new_x && in_e) {
      st.kernel = middle_kernel(*o.kernel, sec, c, options);
      st.reward = o.reward;
      reuse_all(StageTag::kMiddle);
    } else if (new_e && new_x && !in_n) {
      st.kernel = middle_kernel(*o.kernel, sec, c, options);
      st.reward = widen_reward(o.reward, sec, c, options);
      reuse_all(StageTag::kMiddle);
    } else if (new_e && !new_x) {
      InferenceStats stats;
      bool kernel_reused = true;
      if (sec.exit && in_x) {
        st.kernel = renormalized_kernel(*o.kernel, sec, c, options);
        rep.eliminations_saved += kernel_cost(sec);
        rep.entries_copied += st.kernel->table.size();
      } else if (sec.exit) {
        st.kernel = section_conditional(sec, &stats);
        kernel_reused = false;
      }
      const NodeSet& e0 = o.source.entry;
      bool reward_reusable = std::all_of(sec.values.begin(), sec.values.end(),
                                         [&](const ValueTable& v) {
                                           return std::all_of(
                                               v.parents.begin(), v.parents.end(),
                                               [&](NodeIndex p) {
                                                 return has(e0, p) || p == *sec.decision;
                                               });
                                         });
      if (reward_reusable) {
        st.reward = widen_reward(o.reward, sec, c, options);
        rep.eliminations_saved += reward_cost(sec);
        rep.entries_copied += st.reward.size();
      } else {
        st.reward = local_value(sec, &stats);
      }
      rep.tag = kernel_reused && reward_reusable ? StageTag::kExitReused
                                                 : StageTag::kExitRecomputed;
      rep.eliminations = stats.eliminations;
      rep.entries_computed = stats.entries_computed;
    } else {
      rep.tag = StageTag::kRecomputed;
    }

    if (rep.tag == StageTag::kRecomputed) {
      InferenceStats stats;
      st = condense_section(modified, sec, &stats);
      rep.eliminations = stats.eliminations;
      rep.entries_computed = stats.entries_computed;
    }
    out.condensation.stages.push_back(std::move(st));
    out.stages.push_back(rep);
  }
  check_condensation(out.condensation);
  return out;
}

// Answers VPI queries against one diagram, keeping every condensation it
// builds so that later queries on the same base can reuse it.
class VpiEngine {
 public:
  explicit VpiEngine(const InfluenceDiagram& g) : input_(g), base_(smooth(g)) {}

  const InfluenceDiagram& base() const { return base_; }

  const Condensation& base_condensation() {
    bool hit = false;
    return condensation_for(base_, hit);
  }

  // A condensation loaded from elsewhere; it must describe the smoothed base.
  void preload(Condensation c) {
    if (c.digest != content_digest(base_)) {
      throw Error(ErrorCode::kProvenanceMismatch,
                  "cached condensation was built from a different diagram");
    }
    check_condensation(c);
    cache_.insert_or_assign(c.digest, std::move(c));
  }

  VpiReport run(const VpiQuery& q) {
    VpiReport r;
    r.query = q;
    auto res = vpi_detail::resolve(input_, q);
    r.s = res.s;
    r.t = find_t(base_, res.c);
    // Smoothing may have made c a descendant of d_s; only the literal
    // construction on the input diagram is meaningful then.
    if (descendants(base_, res.d_s)[res.c]) return scratch(r, res);
    if (r.t <= r.s) return shortcut(r);

    std::optional<InfluenceDiagram> rooted = root_at(res.c);
    if (!rooted) return scratch(r, res);
    auto rooted_sections = extract_sections(*rooted);
    std::size_t t = find_t(rooted_sections, res.c);
    r.t = t;
    if (t <= r.s) return shortcut(r);

    // Value nodes of section t-1 get d_{t-1} as an explicit parent.
    InfluenceDiagram padded =
        pad_value_parents(*rooted, res.order[t - 2], rooted_sections[t - 1]);
    try {
      auto padded_sections = extract_sections(padded);
      for (std::size_t i = 0; i < padded_sections.size(); ++i) {
        if (SectionOutline::of(padded_sections[i]) != SectionOutline::of(rooted_sections[i])) {
          return scratch(r, res);
        }
      }
      InfluenceDiagram modified = add_information_arcs(padded, res.c, res.order, r.s, t - 1);
      const Condensation& orig = condensation_for(*rooted, r.cache_used);
      auto inc = incremental_condense(orig, modified, res.c);
      r.route = VpiRoute::kIncremental;
      r.original_value = backward_induction(orig).value;
      r.modified_value = backward_induction(inc.condensation).value;
      r.vpi = r.modified_value - r.original_value;
      r.stages = std::move(inc.stages);
      for (const auto& s : r.stages) r.counters.add(s);
      r.modified_diagram = std::move(modified);
      r.modified_condensation = std::move(inc.condensation);
      return r;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kCycleWouldForm) throw;
      return scratch(r, res);
    }
  }

 private:
  const Condensation& condensation_for(const InfluenceDiagram& g, bool& hit) {
    auto key = content_digest(g);
    auto it = cache_.find(key);
    hit = it != cache_.end();
    if (hit) return it->second;
    return cache_.emplace(key, condense(g)).first->second;
  }

  VpiReport shortcut(VpiReport r) {
    const Condensation& orig = condensation_for(base_, r.cache_used);
    r.route = VpiRoute::kShortcut;
    r.original_value = backward_induction(orig).value;
    r.modified_value = r.original_value;
    r.vpi = 0.0;
    return r;
  }

  // Reverses arcs so that c is a root while keeping the diagram a smooth SDID.
  std::optional<InfluenceDiagram> root_at(NodeIndex c) const {
    try {
      InfluenceDiagram g = make_root(base_, c);
      if (!is_stepwise_decomposable(g)) return std::nullopt;
      if (!is_smooth(g)) g = smooth(g);
      if (!g.parents(c).empty()) return std::nullopt;
      return g;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  VpiReport scratch(VpiReport r, const vpi_detail::Resolved& res) {
    const Condensation& orig = condensation_for(base_, r.cache_used);
    InfluenceDiagram full = smooth(add_information_arcs(input_, res.c, res.order, res.s,
                                                        res.order.size()));
    InferenceStats stats;
    Condensation mod = condense(full, &stats);
    r.route = VpiRoute::kScratch;
    r.original_value = backward_induction(orig).value;
    r.modified_value = backward_induction(mod).value;
    r.vpi = r.modified_value - r.original_value;
    r.stages.clear();
    for (const auto& st : mod.stages) {
      StageReport s;
      s.index = st.index;
      s.tag = StageTag::kRecomputed;
      s.entries_computed = vpi_detail::table_entries(st);
      r.stages.push_back(s);
    }
    r.counters = ReuseCounters{};
    r.counters.eliminations_performed = stats.eliminations;
    r.counters.entries_computed = stats.entries_computed;
    return r;
  }

  InfluenceDiagram input_;
  InfluenceDiagram base_;
  std::map<std::string, Condensation> cache_;
};

inline VpiReport vpi(const InfluenceDiagram& g, const VpiQuery& q,
                     const std::optional<Condensation>& cached = std::nullopt) {
  VpiEngine engine(g);
  if (cached) engine.preload(*cached);
  return engine.run(q);
}

inline std::vector<VpiReport> vpi_batch(const InfluenceDiagram& g,
                                        const std::vector<VpiQuery>& queries,
                                        const std::optional<Condensation>& cached = std::nullopt) {
  VpiEngine engine(g);
  if (cached) engine.preload(*cached);
  std::vector<VpiReport> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(engine.run(q));
  return out;
}

inline std::vector<VpiQuery> queries_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("queries", "expected a list of {c, d_s}");
  std::vector<VpiQuery> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("c") || !e.contains("d_s") || !e["c"].is_string() ||
        !e["d_s"].is_string()) {
      throw SchemaError("queries", "each query needs string fields 'c' and 'd_s'");
    }
    out.push_back(VpiQuery{e["c"].get<std::string>(), e["d_s"].get<std::string>()});
  }
  return out;
}

inline Json report_to_json(const VpiReport& r) {
  Json j;
  j["c"] = r.query.c;
  j["d_s"] = r.query.d_s;
  j["vpi"] = r.vpi;
  j["original_value"] = r.original_value;
  j["modified_value"] = r.modified_value;
  j["s"] = r.s;
  j["t"] = r.t;
  j["route"] = to_string(r.route);
  j["cache_used"] = r.cache_used;
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json e;
    e["index"] = s.index;
    e["tag"] = to_string(s.tag);
    e["eliminations"] = s.eliminations;
    e["eliminations_saved"] = s.eliminations_saved;
    e["entries_copied"] = s.entries_copied;
    e["entries_computed"] = s.entries_computed;
    stages.push_back(std::move(e));
  }
  j["stages"] = std::move(stages);
  Json c;
  c["eliminations_performed"] = r.counters.eliminations_performed;
  c["eliminations_saved"] = r.counters.eliminations_saved;
  c["entries_copied"] = r.counters.entries_copied;
  c["entries_computed"] = r.counters.entries_computed;
  j["counters"] = std::move(c);
  return j;
}

inline std::string format_tsv_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

inline std::string reports_to_tsv(const std::vector<VpiReport>& reports) {
  std::string out = "query\tvpi\treused_stages\trecomputed_stages\n";
  for (const auto& r : reports) {
    std::size_t reused = 0;
    for (const auto& s : r.stages) reused += is_reuse(s.tag) ? 1 : 0;
    out += r.query.c + "->" + r.query.d_s + "\t" + format_tsv_real(r.vpi) + "\t" +
           std::to_string(reused) + "\t" + std::to_string(r.stages.size() - reused) + "\n";
  }
  return out;
}

}  // namespace sdid
