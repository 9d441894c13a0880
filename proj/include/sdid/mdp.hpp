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

#include <limits>
#include <vector>

#include "sdid/condensation.hpp"

namespace sdid {

struct StageValue {
  std::size_t stage = 0;
  std::vector<double> values;  // V_i over the stage's states
};

// The chosen decision value (frame index) for every state of one stage.
struct StageRule {
  std::size_t stage = 0;
  NodeIndex decision = 0;
  std::vector<std::size_t> rows;

  friend bool operator==(const StageRule&, const StageRule&) = default;
};

struct CondensedPolicy {
  std::vector<StageRule> rules;  // stages 1..k

  friend bool operator==(const CondensedPolicy&, const CondensedPolicy&) = default;
};

struct Solution {
  double value = 0.0;
  CondensedPolicy policy;
  std::vector<StageValue> values;  // stages 0..k
};

inline Solution backward_induction(const Condensation& c) {
  check_condensation(c);
  const std::size_t n = c.stages.size();
  Solution out;
  out.values.resize(n);
  out.policy.rules.resize(n - 1);
  std::vector<double> next;  // V_{i+1}; empty means identically zero
  for (std::size_t i = n; i-- > 0;) {
    const CondensedStage& st = c.stages[i];
    const std::size_t states = st.state_size();
    const std::size_t options = st.decision_card;
    std::vector<double> v(states, 0.0);
    std::vector<std::size_t> choice(states, 0);
    for (std::size_t x = 0; x < states; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < options; ++d) {
        std::size_t r = x * options + d;
        double q = st.reward[r];
        if (st.kernel) {
          const std::size_t cols = st.kernel->cols();
          for (std::size_t y = 0; y < cols; ++y) q += st.kernel->table[r * cols + y] * next[y];
        }
        if (q > best) {
          best = q;
          choice[x] = d;
        }
      }
      v[x] = best;
    }
    out.values[i] = StageValue{i, v};
    if (st.decision) out.policy.rules[i - 1] = StageRule{i, *st.decision, std::move(choice)};
    next = std::move(v);
  }
  out.value = next[0];
  return out;
}

inline void check_policy(const Condensation& c, const CondensedPolicy& p) {
  if (p.rules.size() + 1 != c.stages.size()) {
    throw Error(ErrorCode::kMalformedCondensation, "policy has the wrong number of stages");
  }
  for (std::size_t i = 1; i < c.stages.size(); ++i) {
    const auto& st = c.stages[i];
    const auto& rule = p.rules[i - 1];
    if (rule.rows.size() != st.state_size()) {
      throw Error(ErrorCode::kMalformedCondensation,
                  "policy for stage " + std::to_string(i) + " is not total");
    }
    for (auto d : rule.rows) {
      if (d >= st.decision_card) {
        throw Error(ErrorCode::kMalformedCondensation, "policy picks a value outside the frame");
      }
    }
  }
}

// Expected total reward under p, chaining the kernels forward from stage 0.
inline double evaluate_policy(const Condensation& c, const CondensedPolicy& p) {
  check_condensation(c);
  check_policy(c, p);
  std::vector<double> mass{1.0};
  double total = 0.0;
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    const auto& st = c.stages[i];
    std::vector<double> next(st.kernel ? st.kernel->cols() : 0, 0.0);
    for (std::size_t x = 0; x < mass.size(); ++x) {
      if (mass[x] == 0.0) continue;
      std::size_t d = i == 0 ? 0 : p.rules[i - 1].rows[x];
      std::size_t r = x * st.decision_card + d;
      total += mass[x] * st.reward[r];
      for (std::size_t y = 0; y < next.size(); ++y) {
        next[y] += mass[x] * st.kernel->table[r * next.size() + y];
      }
    }
    mass = std::move(next);
  }
  return total;
}

// The same choices as decision functions of the source diagram; stage i's
// state variables are exactly the parents of d_i.
inline Policy to_diagram_policy(const Condensation& c, const CondensedPolicy& p) {
  check_policy(c, p);
  Policy out;
  for (std::size_t i = 1; i < c.stages.size(); ++i) {
    out.functions.push_back(
        DecisionFunction{p.rules[i - 1].decision, c.stages[i].state_vars, p.rules[i - 1].rows});
  }
  return out;
}

inline CondensedPolicy from_diagram_policy(const Condensation& c, const Policy& p) {
  CondensedPolicy out;
  for (std::size_t i = 1; i < c.stages.size(); ++i) {
    const auto& st = c.stages[i];
    auto it = std::find_if(p.functions.begin(), p.functions.end(),
                           [&](const DecisionFunction& f) { return f.decision == *st.decision; });
    if (it == p.functions.end() || it->parents != st.state_vars) {
      throw Error(ErrorCode::kPolicyArityMismatch,
                  "no decision function over the frontier of stage " + std::to_string(i));
    }
    out.rules.push_back(StageRule{i, *st.decision, it->table});
  }
  check_policy(c, out);
  return out;
}

inline Json policy_to_json(const std::vector<Node>& nodes, const Policy& p) {
  Json out = Json::array();
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    const auto& f = p.functions[i];
    Json j;
    j["stage"] = i + 1;
    j["decision"] = nodes.at(f.decision).id;
    j["parents"] = detail::ids_of(nodes, f.parents);
    Json rows = Json::array();
    for (auto d : f.table) rows.push_back(nodes.at(f.decision).frame.at(d));
    j["rows"] = std::move(rows);
    out.push_back(std::move(j));
  }
  return out;
}

inline Json policy_to_json(const Condensation& c, const CondensedPolicy& p) {
  return policy_to_json(c.nodes, to_diagram_policy(c, p));
}

}  // namespace sdid
