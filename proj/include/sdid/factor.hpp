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
#include <cstddef>
#include <limits>
#include <set>
#include <vector>

#include "sdid/diagram.hpp"

namespace sdid {

// Nonnegative table over an ordered variable list, row-major with the last
// variable innermost.
struct Factor {
  std::vector<NodeIndex> vars;
  std::vector<std::size_t> cards;
  std::vector<double> table{1.0};

  static Factor unit() { return Factor{}; }

  static Factor from_cpt(const Cpt& cpt, const std::vector<std::size_t>& cards) {
    Factor f;
    f.vars = cpt.parents;
    f.vars.push_back(cpt.child);
    f.cards = cards;
    f.table = cpt.rows;
    return f;
  }

  std::size_t size() const { return table.size(); }

  std::ptrdiff_t position(NodeIndex v) const {
    auto it = std::find(vars.begin(), vars.end(), v);
    return it == vars.end() ? -1 : it - vars.begin();
  }

  bool mentions(NodeIndex v) const { return position(v) >= 0; }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(vars.size(), 1);
    for (std::size_t i = vars.size(); i-- > 1;) s[i - 1] = s[i] * cards[i];
    return s;
  }

  // `assignment` is indexed by NodeIndex and must cover every variable.
  std::size_t offset(const std::vector<std::size_t>& assignment) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      idx = idx * cards[i] + assignment[vars[i]];
    }
    return idx;
  }

  double sum() const {
    double s = 0.0;
    for (double x : table) s += x;
    return s;
  }
};

namespace detail {

// Stride of every variable of `result` inside `f` (0 when absent).
inline std::vector<std::size_t> projected_strides(const Factor& f,
                                                  const Factor& result) {
  auto fs = f.strides();
  std::vector<std::size_t> out(result.vars.size(), 0);
  for (std::size_t i = 0; i < result.vars.size(); ++i) {
    auto p = f.position(result.vars[i]);
    if (p >= 0) out[i] = fs[static_cast<std::size_t>(p)];
  }
  return out;
}

// Walks every configuration of `shape` in row-major order, keeping the flat
// offset into each source factor in sync.
template <typename Visit>
void walk(const Factor& shape, const std::vector<std::vector<std::size_t>>& strides,
          Visit&& visit) {
  const std::size_t n = shape.vars.size();
  std::vector<std::size_t> digit(n, 0);
  std::vector<std::size_t> off(strides.size(), 0);
  std::size_t total = product_of(shape.cards);
  for (std::size_t flat = 0; flat < total; ++flat) {
    visit(flat, off);
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < shape.cards[i]) {
        for (std::size_t s = 0; s < strides.size(); ++s) off[s] += strides[s][i];
        break;
      }
      for (std::size_t s = 0; s < strides.size(); ++s) {
        off[s] -= strides[s][i] * (shape.cards[i] - 1);
      }
      digit[i] = 0;
    }
  }
}

}  // namespace detail

inline Factor multiply(const Factor& f, const Factor& g) {
  Factor out;
  out.vars = f.vars;
  out.cards = f.cards;
  for (std::size_t i = 0; i < g.vars.size(); ++i) {
    auto p = f.position(g.vars[i]);
    if (p >= 0) {
      if (f.cards[static_cast<std::size_t>(p)] != g.cards[i]) {
        throw Error(ErrorCode::kFrameMismatch,
                    "variable " + std::to_string(g.vars[i]) +
                        " has different frame sizes");
      }
    } else {
      out.vars.push_back(g.vars[i]);
      out.cards.push_back(g.cards[i]);
    }
  }
  out.table.assign(product_of(out.cards), 0.0);
  std::vector<std::vector<std::size_t>> strides{
      detail::projected_strides(f, out), detail::projected_strides(g, out)};
  detail::walk(out, strides, [&](std::size_t flat, const std::vector<std::size_t>& off) {
    out.table[flat] = f.table[off[0]] * g.table[off[1]];
  });
  return out;
}

// Sums out every variable listed in `out_vars`.
inline Factor marginalize(const Factor& f, const std::vector<NodeIndex>& out_vars) {
  Factor out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (std::find(out_vars.begin(), out_vars.end(), f.vars[i]) == out_vars.end()) {
      out.vars.push_back(f.vars[i]);
      out.cards.push_back(f.cards[i]);
    }
  }
  out.table.assign(product_of(out.cards), 0.0);
  std::vector<std::vector<std::size_t>> strides{detail::projected_strides(out, f)};
  detail::walk(f, strides, [&](std::size_t flat, const std::vector<std::size_t>& off) {
    out.table[off[0]] += f.table[flat];
  });
  return out;
}

// Same content with variables in `order` (a permutation of f.vars).
inline Factor reorder(const Factor& f, const std::vector<NodeIndex>& order) {
  Factor out;
  out.vars = order;
  for (auto v : order) {
    auto p = f.position(v);
    if (p < 0) throw Error(ErrorCode::kFrameMismatch, "reorder: unknown variable");
    out.cards.push_back(f.cards[static_cast<std::size_t>(p)]);
  }
  out.table.assign(f.size(), 0.0);
  std::vector<std::vector<std::size_t>> strides{detail::projected_strides(f, out)};
  detail::walk(out, strides, [&](std::size_t flat, const std::vector<std::size_t>& off) {
    out.table[flat] = f.table[off[0]];
  });
  return out;
}

// Min-fill elimination order over the factors' interaction graph; ties go to
// the smallest node index.
inline std::vector<NodeIndex> min_fill_order(const std::vector<Factor>& factors,
                                             std::vector<NodeIndex> to_eliminate) {
  std::map<NodeIndex, std::set<NodeIndex>> adj;
  for (const auto& f : factors) {
    for (auto a : f.vars) {
      adj[a];
      for (auto b : f.vars) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  std::sort(to_eliminate.begin(), to_eliminate.end());
  std::vector<NodeIndex> order;
  std::set<NodeIndex> pending(to_eliminate.begin(), to_eliminate.end());
  while (!pending.empty()) {
    NodeIndex best = *pending.begin();
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (NodeIndex v : pending) {
      const auto& nb = adj[v];
      std::size_t fill = 0;
      for (auto a = nb.begin(); a != nb.end(); ++a) {
        for (auto b = std::next(a); b != nb.end(); ++b) {
          if (!adj[*a].count(*b)) ++fill;
        }
      }
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
      }
    }
    const auto nb = adj[best];
    for (auto a : nb) {
      for (auto b : nb) {
        if (a != b) adj[a].insert(b);
      }
      adj[a].erase(best);
    }
    adj.erase(best);
    pending.erase(best);
    order.push_back(best);
  }
  return order;
}

// Multiplies the factors and sums out `order` one variable at a time; the
// result is laid out over `keep` (variables of `keep` absent from every factor
// are dropped from the result).
inline Factor eliminate(std::vector<Factor> factors,
                        const std::vector<NodeIndex>& order,
                        const std::vector<NodeIndex>& keep) {
  for (NodeIndex v : order) {
    Factor product = Factor::unit();
    std::vector<Factor> rest;
    bool touched = false;
    for (auto& f : factors) {
      if (f.mentions(v)) {
        product = multiply(product, f);
        touched = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (touched) rest.push_back(marginalize(product, {v}));
    factors = std::move(rest);
  }
  Factor result = Factor::unit();
  for (const auto& f : factors) result = multiply(result, f);
  std::vector<NodeIndex> layout;
  for (auto v : keep) {
    if (result.mentions(v)) layout.push_back(v);
  }
  if (layout.size() != result.vars.size()) {
    std::vector<NodeIndex> extra;
    for (auto v : result.vars) {
      if (std::find(keep.begin(), keep.end(), v) == keep.end()) extra.push_back(v);
    }
    result = marginalize(result, extra);
  }
  return reorder(result, layout);
}

}  // namespace sdid
