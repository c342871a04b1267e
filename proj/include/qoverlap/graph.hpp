// Copyright 2026 The qoverlap Authors
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

/// @file graph.hpp
/// Measurement graphs: singlet projections (edges) placed on the modes of a
/// multi-copy register, their canonical forms under exchange of identical
/// copies, and products of graph probabilities (monomials).
///
/// Text form of a graph: copy colours, a bar, then edges as mode pairs,
/// e.g. "1122|0-2,1-3". A monomial joins graphs with " * "; the empty
/// monomial is "1".

#include <algorithm>
#include <compare>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qoverlap/core.hpp"

namespace qoverlap {

/// Unordered mode pair, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

  auto operator<=>(const Edge&) const = default;
};

inline int copy_of_mode(int mode) { return mode / 2; }

class MeasurementGraph {
 public:
  MeasurementGraph() = default;

  MeasurementGraph(ModeLayout layout, std::vector<Edge> edges, std::string label = {})
      : layout_(std::move(layout)), edges_(std::move(edges)), label_(std::move(label)) {
    const int modes = layout_.mode_count();
    std::vector<bool> used(static_cast<std::size_t>(modes), false);
    for (const auto& e : edges_) {
      if (e.u < 0 || e.v >= modes || e.u == e.v) {
        throw ValidationError("MeasurementGraph: edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") outside the " + std::to_string(modes) +
                              " modes of the layout");
      }
      for (int m : {e.u, e.v}) {
        if (used[static_cast<std::size_t>(m)]) {
          throw ValidationError("MeasurementGraph: mode " + std::to_string(m) +
                                " is used by more than one edge");
        }
        used[static_cast<std::size_t>(m)] = true;
      }
    }
    std::sort(edges_.begin(), edges_.end());
  }

  const ModeLayout& layout() const noexcept { return layout_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& label() const noexcept { return label_; }
  int copy_count() const noexcept { return layout_.copy_count(); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  std::vector<StateId> colors() const {
    std::vector<StateId> c;
    for (const auto& s : layout_.copies()) c.push_back(s.state);
    return c;
  }

 private:
  ModeLayout layout_;
  std::vector<Edge> edges_;
  std::string label_;
};

/// Canonical representative of a graph under permutations of same-coloured
/// copies. Copies are ordered colour 1 first; edges are the lexicographically
/// smallest sorted list over all such permutations.
struct GraphKey {
  std::vector<int> colors;
  std::vector<Edge> edges;

  int copy_count() const { return static_cast<int>(colors.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int count(int color) const {
    return static_cast<int>(std::count(colors.begin(), colors.end(), color));
  }

  auto operator<=>(const GraphKey&) const = default;
  bool operator==(const GraphKey&) const = default;
};

/// Multiset of connected graph classes, sorted.
using MonomialKey = std::vector<GraphKey>;

namespace detail {

inline std::vector<Edge> relabel(const std::vector<Edge>& edges, const std::vector<int>& newpos) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    const int u = 2 * newpos[static_cast<std::size_t>(copy_of_mode(e.u))] + e.u % 2;
    const int v = 2 * newpos[static_cast<std::size_t>(copy_of_mode(e.v))] + e.v % 2;
    out.emplace_back(u, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Canonical key of a graph with copy colours `colors` (values 1 or 2).
inline GraphKey canonical_key(const std::vector<int>& colors, const std::vector<Edge>& edges) {
  std::vector<int> idx1, idx2;
  for (std::size_t c = 0; c < colors.size(); ++c) {
    if (colors[c] == 1) idx1.push_back(static_cast<int>(c));
    else if (colors[c] == 2) idx2.push_back(static_cast<int>(c));
    else throw ValidationError("canonical_key: colours must be 1 or 2");
  }
  GraphKey best;
  best.colors.assign(idx1.size(), 1);
  best.colors.insert(best.colors.end(), idx2.size(), 2);
  bool have = false;
  std::vector<int> p1 = idx1, p2 = idx2;
  std::vector<int> newpos(colors.size());
  do {
    do {
      int pos = 0;
      for (int c : p1) newpos[static_cast<std::size_t>(c)] = pos++;
      for (int c : p2) newpos[static_cast<std::size_t>(c)] = pos++;
      auto e = detail::relabel(edges, newpos);
      if (!have || e < best.edges) {
        best.edges = std::move(e);
        have = true;
      }
    } while (std::next_permutation(p2.begin(), p2.end()));
  } while (std::next_permutation(p1.begin(), p1.end()));
  return best;
}

inline std::vector<int> color_values(const ModeLayout& layout) {
  std::vector<int> c;
  for (const auto& s : layout.copies()) c.push_back(as_int(s.state));
  return c;
}

/// Splits a graph into connected components over copies; copies that no
/// edge touches contribute Tr(rho) = 1 and are dropped.
inline MonomialKey components(const std::vector<int>& colors, const std::vector<Edge>& edges) {
  const std::size_t n = colors.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> touched(n, false);
  for (const auto& e : edges) {
    const auto a = static_cast<std::size_t>(copy_of_mode(e.u));
    const auto b = static_cast<std::size_t>(copy_of_mode(e.v));
    touched[a] = touched[b] = true;
    parent[find(a)] = find(b);
  }
  MonomialKey out;
  std::vector<bool> done(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    if (!touched[c] || done[find(c)]) continue;
    const std::size_t root = find(c);
    done[root] = true;
    std::vector<int> members;
    for (std::size_t d = 0; d < n; ++d)
      if (touched[d] && find(d) == root) members.push_back(static_cast<int>(d));
    std::vector<int> local(n, -1);
    std::vector<int> sub_colors;
    for (std::size_t i = 0; i < members.size(); ++i) {
      local[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
      sub_colors.push_back(colors[static_cast<std::size_t>(members[i])]);
    }
    std::vector<Edge> sub_edges;
    for (const auto& e : edges) {
      const int lu = local[static_cast<std::size_t>(copy_of_mode(e.u))];
      if (lu < 0) continue;
      const int lv = local[static_cast<std::size_t>(copy_of_mode(e.v))];
      sub_edges.emplace_back(2 * lu + e.u % 2, 2 * lv + e.v % 2);
    }
    out.push_back(canonical_key(sub_colors, sub_edges));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline MonomialKey components(const MeasurementGraph& g) {
  return components(color_values(g.layout()), g.edges());
}

inline bool is_connected(const GraphKey& k) {
  const auto c = components(k.colors, k.edges);
  return c.size() == 1 && c.front().copy_count() == k.copy_count();
}

inline MeasurementGraph to_graph(const GraphKey& k, std::string label = {}) {
  std::vector<StateId> states;
  for (int c : k.colors) states.push_back(static_cast<StateId>(c));
  return MeasurementGraph(ModeLayout::from_states(states), k.edges, std::move(label));
}

/// Every matching (set of disjoint pairs) on modes 0..n_modes-1, empty included.
inline std::vector<std::vector<Edge>> enumerate_matchings(int n_modes) {
  std::vector<std::vector<Edge>> out;
  std::vector<Edge> cur;
  std::vector<bool> used(static_cast<std::size_t>(n_modes), false);
  const auto rec = [&](auto&& self, int first) -> void {
    while (first < n_modes && used[static_cast<std::size_t>(first)]) ++first;
    if (first >= n_modes) {
      out.push_back(cur);
      return;
    }
    used[static_cast<std::size_t>(first)] = true;
    self(self, first + 1);
    for (int o = first + 1; o < n_modes; ++o) {
      if (used[static_cast<std::size_t>(o)]) continue;
      used[static_cast<std::size_t>(o)] = true;
      cur.emplace_back(first, o);
      self(self, first + 1);
      cur.pop_back();
      used[static_cast<std::size_t>(o)] = false;
    }
    used[static_cast<std::size_t>(first)] = false;
  };
  rec(rec, 0);
  return out;
}

/// sum_k C(n, 2k) (2k-1)!!
inline long long matching_count_formula(int n_modes) {
  const auto binom = [](int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  long long total = 0;
  for (int k = 0; 2 * k <= n_modes; ++k) {
    long long dfact = 1;
    for (int j = 2 * k - 1; j > 1; j -= 2) dfact *= j;
    total += binom(n_modes, 2 * k) * dfact;
  }
  return total;
}

/// True if h maps into g by an injective colour-preserving copy map that
/// sends every edge of h onto an edge of g.
inline bool embeds(const GraphKey& h, const GraphKey& g) {
  if (h.copy_count() > g.copy_count() || h.edge_count() > g.edge_count()) return false;
  if (h.count(1) > g.count(1) || h.count(2) > g.count(2)) return false;
  const std::set<Edge> target(g.edges.begin(), g.edges.end());
  std::vector<int> map(static_cast<std::size_t>(h.copy_count()), -1);
  std::vector<bool> taken(static_cast<std::size_t>(g.copy_count()), false);
  const auto rec = [&](auto&& self, int c) -> bool {
    if (c == h.copy_count()) {
      for (const auto& e : h.edges) {
        const Edge m(2 * map[static_cast<std::size_t>(copy_of_mode(e.u))] + e.u % 2,
                     2 * map[static_cast<std::size_t>(copy_of_mode(e.v))] + e.v % 2);
        if (!target.contains(m)) return false;
      }
      return true;
    }
    for (int d = 0; d < g.copy_count(); ++d) {
      if (taken[static_cast<std::size_t>(d)] ||
          g.colors[static_cast<std::size_t>(d)] != h.colors[static_cast<std::size_t>(c)])
        continue;
      taken[static_cast<std::size_t>(d)] = true;
      map[static_cast<std::size_t>(c)] = d;
      if (self(self, c + 1)) return true;
      taken[static_cast<std::size_t>(d)] = false;
    }
    return false;
  };
  return rec(rec, 0);
}

/// Ordering used wherever graphs are processed "simplest first".
inline bool simpler(const GraphKey& a, const GraphKey& b) {
  if (a.copy_count() != b.copy_count()) return a.copy_count() < b.copy_count();
  if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
  return a < b;
}

inline std::string to_string(const GraphKey& k) {
  std::ostringstream os;
  for (int c : k.colors) os << c;
  os << '|';
  for (std::size_t i = 0; i < k.edges.size(); ++i) {
    if (i) os << ',';
    os << k.edges[i].u << '-' << k.edges[i].v;
  }
  return os.str();
}

inline std::string to_string(const MonomialKey& m) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += " * ";
    s += to_string(m[i]);
  }
  return s;
}

inline GraphKey parse_graph_key(const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos || bar == 0) {
    throw ValidationError("parse_graph_key: expected '<colours>|<edges>' in \"" + text + "\"");
  }
  std::vector<int> colors;
  for (char c : text.substr(0, bar)) {
    if (c != '1' && c != '2') throw ValidationError("parse_graph_key: bad colour in " + text);
    colors.push_back(c - '0');
  }
  if (colors.size() > static_cast<std::size_t>(kMaxCopies)) {
    throw ValidationError("parse_graph_key: too many copies in " + text);
  }
  std::vector<Edge> edges;
  std::istringstream is(text.substr(bar + 1));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    int u = 0, v = 0;
    char dash = 0;
    std::istringstream es(tok);
    if (!(es >> u >> dash >> v) || dash != '-') {
      throw ValidationError("parse_graph_key: bad edge \"" + tok + "\"");
    }
    edges.emplace_back(u, v);
  }
  // Validates the matching before canonicalising.
  std::vector<StateId> states;
  for (int c : colors) states.push_back(static_cast<StateId>(c));
  const MeasurementGraph g(ModeLayout::from_states(states), edges);
  return canonical_key(colors, g.edges());
}

inline MonomialKey parse_monomial_key(const std::string& text) {
  if (text == "1") return {};
  MonomialKey m;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(" * ", pos);
    const std::string part = text.substr(pos, next == std::string::npos ? std::string::npos
                                                                        : next - pos);
    m.push_back(parse_graph_key(part));
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  std::sort(m.begin(), m.end());
  return m;
}

/// Copies of colour 1 and 2 used by a monomial (each factor on its own copies).
inline std::pair<int, int> color_usage(const MonomialKey& m) {
  int a = 0, b = 0;
  for (const auto& g : m) {
    a += g.count(1);
    b += g.count(2);
  }
  return {a, b};
}

/// Linear combination of monomials in graph probabilities.
struct GraphPolynomial {
  std::vector<std::pair<MonomialKey, double>> terms;

  std::set<GraphKey> graphs() const {
    std::set<GraphKey> s;
    for (const auto& [m, c] : terms) s.insert(m.begin(), m.end());
    return s;
  }
};

}  // namespace qoverlap
