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

/// @file interferometer.hpp
/// Qubit-level simulation of multi-copy singlet-projection measurements:
/// exact graph probabilities, joint V-outcome statistics with shot noise,
/// packing of graphs into interferometric configurations and reconstruction
/// of distances with propagated errors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qoverlap/core.hpp"
#include "qoverlap/graph.hpp"
#include "qoverlap/overlap.hpp"
#include "qoverlap/util.hpp"

namespace qoverlap {

namespace detail {

/// Left-multiplies m by a two-qubit operator acting on qubits p and q.
inline void apply_pair_operator(ComplexMatrix& m, int n_qubits, int p, int q,
                                const Eigen::Matrix4cd& op) {
  const int bp = n_qubits - 1 - p;
  const int bq = n_qubits - 1 - q;
  const Eigen::Index d = m.rows();
  const Eigen::Index maskp = Eigen::Index{1} << bp;
  const Eigen::Index maskq = Eigen::Index{1} << bq;
  for (Eigen::Index base = 0; base < d; ++base) {
    if (base & (maskp | maskq)) continue;
    const std::array<Eigen::Index, 4> rows{base, base | maskq, base | maskp,
                                           base | maskp | maskq};
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::array<cplx, 4> v{};
      for (std::size_t r = 0; r < 4; ++r) v[r] = m(rows[r], c);
      for (std::size_t r = 0; r < 4; ++r) {
        cplx acc = 0.0;
        for (std::size_t s = 0; s < 4; ++s)
          acc += op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * v[s];
        m(rows[r], c) = acc;
      }
    }
  }
}

inline const Eigen::Matrix4cd& singlet4() {
  static const Eigen::Matrix4cd p = singlet().matrix();
  return p;
}

inline const Eigen::Matrix4cd& triplet4() {
  static const Eigen::Matrix4cd p = Eigen::Matrix4cd::Identity() - singlet().matrix();
  return p;
}

}  // namespace detail

/// Tr[(copies) prod_edges P-] from the assembled density matrix.
inline double graph_probability(const MeasurementGraph& g, const DensityMatrix& rho1,
                                const DensityMatrix& rho2) {
  const std::array<DensityMatrix, 2> states{rho1, rho2};
  ComplexMatrix m = assemble(states, g.layout()).matrix();
  const int n = g.layout().mode_count();
  for (const auto& e : g.edges()) detail::apply_pair_operator(m, n, e.u, e.v, detail::singlet4());
  return std::clamp(m.trace().real(), 0.0, 1.0);
}

/// Joint outcome distribution of all edges of g from the assembled state;
/// entry `mask` is the probability that exactly the edges in mask are singlets.
inline std::vector<double> joint_distribution(const MeasurementGraph& g,
                                              const DensityMatrix& rho1,
                                              const DensityMatrix& rho2) {
  const std::array<DensityMatrix, 2> states{rho1, rho2};
  const ComplexMatrix base = assemble(states, g.layout()).matrix();
  const int n = g.layout().mode_count();
  const std::size_t e = g.edges().size();
  std::vector<double> out(std::size_t{1} << e);
  for (std::size_t mask = 0; mask < out.size(); ++mask) {
    ComplexMatrix m = base;
    for (std::size_t i = 0; i < e; ++i) {
      const auto& ed = g.edges()[i];
      detail::apply_pair_operator(m, n, ed.u, ed.v,
                                  (mask >> i) & 1U ? detail::singlet4() : detail::triplet4());
    }
    out[mask] = std::max(0.0, m.trace().real());
  }
  return out;
}

/// Pauli contraction: sum over spatial indices on the given edges of the
/// product of R entries per copy; modes not on an edge take index 0.
inline double pauli_contraction(const std::vector<int>& colors, const std::vector<Edge>& edges,
                                const CorrelationMatrix& r1, const CorrelationMatrix& r2) {
  std::array<int, 2 * kMaxCopies> idx{};
  const std::size_t ne = edges.size();
  double total = 0.0;
  std::array<int, 2 * kMaxCopies> assign{};
  for (std::size_t i = 0; i < ne; ++i) assign[i] = 1;
  while (true) {
    idx.fill(0);
    for (std::size_t i = 0; i < ne; ++i) {
      idx[static_cast<std::size_t>(edges[i].u)] = assign[i];
      idx[static_cast<std::size_t>(edges[i].v)] = assign[i];
    }
    double p = 1.0;
    for (std::size_t c = 0; c < colors.size() && p != 0.0; ++c) {
      const auto& r = colors[c] == 1 ? r1 : r2;
      p *= r(idx[2 * c], idx[2 * c + 1]);
    }
    total += p;
    std::size_t k = 0;
    while (k < ne && assign[k] == 3) assign[k++] = 1;
    if (k == ne) break;
    ++assign[k];
  }
  return total;
}

/// Probability that every edge in `edges` (a subset of the graph's edges) gives
/// a singlet, via inclusion-exclusion over Pauli contractions.
inline double subset_probability(const std::vector<int>& colors, const std::vector<Edge>& edges,
                                 const CorrelationMatrix& r1, const CorrelationMatrix& r2) {
  const std::size_t ne = edges.size();
  double total = 0.0;
  std::vector<Edge> sub;
  for (std::size_t s = 0; s < (std::size_t{1} << ne); ++s) {
    sub.clear();
    for (std::size_t i = 0; i < ne; ++i)
      if ((s >> i) & 1U) sub.push_back(edges[i]);
    const double sign = (sub.size() % 2 == 0) ? 1.0 : -1.0;
    total += sign * pauli_contraction(colors, sub, r1, r2);
  }
  return total / std::pow(4.0, static_cast<double>(ne));
}

/// Graph probability from correlation matrices alone.
inline double graph_probability(const GraphKey& g, const CorrelationMatrix& r1,
                                const CorrelationMatrix& r2) {
  return subset_probability(g.colors, g.edges, r1, r2);
}

/// Product of the factor probabilities.
inline double monomial_value(const MonomialKey& m, const CorrelationMatrix& r1,
                             const CorrelationMatrix& r2) {
  double v = 1.0;
  for (const auto& g : m) v *= graph_probability(g, r1, r2);
  return v;
}

/// Joint outcome distribution of a graph from correlation matrices, by
/// Moebius inversion of the all-singlet subset probabilities.
inline std::vector<double> joint_distribution(const GraphKey& g, const CorrelationMatrix& r1,
                                              const CorrelationMatrix& r2) {
  const std::size_t ne = g.edges.size();
  const std::size_t n = std::size_t{1} << ne;
  std::vector<double> q(n);
  std::vector<Edge> sub;
  for (std::size_t s = 0; s < n; ++s) {
    sub.clear();
    for (std::size_t i = 0; i < ne; ++i)
      if ((s >> i) & 1U) sub.push_back(g.edges[i]);
    q[s] = subset_probability(g.colors, sub, r1, r2);
  }
  // q[s] = sum_{t superset of s} p[t]; invert.
  std::vector<double> p = q;
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t s = 0; s < n; ++s)
      if (!((s >> i) & 1U)) p[s] -= p[s | (std::size_t{1} << i)];
  double total = 0.0;
  for (auto& x : p) {
    x = std::max(0.0, x);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

struct GraphOutcome {
  double probability = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t successes = 0;

  double estimate() const { return shots ? double(successes) / double(shots) : 0.0; }
  double std_err() const {
    if (!shots) return 0.0;
    const double p = estimate();
    return std::sqrt(p * (1.0 - p) / double(shots));
  }
};

namespace detail {

/// Multinomial draw by sequential conditional binomials.
inline std::vector<std::uint64_t> multinomial(std::uint64_t shots, const std::vector<double>& p,
                                              std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts(p.size(), 0);
  double remaining_p = 1.0;
  std::uint64_t remaining = shots;
  for (std::size_t i = 0; i + 1 < p.size() && remaining > 0; ++i) {
    const double q = remaining_p > 0.0 ? std::clamp(p[i] / remaining_p, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> b(remaining, q);
    counts[i] = q >= 1.0 ? remaining : (q <= 0.0 ? 0 : b(rng));
    remaining -= counts[i];
    remaining_p -= p[i];
  }
  if (!p.empty()) counts.back() += remaining;
  return counts;
}

}  // namespace detail

/// Binomial counting of the all-singlet event of g.
inline GraphOutcome sample_graph(const MeasurementGraph& g, const DensityMatrix& rho1,
                                 const DensityMatrix& rho2, std::uint64_t shots,
                                 std::uint64_t seed) {
  if (shots < 1) throw ValidationError("sample_graph: shots must be at least 1");
  GraphOutcome out;
  out.probability = graph_probability(g, rho1, rho2);
  out.shots = shots;
  std::mt19937_64 rng(seed);
  const double p = out.probability;
  if (p <= 0.0) out.successes = 0;
  else if (p >= 1.0) out.successes = shots;
  else out.successes = std::binomial_distribution<std::uint64_t>(shots, p)(rng);
  return out;
}

/// Joint singlet/triplet counts of several disjoint pair measurements.
/// counts[mask] is the number of shots in which exactly the pairs in mask
/// returned the singlet outcome.
struct JointCounts {
  std::vector<Edge> pairs;
  std::vector<std::uint64_t> counts;

  std::uint64_t shots() const {
    std::uint64_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }

  /// Shots in which every pair in `mask` was a singlet (others unrestricted).
  std::uint64_t all_singlet(std::size_t mask) const {
    std::uint64_t s = 0;
    for (std::size_t m = 0; m < counts.size(); ++m)
      if ((m & mask) == mask) s += counts[m];
    return s;
  }
};

inline JointCounts v_observable_sample(const ModeLayout& layout, std::vector<Edge> pairs,
                                       const DensityMatrix& rho1, const DensityMatrix& rho2,
                                       std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw ValidationError("v_observable_sample: shots must be at least 1");
  const MeasurementGraph g(layout, pairs);
  JointCounts jc;
  jc.pairs = std::move(pairs);
  const auto p = joint_distribution(g, rho1, rho2);
  std::vector<double> pr = p;
  double total = 0.0;
  for (double x : pr) total += x;
  for (auto& x : pr) x /= total;
  std::mt19937_64 rng(seed);
  jc.counts = detail::multinomial(shots, pr, rng);
  return jc;
}

/// One interferometric configuration: disjoint maximal graphs measured together.
struct Configuration {
  std::vector<GraphKey> hosts;
  int photon_pairs = 0;
};

/// Where a required graph's statistic is read from.
struct Coverage {
  std::size_t configuration = 0;
  std::size_t host = 0;
  std::size_t edge_mask = 0;  ///< host edges that must all be singlets
};

struct ConfigurationPlan {
  std::vector<Configuration> configurations;
  std::map<GraphKey, Coverage> coverage;
  int capacity = 6;

  int photon_pairs() const {
    int s = 0;
    for (const auto& c : configurations) s += c.photon_pairs;
    return s;
  }
  std::size_t maximal_count() const {
    std::size_t s = 0;
    for (const auto& c : configurations) s += c.hosts.size();
    return s;
  }
  bool is_free(const GraphKey& g) const {
    const auto it = coverage.find(g);
    if (it == coverage.end()) return false;
    const auto& host = configurations[it->second.configuration].hosts[it->second.host];
    return !(host == g);
  }
};

namespace detail {

/// Mask of host edges hit by an embedding of h into g, if one exists.
inline std::optional<std::size_t> embedding_mask(const GraphKey& h, const GraphKey& g) {
  if (h.copy_count() > g.copy_count() || h.edge_count() > g.edge_count()) return std::nullopt;
  std::vector<int> map(static_cast<std::size_t>(h.copy_count()), -1);
  std::vector<bool> taken(static_cast<std::size_t>(g.copy_count()), false);
  std::optional<std::size_t> result;
  const auto rec = [&](auto&& self, int c) -> bool {
    if (c == h.copy_count()) {
      std::size_t mask = 0;
      for (const auto& e : h.edges) {
        const Edge m(2 * map[static_cast<std::size_t>(copy_of_mode(e.u))] + e.u % 2,
                     2 * map[static_cast<std::size_t>(copy_of_mode(e.v))] + e.v % 2);
        const auto it = std::find(g.edges.begin(), g.edges.end(), m);
        if (it == g.edges.end()) return false;
        mask |= std::size_t{1} << static_cast<std::size_t>(it - g.edges.begin());
      }
      result = mask;
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
  rec(rec, 0);
  return result;
}

}  // namespace detail

/// Graphs of `required` that embed into no other required graph.
inline std::vector<GraphKey> maximal_graphs(const std::set<GraphKey>& required) {
  std::vector<GraphKey> out;
  for (const auto& g : required) {
    bool dominated = false;
    for (const auto& h : required)
      if (!(h == g) && embeds(g, h)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(g);
  }
  return out;
}

/// Selects maximal graphs and packs them first-fit-decreasing (by copy count)
/// into configurations of at most `capacity` copies. Every other required
/// graph is read off the joint outcomes of a host it embeds into.
inline ConfigurationPlan plan_configurations(const std::set<GraphKey>& required,
                                             int capacity = 6) {
  if (required.empty()) throw ValidationError("plan_configurations: empty graph set");
  int largest = 0;
  for (const auto& g : required) largest = std::max(largest, g.copy_count());
  if (capacity < largest) {
    throw ValidationError("plan_configurations: capacity " + std::to_string(capacity) +
                          " below the largest graph size " + std::to_string(largest));
  }
  auto hosts = maximal_graphs(required);
  std::stable_sort(hosts.begin(), hosts.end(), [](const GraphKey& a, const GraphKey& b) {
    if (a.copy_count() != b.copy_count()) return a.copy_count() > b.copy_count();
    return a < b;
  });
  ConfigurationPlan plan;
  plan.capacity = capacity;
  std::map<GraphKey, std::pair<std::size_t, std::size_t>> where;
  for (const auto& h : hosts) {
    std::size_t slot = plan.configurations.size();
    for (std::size_t c = 0; c < plan.configurations.size(); ++c)
      if (plan.configurations[c].photon_pairs + h.copy_count() <= capacity) {
        slot = c;
        break;
      }
    if (slot == plan.configurations.size()) plan.configurations.emplace_back();
    auto& conf = plan.configurations[slot];
    where[h] = {slot, conf.hosts.size()};
    conf.hosts.push_back(h);
    conf.photon_pairs += h.copy_count();
  }
  for (const auto& g : required) {
    bool placed = false;
    for (const auto& h : hosts) {
      const auto mask = detail::embedding_mask(g, h);
      if (!mask) continue;
      const auto [c, i] = where.at(h);
      plan.coverage[g] = Coverage{c, i, *mask};
      placed = true;
      break;
    }
    if (!placed) throw NumericalError("plan_configurations: graph " + to_string(g) + " unplaced");
  }
  return plan;
}

/// Polynomials in graph probabilities that define the measured quantities.
struct Workflow {
  std::optional<GraphPolynomial> pi2, pi3, pi4, o11, o22, o12, o2;

  std::set<GraphKey> required_graphs() const {
    std::set<GraphKey> s;
    for (const auto* p : {&pi2, &pi3, &pi4, &o11, &o22, &o12, &o2})
      if (*p) {
        const auto g = (*p)->graphs();
        s.insert(g.begin(), g.end());
      }
    return s;
  }
};

struct MeasureEstimate {
  std::string name;
  double estimate = 0.0;
  double std_err = 0.0;
};

struct GraphEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
};

struct EstimationReport {
  std::vector<MeasureEstimate> measures;
  std::map<GraphKey, GraphEstimate> graphs;
  std::uint64_t shots_per_configuration = 0;
  std::size_t configurations = 0;
  int photon_pairs = 0;              ///< copies per round of all configurations
  std::uint64_t photon_pairs_used = 0;  ///< summed over every shot
  std::uint64_t seed = 0;

  const MeasureEstimate* find(const std::string& name) const {
    for (const auto& m : measures)
      if (m.name == name) return &m;
    return nullptr;
  }
};

struct EstimationOptions {
  unsigned threads = 1;
  std::size_t bootstrap = 200;
};

namespace detail {

/// Value and gradient (w.r.t. graph index) of a polynomial at p.
inline double poly_eval(const GraphPolynomial& poly, const std::map<GraphKey, std::size_t>& index,
                        const std::vector<double>& p, Eigen::VectorXd* grad) {
  double value = 0.0;
  if (grad) grad->setZero(static_cast<Eigen::Index>(p.size()));
  for (const auto& [mon, c] : poly.terms) {
    double prod = c;
    for (const auto& g : mon) prod *= p[index.at(g)];
    value += prod;
    if (!grad) continue;
    for (std::size_t k = 0; k < mon.size(); ++k) {
      double d = c;
      for (std::size_t j = 0; j < mon.size(); ++j)
        if (j != k) d *= p[index.at(mon[j])];
      (*grad)(static_cast<Eigen::Index>(index.at(mon[k]))) += d;
    }
  }
  return value;
}

/// sqrt of a noisy radicand with a one-sigma step through the root as error.
inline std::pair<double, double> noisy_sqrt(double r, double sigma_r) {
  const double rc = std::max(r, 0.0);
  const double up = std::sqrt(rc + sigma_r) - std::sqrt(rc);
  const double down = std::sqrt(rc) - std::sqrt(std::max(rc - sigma_r, 0.0));
  return {std::sqrt(rc), std::max(up, down)};
}

inline double quad(const Eigen::VectorXd& g, const Eigen::MatrixXd& cov) {
  return std::max(0.0, g.dot(cov * g));
}

}  // namespace detail

/// Samples every configuration of the plan and reconstructs the measures
/// whose polynomials are present in the workflow.
inline EstimationReport estimate_distances(const ConfigurationPlan& plan, const Workflow& wf,
                                           const DensityMatrix& rho1, const DensityMatrix& rho2,
                                           std::uint64_t shots, std::uint64_t seed,
                                           const EstimationOptions& opt = {}) {
  if (shots < 1) throw ValidationError("estimate_distances: shots must be at least 1");
  const auto needed = wf.required_graphs();
  for (const auto& g : needed) {
    if (!plan.coverage.contains(g)) {
      throw ValidationError("estimate_distances: plan does not cover required graph " +
                            to_string(g));
    }
  }
  const auto r1 = to_correlation(rho1);
  const auto r2 = to_correlation(rho2);

  // Joint sampling per configuration.
  const std::size_t nc = plan.configurations.size();
  std::vector<std::vector<std::uint64_t>> counts(nc);
  std::vector<std::vector<std::size_t>> offsets(nc);
  parallel_for(nc, opt.threads, [&](std::size_t c) {
    const auto& conf = plan.configurations[c];
    std::vector<double> dist{1.0};
    std::size_t bits = 0;
    for (const auto& h : conf.hosts) {
      offsets[c].push_back(bits);
      const auto jd = joint_distribution(h, r1, r2);
      std::vector<double> next(dist.size() * jd.size());
      for (std::size_t a = 0; a < jd.size(); ++a)
        for (std::size_t b = 0; b < dist.size(); ++b) next[(a << bits) | b] = jd[a] * dist[b];
      dist = std::move(next);
      bits += static_cast<std::size_t>(h.edge_count());
    }
    std::mt19937_64 rng(derive_seed(seed, c));
    counts[c] = detail::multinomial(shots, dist, rng);
  });

  std::vector<GraphKey> graphs(needed.begin(), needed.end());
  std::map<GraphKey, std::size_t> index;
  for (std::size_t i = 0; i < graphs.size(); ++i) index[graphs[i]] = i;
  std::vector<std::size_t> global_mask(graphs.size());
  std::vector<double> p(graphs.size());
  const auto count_mask = [&](std::size_t c, std::size_t mask) {
    std::uint64_t s = 0;
    for (std::size_t m = 0; m < counts[c].size(); ++m)
      if ((m & mask) == mask) s += counts[c][m];
    return s;
  };
  const double n = double(shots);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& cov = plan.coverage.at(graphs[i]);
    global_mask[i] = cov.edge_mask << offsets[cov.configuration][cov.host];
    p[i] = double(count_mask(cov.configuration, global_mask[i])) / n;
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(graphs.size()),
                                              static_cast<Eigen::Index>(graphs.size()));
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = i; j < graphs.size(); ++j) {
      const auto ci = plan.coverage.at(graphs[i]).configuration;
      const auto cj = plan.coverage.at(graphs[j]).configuration;
      if (ci != cj) continue;
      const double pij = double(count_mask(ci, global_mask[i] | global_mask[j])) / n;
      const double v = (pij - p[i] * p[j]) / n;
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }

  EstimationReport rep;
  rep.seed = seed;
  rep.shots_per_configuration = shots;
  rep.configurations = nc;
  rep.photon_pairs = plan.photon_pairs();
  rep.photon_pairs_used = shots * static_cast<std::uint64_t>(rep.photon_pairs);
  for (std::size_t i = 0; i < graphs.size(); ++i)
    rep.graphs[graphs[i]] = GraphEstimate{
        p[i], std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(i))))};

  const Eigen::Index dim = static_cast<Eigen::Index>(graphs.size());
  Eigen::VectorXd g_pi2(dim), g_pi3(dim), g_pi4(dim), g11(dim), g22(dim), g12(dim), g2(dim);
  double pi2 = 0, pi3 = 0, pi4 = 0, o11 = 0, o22 = 0, o12 = 0, o2 = 0;
  if (wf.pi2) pi2 = detail::poly_eval(*wf.pi2, index, p, &g_pi2);
  if (wf.pi3) pi3 = detail::poly_eval(*wf.pi3, index, p, &g_pi3);
  if (wf.pi4) pi4 = detail::poly_eval(*wf.pi4, index, p, &g_pi4);
  if (wf.o11) o11 = detail::poly_eval(*wf.o11, index, p, &g11);
  if (wf.o22) o22 = detail::poly_eval(*wf.o22, index, p, &g22);
  if (wf.o12) o12 = detail::poly_eval(*wf.o12, index, p, &g12);
  if (wf.o2) o2 = detail::poly_eval(*wf.o2, index, p, &g2);

  if (wf.pi2) {
    rep.measures.push_back({"Pi2", pi2, std::sqrt(detail::quad(g_pi2, cov))});
    const auto [h, sh] = detail::noisy_sqrt(pi2, std::sqrt(detail::quad(g_pi2, cov)));
    rep.measures.push_back({"H", h, sh});
  }
  if (wf.o11 && wf.o22 && wf.o12) {
    const double a = 1.0 - o11, b = 1.0 - o22;
    const double prod = a * b;
    const Eigen::VectorXd gprod = -b * g11 - a * g22;
    const auto [root, sroot] = detail::noisy_sqrt(prod, std::sqrt(detail::quad(gprod, cov)));
    // Combine the root's spread with the independent part from O12.
    const double var_root = sroot * sroot;
    const double scale = root > 0.0 ? 0.5 / root : 0.0;
    const double cross = scale > 0.0 ? g12.dot(cov * gprod) * scale : 0.0;
    const double var = std::max(0.0, detail::quad(g12, cov) + var_root + 2.0 * cross);
    rep.measures.push_back({"G", o12 + root, std::sqrt(var)});
  }
  if (wf.o12 && wf.o2) {
    const double rad = 2.0 * (o12 * o12 - o2);
    const Eigen::VectorXd grad = 4.0 * o12 * g12 - 2.0 * g2;
    const auto [root, sroot] = detail::noisy_sqrt(rad, std::sqrt(detail::quad(grad, cov)));
    const double scale = root > 0.0 ? 0.5 / root : 0.0;
    const double cross = scale > 0.0 ? g12.dot(cov * grad) * scale : 0.0;
    const double var = std::max(0.0, detail::quad(g12, cov) + sroot * sroot + 2.0 * cross);
    rep.measures.push_back({"E", o12 + root, std::sqrt(var)});
  }
  if (wf.pi2 && wf.pi3 && wf.pi4) {
    const MomentSet m{0.0, pi2, pi3, pi4};
    const double t = trace_distance_via_moments(m, RootPolicy::lenient).trace_distance;
    Eigen::MatrixXd jac(3, dim);
    jac.row(0) = g_pi2.transpose();
    jac.row(1) = g_pi3.transpose();
    jac.row(2) = g_pi4.transpose();
    Eigen::Matrix3d mc = jac * cov * jac.transpose();
    mc = 0.5 * (mc + mc.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(mc);
    const Eigen::Matrix3d root =
        es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    std::mt19937_64 rng(derive_seed(seed, 0xB0075742ULL));
    std::normal_distribution<double> n01(0.0, 1.0);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < opt.bootstrap; ++b) {
      Eigen::Vector3d z;
      for (int k = 0; k < 3; ++k) z(k) = n01(rng);
      const Eigen::Vector3d d = root * z;
      const MomentSet mb{0.0, pi2 + d(0), pi3 + d(1), pi4 + d(2)};
      const double tb = trace_distance_via_moments(mb, RootPolicy::lenient).trace_distance;
      s1 += tb;
      s2 += tb * tb;
    }
    const double nb = double(std::max<std::size_t>(opt.bootstrap, 2));
    const double var = std::max(0.0, (s2 - s1 * s1 / nb) / (nb - 1.0));
    rep.measures.push_back({"T", t, std::sqrt(var)});
  }
  return rep;
}

}  // namespace qoverlap
