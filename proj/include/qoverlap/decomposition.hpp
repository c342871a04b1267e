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

/// @file decomposition.hpp
/// Numerical rederivation of trace functionals of (rho1, rho2) as linear
/// combinations of monomials in measurement-graph probabilities.
///
/// Coefficient table format (text, one monomial per line):
///
///     # target <name>
///     # residual <max held-out residual>
///     <monomial><TAB><p/q>
///
/// Lines starting with '#' are comments. Monomials use the text form of
/// graph.hpp. Coefficients that did not snap to a rational are written as
/// plain decimals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qoverlap/core.hpp"
#include "qoverlap/graph.hpp"
#include "qoverlap/interferometer.hpp"
#include "qoverlap/oracle.hpp"
#include "qoverlap/overlap.hpp"
#include "qoverlap/util.hpp"

namespace qoverlap {

enum class Target { pi2, pi3, pi4, tr11, tr22, tr12, tr1111, tr1112, tr1122, tr1212, tr1222,
                    tr2222, constant };

inline const std::vector<std::pair<Target, std::string>>& target_names() {
  static const std::vector<std::pair<Target, std::string>> names{
      {Target::pi2, "pi2"},       {Target::pi3, "pi3"},       {Target::pi4, "pi4"},
      {Target::tr11, "o11"},      {Target::tr22, "o22"},      {Target::tr12, "o12"},
      {Target::tr1111, "o1111"},  {Target::tr1112, "o1112"},  {Target::tr1122, "o1122"},
      {Target::tr1212, "o2"},     {Target::tr1222, "o1222"},  {Target::tr2222, "o2222"},
      {Target::constant, "one"}};
  return names;
}

inline std::string to_string(Target t) {
  for (const auto& [k, v] : target_names())
    if (k == t) return v;
  return "?";
}

inline Target parse_target(const std::string& s) {
  for (const auto& [k, v] : target_names())
    if (v == s) return k;
  throw ValidationError("unknown target \"" + s + "\"");
}

/// Exact value of the functional, from matrix products.
inline double target_value(Target t, const DensityMatrix& a, const DensityMatrix& b) {
  switch (t) {
    case Target::pi2: return moments_direct(a, b).pi2;
    case Target::pi3: return moments_direct(a, b).pi3;
    case Target::pi4: return moments_direct(a, b).pi4;
    case Target::tr11: return matrix_word_trace("11", a, b);
    case Target::tr22: return matrix_word_trace("22", a, b);
    case Target::tr12: return matrix_word_trace("12", a, b);
    case Target::tr1111: return matrix_word_trace("1111", a, b);
    case Target::tr1112: return matrix_word_trace("1112", a, b);
    case Target::tr1122: return matrix_word_trace("1122", a, b);
    case Target::tr1212: return matrix_word_trace("1212", a, b);
    case Target::tr1222: return matrix_word_trace("1222", a, b);
    case Target::tr2222: return matrix_word_trace("2222", a, b);
    case Target::constant: return 1.0;
  }
  return 0.0;
}

/// Copy budgets (copies of rho1, copies of rho2) a functional may draw on.
inline std::vector<std::pair<int, int>> target_budgets(Target t) {
  switch (t) {
    case Target::pi2: return {{2, 0}, {1, 1}, {0, 2}};
    case Target::pi3: return {{3, 0}, {2, 1}, {1, 2}, {0, 3}};
    case Target::pi4: return {{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}};
    case Target::tr11: return {{2, 0}};
    case Target::tr22: return {{0, 2}};
    case Target::tr12: return {{1, 1}};
    case Target::tr1111: return {{4, 0}};
    case Target::tr1112: return {{3, 1}};
    case Target::tr1122: return {{2, 2}};
    case Target::tr1212: return {{2, 2}};
    case Target::tr1222: return {{1, 3}};
    case Target::tr2222: return {{0, 4}};
    case Target::constant: return {{0, 0}};
  }
  return {};
}

struct MonomialBasis {
  int max_copies = 0;
  std::vector<GraphKey> graphs;        ///< connected classes, simplest first
  std::vector<MonomialKey> monomials;  ///< empty monomial first
  std::map<GraphKey, std::size_t> graph_index;
  std::map<MonomialKey, std::size_t> monomial_index;
  std::size_t raw_matchings = 0;  ///< matchings enumerated over all layouts

  /// Monomials whose copy usage fits one of the budgets.
  std::vector<std::size_t> columns_for(const std::vector<std::pair<int, int>>& budgets) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < monomials.size(); ++j) {
      const auto [a, b] = color_usage(monomials[j]);
      for (const auto& [x, y] : budgets)
        if (a <= x && b <= y) {
          out.push_back(j);
          break;
        }
    }
    return out;
  }
};

namespace detail {

inline bool monomial_order(const MonomialKey& a, const MonomialKey& b) {
  const auto ca = color_usage(a), cb = color_usage(b);
  const int sa = ca.first + ca.second, sb = cb.first + cb.second;
  if (sa != sb) return sa < sb;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace detail

/// Enumerates every matching on every colouring of `max_copies` copies and
/// collects the distinct monomials (products of connected classes).
inline MonomialBasis build_basis(int max_copies) {
  if (max_copies != 2 && max_copies != 4) {
    throw ValidationError("build_basis: copies must be 2 or 4 (got " +
                          std::to_string(max_copies) + ")");
  }
  MonomialBasis basis;
  basis.max_copies = max_copies;
  std::set<MonomialKey> mons;
  std::set<GraphKey> graphs;
  const auto matchings = enumerate_matchings(2 * max_copies);
  for (int n1 = max_copies; n1 >= 0; --n1) {
    std::vector<int> colors(static_cast<std::size_t>(n1), 1);
    colors.insert(colors.end(), static_cast<std::size_t>(max_copies - n1), 2);
    for (const auto& m : matchings) {
      auto mon = components(colors, m);
      graphs.insert(mon.begin(), mon.end());
      mons.insert(std::move(mon));
      ++basis.raw_matchings;
    }
  }
  basis.graphs.assign(graphs.begin(), graphs.end());
  std::sort(basis.graphs.begin(), basis.graphs.end(), simpler);
  basis.monomials.assign(mons.begin(), mons.end());
  std::sort(basis.monomials.begin(), basis.monomials.end(), detail::monomial_order);
  for (std::size_t i = 0; i < basis.graphs.size(); ++i) basis.graph_index[basis.graphs[i]] = i;
  for (std::size_t i = 0; i < basis.monomials.size(); ++i)
    basis.monomial_index[basis.monomials[i]] = i;
  return basis;
}

/// Random Ginibre pair number i of a stream.
inline std::pair<DensityMatrix, DensityMatrix> sample_pair(std::uint64_t seed, std::uint64_t i) {
  return {random_state(4, Ensemble::ginibre, derive_seed(seed, 2 * i)),
          random_state(4, Ensemble::ginibre, derive_seed(seed, 2 * i + 1))};
}

struct FingerprintReport {
  std::size_t classes = 0;
  std::size_t distinct = 0;
  std::vector<std::pair<GraphKey, GraphKey>> collisions;
};

/// Compares graph probabilities of all classes on random pairs; classes
/// whose probability vectors agree within tol would be hidden duplicates.
inline FingerprintReport fingerprint_check(const MonomialBasis& basis, std::size_t pairs,
                                           std::uint64_t seed, double tol = 1e-10) {
  const std::size_t n = basis.graphs.size();
  Eigen::MatrixXd fp(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(pairs));
  for (std::size_t s = 0; s < pairs; ++s) {
    const auto [a, b] = sample_pair(seed, s);
    const auto r1 = to_correlation(a), r2 = to_correlation(b);
    for (std::size_t g = 0; g < n; ++g)
      fp(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(s)) =
          graph_probability(basis.graphs[g], r1, r2);
  }
  FingerprintReport rep;
  rep.classes = n;
  std::vector<bool> dup(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (fp.row(static_cast<Eigen::Index>(i)) - fp.row(static_cast<Eigen::Index>(j)))
                           .cwiseAbs()
                           .maxCoeff();
      if (d <= tol) {
        rep.collisions.emplace_back(basis.graphs[i], basis.graphs[j]);
        dup[j] = true;
      }
    }
  rep.distinct = static_cast<std::size_t>(std::count(dup.begin(), dup.end(), false));
  return rep;
}

/// p/q with q > 0; `exact` is false when the value did not snap.
struct Rational {
  long long p = 0;
  long long q = 1;
  bool exact = true;
  double value = 0.0;

  static Rational snap(double x, long long denominator = 3, double tol = 1e-7) {
    const double k = std::round(x * double(denominator));
    Rational r;
    if (std::abs(x - k / double(denominator)) <= tol) {
      long long num = static_cast<long long>(k);
      long long den = denominator;
      const long long g = std::gcd(num < 0 ? -num : num, den);
      if (g > 1) {
        num /= g;
        den /= g;
      }
      r.p = num;
      r.q = den;
      r.exact = true;
      r.value = double(num) / double(den);
    } else {
      r.exact = false;
      r.value = x;
    }
    return r;
  }

  std::string str() const {
    if (!exact) {
      std::ostringstream os;
      os.precision(17);
      os << value;
      return os.str();
    }
    return std::to_string(p) + "/" + std::to_string(q);
  }

  static Rational parse(const std::string& s) {
    Rational r;
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        r.exact = false;
        r.value = std::stod(s);
      } else {
        r.p = std::stoll(s.substr(0, slash));
        r.q = std::stoll(s.substr(slash + 1));
        if (r.q <= 0) throw ValidationError("non-positive denominator");
        r.value = double(r.p) / double(r.q);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("Rational: cannot parse \"" + s + "\"");
    }
    return r;
  }
};

struct CoefficientEntry {
  MonomialKey monomial;
  Rational coefficient;
};

struct CoefficientVector {
  Target target = Target::constant;
  std::vector<CoefficientEntry> entries;
  double residual = 0.0;  ///< max held-out residual
  std::size_t rank = 0;
  std::size_t candidates = 0;
  bool unique = true;  ///< false when the candidate system was rank deficient

  std::set<GraphKey> graphs() const {
    std::set<GraphKey> s;
    for (const auto& e : entries) s.insert(e.monomial.begin(), e.monomial.end());
    return s;
  }
  bool all_snapped() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const CoefficientEntry& e) { return e.coefficient.exact; });
  }
  bool denominators_divide(long long d) const {
    return std::all_of(entries.begin(), entries.end(), [d](const CoefficientEntry& e) {
      return e.coefficient.exact && d % e.coefficient.q == 0;
    });
  }
  GraphPolynomial polynomial() const {
    GraphPolynomial p;
    for (const auto& e : entries) p.terms.emplace_back(e.monomial, e.coefficient.value);
    return p;
  }
};

/// Raised when a functional has no representation on the candidate monomials.
class DerivationError : public NumericalError {
 public:
  DerivationError(Target t, const std::string& what) : NumericalError(what), target_(t) {}
  Target target() const noexcept { return target_; }

 private:
  Target target_;
};

enum class Prune {
  none,      ///< basic solution of the pivoted QR
  monomial,  ///< drop monomials one at a time, most copies first
  graph      ///< drop whole graphs, simplest first, free graphs kept
};

struct FitOptions {
  std::size_t samples = 0;  ///< 0 selects twice the candidate count
  std::size_t validation_samples = 500;
  std::uint64_t seed = 1;
  Prune prune = Prune::monomial;
  std::set<GraphKey> free_graphs;
  unsigned threads = 1;
  double rank_threshold = 1e-9;
  double accept_residual = 1e-9;
  double validation_tolerance = 1e-8;
};

/// Monomial values (rows: pairs, columns: basis monomials) and targets.
struct DesignMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

inline DesignMatrix evaluate_design(const MonomialBasis& basis,
                                    const std::vector<std::size_t>& columns, Target t,
                                    std::size_t rows, std::uint64_t seed, unsigned threads) {
  DesignMatrix d;
  d.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns.size()));
  d.y.resize(static_cast<Eigen::Index>(rows));
  std::set<GraphKey> used;
  for (auto j : columns) used.insert(basis.monomials[j].begin(), basis.monomials[j].end());
  const std::vector<GraphKey> gl(used.begin(), used.end());
  parallel_for(rows, threads, [&](std::size_t s) {
    const auto [a, b] = sample_pair(seed, s);
    const auto r1 = to_correlation(a), r2 = to_correlation(b);
    std::map<GraphKey, double> gv;
    for (const auto& g : gl) gv[g] = graph_probability(g, r1, r2);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      double v = 1.0;
      for (const auto& g : basis.monomials[columns[c]]) v *= gv.at(g);
      d.x(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) = v;
    }
    d.y(static_cast<Eigen::Index>(s)) = target_value(t, a, b);
  });
  return d;
}

namespace detail {

struct Solve {
  Eigen::VectorXd coef;
  std::size_t rank = 0;
  double residual = 0.0;
};

inline Solve basic_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double threshold) {
  Solve s;
  if (x.cols() == 0) {
    s.coef.resize(0);
    s.residual = y.cwiseAbs().maxCoeff();
    return s;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(threshold);
  s.coef = qr.solve(y);
  s.rank = static_cast<std::size_t>(qr.rank());
  s.residual = (x * s.coef - y).cwiseAbs().maxCoeff();
  return s;
}

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const std::vector<std::size_t>& c) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(c[k]));
  return out;
}

}  // namespace detail

/// Fits `target` on the basis monomials that fit its copy budgets.
inline CoefficientVector fit_coefficients(Target target, const MonomialBasis& basis,
                                          const FitOptions& opt = {}) {
  const auto columns = basis.columns_for(target_budgets(target));
  const std::size_t rows = opt.samples ? opt.samples : 2 * columns.size();
  if (rows < 2 * columns.size()) {
    throw ValidationError("fit_coefficients: " + std::to_string(rows) +
                          " samples is below twice the " + std::to_string(columns.size()) +
                          " candidate monomials");
  }
  const auto design = evaluate_design(basis, columns, target, rows, opt.seed, opt.threads);
  const auto& x = design.x;
  const auto& y = design.y;

  // Local column indices into `columns`.
  std::vector<std::size_t> active(columns.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  const auto full = detail::basic_solve(x, y, opt.rank_threshold);
  if (full.residual > opt.accept_residual) {
    std::ostringstream os;
    os << "no representation of " << to_string(target) << " on the " << basis.max_copies
       << "-copy basis (residual " << full.residual << ")";
    throw DerivationError(target, os.str());
  }
  const auto support_of = [&](const std::vector<std::size_t>& cols) {
    const auto s = detail::basic_solve(detail::select_columns(x, cols), y, opt.rank_threshold);
    std::vector<std::size_t> sup;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (std::abs(s.coef(static_cast<Eigen::Index>(k))) > 1e-8) sup.push_back(cols[k]);
    return sup;
  };
  const auto represents = [&](const std::vector<std::size_t>& cols) {
    if (cols.empty()) return y.cwiseAbs().maxCoeff() < opt.accept_residual;
    return detail::basic_solve(detail::select_columns(x, cols), y, opt.rank_threshold).residual <
           opt.accept_residual;
  };
  const auto mono = [&](std::size_t local) -> const MonomialKey& {
    return basis.monomials[columns[local]];
  };

  std::vector<std::size_t> support;
  if (opt.prune == Prune::graph) {
    std::set<GraphKey> present;
    for (auto k : active) present.insert(mono(k).begin(), mono(k).end());
    std::vector<GraphKey> order;
    for (const auto& g : present)
      if (!opt.free_graphs.contains(g)) order.push_back(g);
    std::sort(order.begin(), order.end(), simpler);
    std::vector<std::size_t> cur = active;
    for (const auto& g : order) {
      std::vector<std::size_t> trial;
      for (auto k : cur)
        if (std::find(mono(k).begin(), mono(k).end(), g) == mono(k).end()) trial.push_back(k);
      if (trial.empty() || trial.size() == cur.size()) continue;
      if (represents(trial)) cur = std::move(trial);
    }
    support = support_of(cur);
  } else {
    support = support_of(active);
  }
  if (opt.prune == Prune::monomial) {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::size_t> order = support;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto all_free = [&](std::size_t k) {
          return std::all_of(mono(k).begin(), mono(k).end(),
                             [&](const GraphKey& g) { return opt.free_graphs.contains(g); });
        };
        const bool fa = all_free(a), fb = all_free(b);
        if (fa != fb) return !fa;
        const auto ua = color_usage(mono(a)), ub = color_usage(mono(b));
        return ua.first + ua.second > ub.first + ub.second;
      });
      for (auto k : order) {
        std::vector<std::size_t> trial;
        for (auto j : support)
          if (j != k) trial.push_back(j);
        if (represents(trial)) {
          support = std::move(trial);
          changed = true;
          break;
        }
      }
    }
  }

  const auto fin = detail::basic_solve(detail::select_columns(x, support), y, opt.rank_threshold);
  CoefficientVector cv;
  cv.target = target;
  cv.rank = full.rank;
  cv.candidates = columns.size();
  cv.unique = full.rank == columns.size();
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double c = fin.coef(static_cast<Eigen::Index>(k));
    if (std::abs(c) <= 1e-8) continue;
    cv.entries.push_back({mono(support[k]), Rational::snap(c)});
  }
  std::sort(cv.entries.begin(), cv.entries.end(),
            [](const CoefficientEntry& a, const CoefficientEntry& b) {
              return detail::monomial_order(a.monomial, b.monomial);
            });

  // Held-out validation with the snapped coefficients.
  const std::uint64_t vseed = derive_seed(opt.seed, 0x5EED0FF5E7ULL);
  std::vector<double> res(opt.validation_samples);
  const auto poly = cv.polynomial();
  parallel_for(opt.validation_samples, opt.threads, [&](std::size_t s) {
    const auto [a, b] = sample_pair(vseed, s);
    const auto r1 = to_correlation(a), r2 = to_correlation(b);
    double v = 0.0;
    for (const auto& [m, c] : poly.terms) v += c * monomial_value(m, r1, r2);
    res[s] = std::abs(v - target_value(target, a, b));
  });
  cv.residual = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
  if (cv.residual >= opt.validation_tolerance) {
    std::ostringstream os;
    os << "held-out residual " << cv.residual << " for " << to_string(target)
       << " exceeds " << opt.validation_tolerance;
    throw DerivationError(target, os.str());
  }
  return cv;
}

inline void write_table(std::ostream& os, const CoefficientVector& cv) {
  os << "# target " << to_string(cv.target) << "\n";
  os << "# residual " << cv.residual << "\n";
  os << "# monomials " << cv.entries.size() << " graphs " << cv.graphs().size() << "\n";
  for (const auto& e : cv.entries) os << to_string(e.monomial) << '\t' << e.coefficient.str() << "\n";
}

inline CoefficientVector read_table(std::istream& is) {
  CoefficientVector cv;
  std::string line;
  int lineno = 0;
  bool have_target = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "target") {
        std::string name;
        ls >> name;
        cv.target = parse_target(name);
        have_target = true;
      } else if (key == "residual") {
        ls >> cv.residual;
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError("read_table: line " + std::to_string(lineno) +
                            ": expected <monomial>TAB<coefficient>");
    }
    try {
      cv.entries.push_back(
          {parse_monomial_key(line.substr(0, tab)), Rational::parse(line.substr(tab + 1))});
    } catch (const ValidationError& e) {
      throw ValidationError("read_table: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_target) throw ValidationError("read_table: missing '# target' header");
  return cv;
}

/// One stated count and what the derivation achieved.
struct ClaimLine {
  std::string claim;
  long long expected = 0;
  long long achieved = 0;
  bool match = false;
};

struct ClaimReport {
  std::vector<ClaimLine> lines;
  std::vector<std::string> notes;

  bool all_match() const {
    return std::all_of(lines.begin(), lines.end(), [](const ClaimLine& l) { return l.match; });
  }
};

/// Fits that make up the measurement workflows; absent entries were not requested.
struct WorkflowFits {
  std::optional<CoefficientVector> pi2, pi3, pi4, o2, o11, o22, o12;

  std::vector<const CoefficientVector*> present() const {
    std::vector<const CoefficientVector*> v;
    for (const auto* f : {&pi2, &pi3, &pi4, &o2, &o11, &o22, &o12})
      if (*f) v.push_back(&**f);
    return v;
  }
};

inline std::set<GraphKey> union_graphs(std::initializer_list<const CoefficientVector*> fits) {
  std::set<GraphKey> s;
  for (const auto* f : fits) {
    const auto g = f->graphs();
    s.insert(g.begin(), g.end());
  }
  return s;
}

/// Counts projections (distinct graphs) and photon pairs per workflow and
/// compares them with the stated figures.
inline ClaimReport verify_table_claims(const WorkflowFits& f, int capacity = 6) {
  if (!f.pi2 || !f.pi3 || !f.pi4 || !f.o2) {
    throw ValidationError("verify_table_claims: pi2, pi3, pi4 and o2 fits are required");
  }
  ClaimReport rep;
  const auto add = [&](std::string claim, long long expected, long long achieved) {
    rep.lines.push_back({std::move(claim), expected, achieved, expected == achieved});
  };
  const auto h = union_graphs({&*f.pi2});
  const auto plan_h = plan_configurations(h, capacity);
  add("Pi2 prime measurements", 9, static_cast<long long>(h.size()));
  add("Pi2 photon pairs", 6, plan_h.photon_pairs());
  add("H workflow projective measurements", 10, static_cast<long long>(h.size()));

  const auto sub = union_graphs({&*f.pi2, &*f.o2});
  const auto plan_sub = plan_configurations(sub, capacity);
  add("subfidelity projections", 41, static_cast<long long>(sub.size()));
  add("subfidelity configurations", 10, static_cast<long long>(plan_sub.configurations.size()));
  add("subfidelity photon pairs", 20, plan_sub.photon_pairs());

  const auto td = union_graphs({&*f.pi2, &*f.pi3, &*f.pi4});
  const auto plan_td = plan_configurations(td, capacity);
  add("trace-distance projections", 51, static_cast<long long>(td.size()));
  add("trace-distance photon pairs", 104, plan_td.photon_pairs());

  std::ostringstream n1;
  n1 << "maximal graphs: H " << maximal_graphs(h).size() << ", subfidelity "
     << maximal_graphs(sub).size() << ", trace distance " << maximal_graphs(td).size();
  rep.notes.push_back(n1.str());
  std::ostringstream n2;
  n2 << "configurations of " << capacity << " copies: H " << plan_h.configurations.size()
     << ", subfidelity " << plan_sub.configurations.size() << ", trace distance "
     << plan_td.configurations.size();
  rep.notes.push_back(n2.str());
  return rep;
}

/// Which distance measures a derivation should support.
struct WorkflowNeeds {
  bool h = true;
  bool g = true;
  bool e = true;
  bool t = true;
};

/// Standard derivation of the workflow fits on a 4-copy basis: Pi2 and Pi3
/// as basic solutions, overlaps pruned per monomial, and Pi4 pruned per
/// graph with the Pi2 and Pi3 graphs counted as already measured.
inline WorkflowFits derive_workflows(const MonomialBasis& basis4, std::uint64_t seed,
                                     unsigned threads = 1, WorkflowNeeds needs = {}) {
  if (basis4.max_copies != 4) throw ValidationError("derive_workflows: 4-copy basis required");
  WorkflowFits f;
  FitOptions o;
  o.seed = seed;
  o.threads = threads;
  o.prune = Prune::none;
  if (needs.h || needs.t) f.pi2 = fit_coefficients(Target::pi2, basis4, o);
  if (needs.t) f.pi3 = fit_coefficients(Target::pi3, basis4, o);
  o.prune = Prune::monomial;
  if (needs.e) f.o2 = fit_coefficients(Target::tr1212, basis4, o);
  if (needs.g) {
    f.o11 = fit_coefficients(Target::tr11, basis4, o);
    f.o22 = fit_coefficients(Target::tr22, basis4, o);
  }
  if (needs.g || needs.e) f.o12 = fit_coefficients(Target::tr12, basis4, o);
  if (needs.t) {
    o.prune = Prune::graph;
    o.free_graphs = union_graphs({&*f.pi2, &*f.pi3});
    f.pi4 = fit_coefficients(Target::pi4, basis4, o);
  }
  return f;
}

inline Workflow to_workflow(const WorkflowFits& f) {
  Workflow w;
  if (f.pi2) w.pi2 = f.pi2->polynomial();
  if (f.pi3) w.pi3 = f.pi3->polynomial();
  if (f.pi4) w.pi4 = f.pi4->polynomial();
  if (f.o2) w.o2 = f.o2->polynomial();
  if (f.o11) w.o11 = f.o11->polynomial();
  if (f.o22) w.o22 = f.o22->polynomial();
  if (f.o12) w.o12 = f.o12->polynomial();
  return w;
}

}  // namespace qoverlap
