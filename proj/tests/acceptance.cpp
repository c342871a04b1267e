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

// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qoverlap/qoverlap.hpp"

using namespace qoverlap;

namespace {

constexpr std::uint64_t kRoot = 20260101;

struct Outcome {
  bool pass = false;
  std::vector<std::string> details;
};

std::string num(double x, int precision = 3) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

std::pair<DensityMatrix, DensityMatrix> random_pair(std::uint64_t stream, std::uint64_t i,
                                                    Ensemble e = Ensemble::ginibre, int dim = 4) {
  return {random_state(dim, e, derive_seed(stream, 2 * i)),
          random_state(dim, e, derive_seed(stream, 2 * i + 1))};
}

const WorkflowFits& fits() {
  static const WorkflowFits f = derive_workflows(build_basis(4), 1, 1);
  return f;
}

Outcome overlap_equivalence() {
  double e1 = 0.0, e2 = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto [a, b] = random_pair(1, i);
    const auto r1 = to_correlation(a), r2 = to_correlation(b);
    e1 = std::max(e1, std::abs(overlap_first(r1, r2) - overlap(a, b)));
    e2 = std::max(e2, std::abs(overlap_second(r1, r2) - overlap2(a, b)));
  }
  return {e1 <= 1e-10 && e2 <= 1e-10,
          {"1000 Ginibre pairs; max |1/4 sum R1 R2 - Tr(r1 r2)| = " + num(e1),
           "max |A-tensor contraction - Tr[(r1 r2)^2]| = " + num(e2)}};
}

Outcome shift_identity() {
  double e16 = 0.0, e256 = 0.0, alt_min = 1e300;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto [a, b] = random_pair(2, i);
    const double o2 = overlap2(a, b);
    e16 = std::max(e16, std::abs(shift_operator_check(a, b) - o2));
    e256 = std::max(e256, std::abs(copy_shift_check(a, b) - o2));
    const std::array<DensityMatrix, 2> st{a, b};
    const std::array<StateId, 4> alt{StateId::first, StateId::second, StateId::first,
                                     StateId::second};
    const double v =
        trace_of_product(copy_shift_operator(), assemble(st, ModeLayout::from_states(alt)).matrix())
            .real();
    alt_min = std::min(alt_min, std::abs(v - o2));
  }
  return {e16 <= 1e-10 && e256 <= 1e-10,
          {"200 pairs; 16x16 shift on (r1 r2) (x) (r1 r2): max error " + num(e16),
           "256x256 copy shift S23 S34 S12 on r1 (x) r2 (x) r2 (x) r1: max error " + num(e256),
           "same operator on copy order 1,2,1,2 gives Tr(r1^2 r2^2); min gap to Tr[(r1 r2)^2] " +
               num(alt_min)}};
}

Outcome bound_chain() {
  long long bad_ef = 0, bad_fg = 0, bad_low = 0, bad_up = 0, bad_h = 0;
  long long bad_low_sq = 0, bad_up_sq = 0;
  double worst_low = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto [a, b] = random_pair(3, i);
    const auto d = distance_set(a, b);
    const double s = kAuditSlack, f = d.fidelity, t = d.trace_distance;
    bad_ef += d.subfidelity > f + s;
    bad_fg += f > d.superfidelity + s;
    bad_low += 1.0 - f > t + s;
    worst_low = std::max(worst_low, 1.0 - f - t);
    bad_up += t > std::sqrt(std::max(0.0, 1.0 - f * f)) + s;
    bad_h += d.hilbert_schmidt > 2.0 * t + s;
    bad_low_sq += 1.0 - d.sqrt_fidelity > t + s;
    bad_up_sq += t > std::sqrt(std::max(0.0, 1.0 - f)) + s;
  }
  double sat = 0.0, sat_sq = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto [a, b] = random_pair(4, i, Ensemble::pure);
    const double f = fidelity(a, b), t = trace_distance(a, b);
    sat = std::max(sat, std::abs(t - std::sqrt(std::max(0.0, 1.0 - f * f))));
    sat_sq = std::max(sat_sq, std::abs(t - std::sqrt(std::max(0.0, 1.0 - f))));
  }
  const bool pass = bad_ef == 0 && bad_fg == 0 && bad_low == 0 && bad_up == 0 && bad_h == 0 &&
                    sat <= 1e-9;
  return {pass,
          {"10^4 Ginibre pairs, slack 1e-9, F = [Tr sqrt(sqrt r1 r2 sqrt r1)]^2",
           "violations: E<=F " + std::to_string(bad_ef) + ", F<=G " + std::to_string(bad_fg) +
               ", 1-F<=T " + std::to_string(bad_low) + " (worst excess " + num(worst_low) +
               "), T<=sqrt(1-F^2) " + std::to_string(bad_up) + ", H<=2T " + std::to_string(bad_h),
           "10^3 pure pairs: max |T - sqrt(1-F^2)| = " + num(sat) + " (saturation required <= 1e-9)",
           "with F squared the valid chain is 1-sqrt(F) <= T <= sqrt(1-F): violations " +
               std::to_string(bad_low_sq) + " / " + std::to_string(bad_up_sq) +
               ", pure-pair max |T - sqrt(1-F)| = " + num(sat_sq)}};
}

Outcome single_qubit() {
  double ef = 0.0, eg = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto [a, b] = random_pair(5, i, Ensemble::ginibre, 2);
    const double f = fidelity(a, b);
    const double closed =
        overlap(a, b) + std::sqrt(std::max(0.0, linear_entropy(a) * linear_entropy(b)));
    ef = std::max(ef, std::abs(closed - f));
    eg = std::max(eg, std::abs(sub_super_fidelity(a, b).super - f));
  }
  return {ef <= 1e-10 && eg <= 1e-10,
          {"10^4 single-qubit Ginibre pairs; max |O + sqrt(S_L S_L) - F| = " + num(ef),
           "max |G - F| = " + num(eg)}};
}

std::vector<std::pair<DensityMatrix, DensityMatrix>> degenerate_pairs() {
  std::vector<std::pair<DensityMatrix, DensityMatrix>> out;
  for (std::uint64_t i = 0; i < 25; ++i) {
    const auto a = random_state(4, Ensemble::ginibre, derive_seed(61, i));
    out.emplace_back(a, a);
  }
  for (std::uint64_t i = 0; i < 25; ++i) out.push_back(random_pair(62, i, Ensemble::pure));
  for (std::uint64_t i = 0; i < 25; ++i) {
    const auto p = random_state(4, Ensemble::pure, derive_seed(63, i));
    const ComplexMatrix mix = 0.5 * (p.matrix() + maximally_mixed(4).matrix());
    out.emplace_back(p, DensityMatrix::from_matrix(mix));
  }
  for (std::uint64_t i = 0; i < 25; ++i) {
    ComplexMatrix d1 = ComplexMatrix::Zero(4, 4), d2 = ComplexMatrix::Zero(4, 4);
    const double x = 0.05 + 0.4 * double(i) / 25.0;
    d1.diagonal() << x, x, 0.5 - x, 0.5 - x;
    d2.diagonal() << 0.5 - x, 0.5 - x, x, x;
    const auto u = random_unitary(4, derive_seed(64, i));
    out.emplace_back(conjugate(DensityMatrix::from_matrix(d1), u),
                     conjugate(DensityMatrix::from_matrix(d2), u));
  }
  return out;
}

Outcome moment_route() {
  double worst = 0.0, worst_deg = 0.0;
  long long thrown = 0;
  const auto check = [&](const DensityMatrix& a, const DensityMatrix& b, double& w) {
    try {
      const double t = trace_distance_via_moments(moments(a, b)).trace_distance;
      w = std::max(w, std::abs(t - trace_distance(a, b)));
    } catch (const NumericalError&) {
      ++thrown;
    }
  };
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto [a, b] = random_pair(6, i);
    check(a, b, worst);
  }
  for (const auto& [a, b] : degenerate_pairs()) check(a, b, worst_deg);
  return {worst <= 1e-7 && worst_deg <= 1e-7 && thrown == 0,
          {"10^4 Ginibre pairs: max |T_moments - T| = " + num(worst),
           "100 degenerate pairs (identical, pure-pure, pure vs half-mixed, doubly degenerate "
           "commuting): max error " + num(worst_deg),
           "strict-mode failures: " + std::to_string(thrown)}};
}

Outcome worked_pair() {
  const auto a = bell_phi_plus(), b = maximally_mixed(4);
  const auto d = distance_set(a, b);
  const auto o = distances_from_overlaps(a, b);
  const double h = std::sqrt(3.0) / 2.0;
  bool ok = std::abs(d.fidelity - 0.25) < 1e-10 && std::abs(d.subfidelity - 0.25) < 1e-10 &&
            std::abs(d.superfidelity - 0.25) < 1e-10 && std::abs(d.hilbert_schmidt - h) < 1e-10 &&
            std::abs(d.trace_distance - 0.75) < 1e-10;
  ok = ok && std::abs(o.subfidelity - 0.25) < 1e-10 && std::abs(o.superfidelity - 0.25) < 1e-10 &&
       std::abs(o.hilbert_schmidt - h) < 1e-10 && std::abs(o.trace_distance - 0.75) < 1e-10;
  Outcome out;
  out.details.push_back("oracle: F " + num(d.fidelity, 12) + ", E " + num(d.subfidelity, 12) +
                        ", G " + num(d.superfidelity, 12) + ", H " +
                        num(d.hilbert_schmidt, 12) + ", T " + num(d.trace_distance, 12));
  out.details.push_back("overlaps: E " + num(o.subfidelity, 12) + ", G " +
                        num(o.superfidelity, 12) + ", H " + num(o.hilbert_schmidt, 12) + ", T " +
                        num(o.trace_distance, 12));
  const auto wf = to_workflow(fits());
  const auto plan = plan_configurations(wf.required_graphs());
  const auto rep = estimate_distances(plan, wf, a, b, 1000000, derive_seed(kRoot, 6));
  const std::map<std::string, double> truth{{"Pi2", 0.75}, {"H", h}, {"G", 0.25}, {"E", 0.25},
                                            {"T", 0.75}};
  std::ostringstream os;
  os << "interferometer, N = 10^6 per configuration, " << plan.configurations.size()
     << " configurations:";
  for (const auto& m : rep.measures) {
    const double z = m.std_err > 0 ? std::abs(m.estimate - truth.at(m.name)) / m.std_err
                                   : (m.estimate == truth.at(m.name) ? 0.0 : 1e300);
    ok = ok && z <= 4.0;
    os << " " << m.name << " " << num(m.estimate, 5) << "+-" << num(m.std_err, 2) << " ("
       << num(z, 2) << " sigma)";
  }
  out.details.push_back(os.str());
  out.pass = ok;
  return out;
}

Outcome derivation() {
  FitOptions opt;
  opt.prune = Prune::none;
  const auto pi2 = fit_coefficients(Target::pi2, build_basis(2), opt);
  const auto& o2 = *fits().o2;
  const bool ok = pi2.graphs().size() <= 9 && pi2.residual < 1e-8 && o2.residual < 1e-8 &&
                  o2.all_snapped() && o2.denominators_divide(3);
  return {ok,
          {"Pi2 on the two-copy basis: " + std::to_string(pi2.entries.size()) + " monomials, " +
               std::to_string(pi2.graphs().size()) + " distinct graphs, residual " +
               num(pi2.residual),
           "O2(r1,r2) on the four-copy basis: " + std::to_string(o2.entries.size()) +
               " monomials, " + std::to_string(o2.graphs().size()) + " graphs, held-out residual " +
               num(o2.residual) + ", all snapped " + (o2.all_snapped() ? "yes" : "no") +
               ", denominators divide 3 " + (o2.denominators_divide(3) ? "yes" : "no")}};
}

Outcome claims() {
  const auto rep = verify_table_claims(fits());
  Outcome out;
  out.pass = rep.all_match();
  for (const auto& l : rep.lines)
    out.details.push_back(std::string(l.match ? "match    " : "MISMATCH ") + l.claim +
                          ": expected " + std::to_string(l.expected) + ", achieved " +
                          std::to_string(l.achieved));
  for (const auto& n : rep.notes) out.details.push_back("note: " + n);
  return out;
}

Outcome monte_carlo() {
  const auto wf = to_workflow(fits());
  const auto plan = plan_configurations(wf.required_graphs());
  const std::vector<std::uint64_t> shots{10000, 100000, 1000000};
  const std::vector<std::string> names{"H", "G", "E", "T"};
  constexpr std::size_t kPairs = 20, kRepeats = 50;
  std::map<std::string, std::vector<double>> sq;
  std::map<std::string, long long> covered;
  long long runs = 0;
  for (auto& n : names) sq[n].assign(shots.size(), 0.0);
  for (std::size_t p = 0; p < kPairs; ++p) {
    const auto [a, b] = random_pair(9, p);
    const auto d = distance_set(a, b);
    const std::map<std::string, double> truth{{"H", d.hilbert_schmidt},
                                              {"G", d.superfidelity},
                                              {"E", d.subfidelity},
                                              {"T", d.trace_distance}};
    for (std::size_t k = 0; k < shots.size(); ++k)
      for (std::size_t r = 0; r < kRepeats; ++r) {
        const auto seed = derive_seed(derive_seed(kRoot, 9000 + p), 100 * k + r);
        const auto rep = estimate_distances(plan, wf, a, b, shots[k], seed);
        ++runs;
        for (const auto& n : names) {
          const auto* m = rep.find(n);
          const double err = m->estimate - truth.at(n);
          sq[n][k] += err * err;
          covered[n] += std::abs(err) <= 4.0 * m->std_err;
        }
      }
  }
  Outcome out;
  out.pass = true;
  const double per = double(kPairs * kRepeats);
  out.details.push_back(std::to_string(kPairs) + " Ginibre pairs x " + std::to_string(kRepeats) +
                        " repeats at N = 10^4, 10^5, 10^6 per configuration");
  for (const auto& n : names) {
    std::vector<double> rmse;
    for (double s : sq[n]) rmse.push_back(std::sqrt(s / per));
    const double r1 = rmse[0] / rmse[1], r2 = rmse[1] / rmse[2];
    const double cov = double(covered[n]) / double(runs);
    const bool ok = r1 >= 2.4 && r1 <= 4.2 && r2 >= 2.4 && r2 <= 4.2 && cov >= 0.95;
    out.pass = out.pass && ok;
    out.details.push_back(n + ": RMSE " + num(rmse[0]) + ", " + num(rmse[1]) + ", " +
                          num(rmse[2]) + "; ratios " + num(r1) + ", " + num(r2) +
                          "; 4-sigma coverage " + num(100.0 * cov, 4) + "%" +
                          (ok ? "" : "  <- out of range"));
  }
  return out;
}

Outcome combinatorics() {
  const auto all = enumerate_matchings(8);
  const long long formula = matching_count_formula(8);
  const std::vector<int> layout{1, 1, 2, 2}, swapped{2, 2, 1, 1};
  std::set<GraphKey> exchange, roles, connected, spanning;
  for (const auto& m : all) {
    const auto k = canonical_key(layout, m);
    exchange.insert(k);
    roles.insert(std::min(k, canonical_key(swapped, m)));
    const auto parts = components(layout, m);
    if (parts.size() == 1) {
      connected.insert(parts[0]);
      if (parts[0].copy_count() == 4) spanning.insert(parts[0]);
    }
  }
  const auto basis = build_basis(4);
  const std::vector<std::pair<std::string, std::size_t>> conventions{
      {"raw matchings on 8 modes", all.size()},
      {"classes under exchange of same-state copies (layout 1122, empty included)",
       exchange.size()},
      {"classes under copy exchange and state-role exchange", roles.size()},
      {"connected classes arising on layout 1122", connected.size()},
      {"connected classes spanning all four copies", spanning.size()},
      {"connected classes over all colourings of four copies", basis.graphs.size()},
      {"monomials over all colourings of four copies", basis.monomials.size()}};
  Outcome out;
  out.pass = static_cast<long long>(all.size()) == formula;
  out.details.push_back("brute-force matchings " + std::to_string(all.size()) +
                        ", sum_k C(8,2k)(2k-1)!! = " + std::to_string(formula));
  bool any = false;
  for (const auto& [name, count] : conventions) {
    const bool eq = count == 63;
    any = any || eq;
    out.details.push_back(name + ": " + std::to_string(count) + (eq ? " (equals 63)" : " (differs from 63)"));
  }
  out.details.push_back(any ? "63 reproduced under at least one convention"
                            : "no convention reproduces the count 63");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"overlap formula equivalence", overlap_equivalence},
      {"shift-operator identity", shift_identity},
      {"bound chain", bound_chain},
      {"single-qubit identities", single_qubit},
      {"moment route", moment_route},
      {"worked pair", worked_pair},
      {"derivation engine", derivation},
      {"count reproduction", claims},
      {"Monte Carlo consistency", monte_carlo},
      {"combinatorial basis", combinatorics}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << std::setw(2) << id << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << "  [" << num(secs, 3) << " s]\n";
    for (const auto& d : o.details) std::cout << "      " << d << "\n";
    std::cout << std::flush;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed\n" : "all criteria passed\n");
  return failed ? 1 : 0;
}
