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

/// @file overlap.hpp
/// Overlap algebra on correlation matrices: first- and second-order
/// overlaps, shift and swap operators, moments of rho1 - rho2 and the trace
/// distance from the characteristic quartic.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qoverlap/core.hpp"
#include "qoverlap/oracle.hpp"

namespace qoverlap {

/// 1/4 sum_mn R1_mn R2_mn.
inline double overlap_first(const CorrelationMatrix& r1, const CorrelationMatrix& r2) {
  return 0.25 * r1.entries().cwiseProduct(r2.entries()).sum();
}

/// Restricted delta: 1 when i == m and both lie in 1..3, otherwise 0.
inline double delta3(int i, int m) { return (i == m && i >= 1 && i <= 3) ? 1.0 : 0.0; }

inline double levi_civita(int a, int b, int c) {
  if (a < 1 || b < 1 || c < 1 || a > 3 || b > 3 || c > 3) return 0.0;
  if (a == b || b == c || a == c) return 0.0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

/// Coefficient of sigma_i in sigma_m sigma_k:
/// d3(i,m) d(k,0) + d3(i,k) d(m,0) + d3(m,k) d(i,0) + d(i,0) d(m,0) d(k,0) + i eps(m,k,i).
inline cplx pauli_structure(int i, int m, int k) {
  const auto z = [](int a) { return a == 0 ? 1.0 : 0.0; };
  const double re = delta3(i, m) * z(k) + delta3(i, k) * z(m) + delta3(m, k) * z(i) +
                    z(i) * z(m) * z(k);
  return {re, levi_civita(m, k, i)};
}

namespace detail {

using PauliTable = std::array<cplx, 64>;

inline const PauliTable& structure_table() {
  static const PauliTable table = [] {
    PauliTable t{};
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k) t[static_cast<std::size_t>(16 * i + 4 * m + k)] =
            pauli_structure(i, m, k);
    return t;
  }();
  return table;
}

inline cplx st(int i, int m, int k) {
  return structure_table()[static_cast<std::size_t>(16 * i + 4 * m + k)];
}

}  // namespace detail

/// Two-qubit operator in the Pauli product basis: X = sum_ij C_ij sigma_i (x) sigma_j.
using PauliCoefficients = Eigen::Matrix4cd;

inline PauliCoefficients pauli_coefficients(const CorrelationMatrix& r) {
  return (0.25 * r.entries()).cast<cplx>();
}

/// Coefficients of the product A B, using the Pauli structure constants.
inline PauliCoefficients pauli_multiply(const PauliCoefficients& a, const PauliCoefficients& b) {
  PauliCoefficients out = PauliCoefficients::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const cplx amn = a(m, n);
      if (amn == cplx(0.0)) continue;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const cplx w = amn * b(k, l);
          if (w == cplx(0.0)) continue;
          for (int i = 0; i < 4; ++i) {
            const cplx si = detail::st(i, m, k);
            if (si == cplx(0.0)) continue;
            for (int j = 0; j < 4; ++j) {
              const cplx sj = detail::st(j, n, l);
              if (sj != cplx(0.0)) out(i, j) += w * si * sj;
            }
          }
        }
    }
  return out;
}

/// Tr of an operator given by Pauli coefficients.
inline cplx pauli_trace(const PauliCoefficients& c) { return 4.0 * c(0, 0); }

/// Tr(rho_{w1} rho_{w2} ...) for a word over {'1','2'}, evaluated entirely on
/// correlation matrices.
inline double bloch_word_trace(std::string_view word, const CorrelationMatrix& r1,
                               const CorrelationMatrix& r2) {
  if (word.empty()) throw ValidationError("bloch_word_trace: empty word");
  auto pick = [&](char c) -> const CorrelationMatrix& {
    if (c == '1') return r1;
    if (c == '2') return r2;
    throw ValidationError("bloch_word_trace: word letters must be '1' or '2'");
  };
  PauliCoefficients acc = pauli_coefficients(pick(word[0]));
  for (std::size_t p = 1; p < word.size(); ++p)
    acc = pauli_multiply(acc, pauli_coefficients(pick(word[p])));
  const cplx tr = pauli_trace(acc);
  if (std::abs(tr.imag()) > kImagResidueTol) {
    throw NumericalError("bloch_word_trace: imaginary residue " + std::to_string(tr.imag()));
  }
  return tr.real();
}

/// Same trace from matrix products.
inline double matrix_word_trace(std::string_view word, const DensityMatrix& a,
                                const DensityMatrix& b) {
  if (word.empty()) throw ValidationError("matrix_word_trace: empty word");
  detail::require_same_dim(a, b, "matrix_word_trace");
  ComplexMatrix acc = ComplexMatrix::Identity(a.dim(), a.dim());
  for (char c : word) {
    if (c == '1') acc = acc * a.matrix();
    else if (c == '2') acc = acc * b.matrix();
    else throw ValidationError("matrix_word_trace: word letters must be '1' or '2'");
  }
  return acc.trace().real();
}

/// Rank-8 tensors over 0..3 contracted as R1_mn R2_kl R1_xy R2_rs A[m,n,k,l,x,y,r,s].
struct ATensors {
  static constexpr std::size_t kSize = 65536;
  std::array<std::vector<cplx>, 4> a;

  static std::size_t index(int m, int n, int k, int l, int x, int y, int r, int s) {
    return static_cast<std::size_t>(
        ((((((m * 4 + n) * 4 + k) * 4 + l) * 4 + x) * 4 + y) * 4 + r) * 4 + s);
  }
};

namespace detail {

inline ATensors build_a_tensors() {
  ATensors t;
  for (auto& v : t.a) v.assign(ATensors::kSize, cplx(0.0));
  const double norm = 1.0 / 64.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const std::size_t which = (i == 0 ? 0U : 1U) + (j == 0 ? 0U : 2U);
      auto& dst = t.a[which];
      for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k) {
          const cplx t1 = st(i, m, k);
          if (t1 == cplx(0.0)) continue;
          for (int x = 0; x < 4; ++x)
            for (int r = 0; r < 4; ++r) {
              const cplx t2 = st(i, x, r);
              if (t2 == cplx(0.0)) continue;
              for (int n = 0; n < 4; ++n)
                for (int l = 0; l < 4; ++l) {
                  const cplx t3 = st(j, n, l);
                  if (t3 == cplx(0.0)) continue;
                  for (int y = 0; y < 4; ++y)
                    for (int s = 0; s < 4; ++s) {
                      const cplx t4 = st(j, y, s);
                      if (t4 == cplx(0.0)) continue;
                      dst[ATensors::index(m, n, k, l, x, y, r, s)] += norm * t1 * t2 * t3 * t4;
                    }
                }
            }
        }
    }
  return t;
}

}  // namespace detail

/// A1 (i=j=0), A2 (i>0, j=0), A3 (i=0, j>0), A4 (i,j>0); built once.
inline const ATensors& a_tensors() {
  static const ATensors tensors = detail::build_a_tensors();
  return tensors;
}

/// Individual contractions of the four tensors; their sum is Tr[(rho1 rho2)^2].
inline std::array<cplx, 4> a_tensor_contributions(const CorrelationMatrix& r1,
                                                  const CorrelationMatrix& r2) {
  std::array<double, 256> p{};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          p[static_cast<std::size_t>(((m * 4 + n) * 4 + k) * 4 + l)] = r1(m, n) * r2(k, l);
  std::array<cplx, 4> out{};
  const auto& t = a_tensors();
  for (std::size_t w = 0; w < 4; ++w) {
    const auto& a = t.a[w];
    cplx acc = 0.0;
    for (std::size_t u = 0; u < 256; ++u) {
      if (p[u] == 0.0) continue;
      cplx row = 0.0;
      const cplx* base = a.data() + u * 256;
      for (std::size_t v = 0; v < 256; ++v) row += base[v] * p[v];
      acc += p[u] * row;
    }
    out[w] = acc;
  }
  return out;
}

/// Tr[(rho1 rho2)^2] from the A-tensor contraction.
inline double overlap_second(const CorrelationMatrix& r1, const CorrelationMatrix& r2) {
  const auto parts = a_tensor_contributions(r1, r2);
  const cplx total = parts[0] + parts[1] + parts[2] + parts[3];
  if (std::abs(total.imag()) > kImagResidueTol) {
    throw NumericalError("overlap_second: imaginary residue " + std::to_string(total.imag()) +
                         " in tensor contraction");
  }
  return total.real();
}

inline double overlap_second(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return overlap_second(to_correlation(rho1), to_correlation(rho2));
}

/// S_23 S_34 S_12 S_23 on four qubit slots (16 x 16).
inline const ComplexMatrix& shift_operator() {
  static const ComplexMatrix op = [] {
    const auto s = [](int i, int j) { return swap_operator(4, i - 1, j - 1); };
    return ComplexMatrix(s(2, 3) * s(3, 4) * s(1, 2) * s(2, 3));
  }();
  return op;
}

/// Tr(A B) without forming the product.
inline cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

/// Re Tr[S (rho1 rho2) (x) (rho1 rho2)].
inline double shift_operator_check(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != 4 || rho2.dim() != 4) {
    throw ValidationError("shift_operator_check: two-qubit states required");
  }
  const ComplexMatrix x = rho1.matrix() * rho2.matrix();
  const ComplexMatrix xx = Eigen::kroneckerProduct(x, x).eval();
  const cplx v = trace_of_product(shift_operator(), xx);
  if (std::abs(v.imag()) > 1e-10) {
    throw NumericalError("shift_operator_check: imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

/// Swap of whole copies i and j (both modes) in a register of n_copies two-qubit copies.
inline ComplexMatrix copy_swap_operator(int n_copies, int i, int j) {
  const int n = 2 * n_copies;
  return swap_operator(n, 2 * i, 2 * j) * swap_operator(n, 2 * i + 1, 2 * j + 1);
}

/// Copy-level shift C = S_23 S_34 S_12 on four copies (256 x 256).
inline const ComplexMatrix& copy_shift_operator() {
  static const ComplexMatrix op = [] {
    const auto s = [](int i, int j) { return copy_swap_operator(4, i - 1, j - 1); };
    return ComplexMatrix(s(2, 3) * s(3, 4) * s(1, 2));
  }();
  return op;
}

/// Re Tr[C (rho1 (x) rho2 (x) rho2 (x) rho1)] which equals Tr(rho1 rho2 rho1 rho2).
inline double copy_shift_check(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const std::array<DensityMatrix, 2> states{rho1, rho2};
  const std::array<StateId, 4> order{StateId::first, StateId::second, StateId::second,
                                     StateId::first};
  const auto big = assemble(states, ModeLayout::from_states(order));
  const cplx v = trace_of_product(copy_shift_operator(), big.matrix());
  if (std::abs(v.imag()) > 1e-10) {
    throw NumericalError("copy_shift_check: imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

/// sum_{i=1..3} sigma_i (x) sigma_i on qubits p and q of a 4-qubit register.
inline ComplexMatrix spin_dot(int p, int q) {
  ComplexMatrix out = ComplexMatrix::Zero(16, 16);
  for (int i = 1; i <= 3; ++i) {
    std::array<ComplexMatrix, 4> f;
    for (int s = 0; s < 4; ++s) f[static_cast<std::size_t>(s)] = ComplexMatrix::Identity(2, 2);
    f[static_cast<std::size_t>(p)] = pauli(i);
    f[static_cast<std::size_t>(q)] = pauli(i);
    out += kron_all(f);
  }
  return out;
}

/// 1/4 (1 + s X + s Y + X Y) with X, Y the spin dots on (1,2) and (3,4).
/// s = +1 gives S_34 S_12; s = -1 gives 4 P-_12 P-_34.
inline ComplexMatrix shift_prime_pauli_form(int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("shift_prime_pauli_form: sign must be +-1");
  const ComplexMatrix x = spin_dot(0, 1);
  const ComplexMatrix y = spin_dot(2, 3);
  const ComplexMatrix one = ComplexMatrix::Identity(16, 16);
  return 0.25 * (one + double(sign) * x + double(sign) * y + x * y);
}

/// Projector onto the singlet |Psi-> on two qubits.
inline ComplexMatrix singlet_projector() { return singlet().matrix(); }

/// V = 2 I - 4 P- (equals twice the swap).
inline ComplexMatrix v_operator() {
  return 2.0 * ComplexMatrix::Identity(4, 4) - 4.0 * singlet_projector();
}

/// Tr[S_{a2b1} V_{a1a2} V_{b1b2} S_{a2b1} (rho1 (x) rho2)]; equals 4 Tr(rho1 rho2).
inline double overlap_operator_expectation(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != 4 || rho2.dim() != 4) {
    throw ValidationError("overlap_operator_expectation: two-qubit states required");
  }
  const auto joint = tensor(rho1, rho2);
  const ComplexMatrix s = swap_operator(4, 1, 2);
  const ComplexMatrix vv = Eigen::kroneckerProduct(v_operator(), v_operator()).eval();
  return (s * vv * s * joint.matrix()).trace().real();
}

enum class PairObservable {
  one_minus_4p,  ///< 1 - 4P- = sum_{i=1..3} sigma_i sigma_i
  v              ///< 2 - 4P- = sum_{i=0..3} sigma_i sigma_i
};

/// Tr[(rho1 (x) rho2) sigma_m (x) O (x) sigma_k] with O on modes b1, a2.
inline double singlet_product_rule(const DensityMatrix& rho1, const DensityMatrix& rho2, int m,
                                   int k, PairObservable obs) {
  const ComplexMatrix o = obs == PairObservable::v
                              ? v_operator()
                              : ComplexMatrix(ComplexMatrix::Identity(4, 4) -
                                              4.0 * singlet_projector());
  const std::array<ComplexMatrix, 3> f{ComplexMatrix(pauli(m)), o, ComplexMatrix(pauli(k))};
  const ComplexMatrix op = kron_all(f);
  return (tensor(rho1, rho2).matrix() * op).trace().real();
}

/// sum_n R1_mn R2_nk, over n = 0..3 or only the spatial n = 1..3.
inline double bloch_product(const CorrelationMatrix& r1, const CorrelationMatrix& r2, int m,
                            int k, bool spatial_only) {
  double acc = 0.0;
  for (int n = spatial_only ? 1 : 0; n < 4; ++n) acc += r1(m, n) * r2(n, k);
  return acc;
}

/// Every trace word needed by the moments, from two independent routes.
struct OverlapSet {
  double o11 = 0.0;
  double o22 = 0.0;
  double o12 = 0.0;
  double o2_12 = 0.0;
  std::map<std::string, double> mixed;

  double word(const std::string& w) const {
    const auto it = mixed.find(w);
    if (it == mixed.end()) throw ValidationError("OverlapSet: unknown word " + w);
    return it->second;
  }
};

inline const std::vector<std::string>& overlap_words() {
  static const std::vector<std::string> words{"11",  "22",   "12",   "111",  "222",
                                              "112", "122",  "1111", "2222", "1112",
                                              "1222", "1122", "1212"};
  return words;
}

inline constexpr double kRouteAgreementTol = 1e-10;

inline OverlapSet overlap_set(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != 4 || rho2.dim() != 4) {
    throw ValidationError("overlap_set: two-qubit states required");
  }
  const auto r1 = to_correlation(rho1);
  const auto r2 = to_correlation(rho2);
  OverlapSet o;
  for (const auto& w : overlap_words()) {
    const double direct = matrix_word_trace(w, rho1, rho2);
    const double bloch = bloch_word_trace(w, r1, r2);
    if (std::abs(direct - bloch) > kRouteAgreementTol) {
      std::ostringstream os;
      os << "overlap_set: routes disagree on word " << w << " (" << direct << " vs " << bloch
         << ")";
      throw NumericalError(os.str());
    }
    o.mixed[w] = direct;
  }
  o.o11 = o.mixed["11"];
  o.o22 = o.mixed["22"];
  o.o12 = o.mixed["12"];
  o.o2_12 = o.mixed["1212"];
  return o;
}

/// Tr[(rho1 - rho2)^n] for n = 1..4.
struct MomentSet {
  double pi1 = 0.0;
  double pi2 = 0.0;
  double pi3 = 0.0;
  double pi4 = 0.0;
};

/// Moments expanded into trace words.
inline MomentSet moments(const OverlapSet& o) {
  MomentSet m;
  m.pi1 = 0.0;
  m.pi2 = o.o11 + o.o22 - 2.0 * o.o12;
  m.pi3 = o.word("111") - o.word("222") - 3.0 * o.word("112") + 3.0 * o.word("122");
  m.pi4 = o.word("1111") + o.word("2222") - 4.0 * o.word("1112") - 4.0 * o.word("1222") +
          4.0 * o.word("1122") + 2.0 * o.word("1212");
  return m;
}

inline MomentSet moments(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return moments(overlap_set(rho1, rho2));
}

/// Moments straight from powers of rho1 - rho2.
inline MomentSet moments_direct(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  detail::require_same_dim(rho1, rho2, "moments_direct");
  const ComplexMatrix l = rho1.matrix() - rho2.matrix();
  const ComplexMatrix l2 = l * l;
  MomentSet m;
  m.pi1 = l.trace().real();
  m.pi2 = l2.trace().real();
  m.pi3 = (l2 * l).trace().real();
  m.pi4 = (l2 * l2).trace().real();
  return m;
}

enum class RootPolicy {
  strict,   ///< roots must be real after cleanup; otherwise NumericalError
  lenient   ///< noisy moments: complex roots allowed, |lambda| used
};

struct QuarticSolution {
  std::array<cplx, 4> roots{};
  double trace_distance = 0.0;
  double max_imag = 0.0;
};

inline constexpr double kRootImagTol = 1e-7;
inline constexpr double kRootSnapTol = 1e-4;
inline constexpr double kRootClusterTol = 1e-3;
/// Pi2 below this (H < 1e-7) is read as a zero spectrum.
inline constexpr double kZeroSpectrumPi2 = 1e-14;

/// Coefficients (c0, c1, c2) of lambda^4 + c2 lambda^2 + c1 lambda + c0.
inline std::array<double, 3> characteristic_coefficients(const MomentSet& m) {
  const double det = 0.25 * (0.5 * m.pi2 * m.pi2 - m.pi4);
  return {det, -m.pi3 / 3.0, -0.5 * m.pi2};
}

/// Solves the characteristic quartic of rho1 - rho2 and returns 1/2 sum |lambda|.
inline QuarticSolution trace_distance_via_moments(const MomentSet& m,
                                                  RootPolicy policy = RootPolicy::strict) {
  if (!(std::isfinite(m.pi2) && std::isfinite(m.pi3) && std::isfinite(m.pi4))) {
    throw ValidationError("trace_distance_via_moments: non-finite moments");
  }
  if (m.pi2 < kZeroSpectrumPi2) {
    if (policy == RootPolicy::strict && m.pi2 < -kZeroSpectrumPi2) {
      throw NumericalError("trace_distance_via_moments: negative second moment " +
                           std::to_string(m.pi2));
    }
    return QuarticSolution{};
  }
  const auto c = characteristic_coefficients(m);
  Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
  comp(0, 3) = -c[0];
  comp(1, 3) = -c[1];
  comp(2, 3) = -c[2];
  Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
  QuarticSolution sol;
  const auto poly = [&](cplx z) { return ((z * z + c[2]) * z + c[1]) * z + c[0]; };
  const auto dpoly = [&](cplx z) { return (4.0 * z * z + 2.0 * c[2]) * z + c[1]; };
  for (int i = 0; i < 4; ++i) sol.roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  // Clusters: roots closer than kRootClusterTol to a neighbour (single linkage).
  std::array<int, 4> cluster{0, 1, 2, 3};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (std::abs(sol.roots[i] - sol.roots[j]) < kRootClusterTol) {
        const int from = cluster[j], to = cluster[i];
        for (auto& c : cluster)
          if (c == from) c = to;
      }
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < 4; ++j)
      if (cluster[j] == cluster[i]) members.push_back(j);
    if (members.size() == 1) {
      cplx z = sol.roots[i];
      for (int it = 0; it < 3; ++it) {
        const cplx d = dpoly(z);
        if (std::abs(d) < 1e-14) break;
        const cplx step = poly(z) / d;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        const cplx next = z - step;
        if (std::abs(poly(next)) >= std::abs(poly(z))) break;
        z = next;
      }
      sol.roots[i] = z;
    } else if (members.front() == i) {
      cplx mean = 0.0;
      double radius = 0.0;
      for (auto j : members) mean += sol.roots[j];
      mean /= double(members.size());
      for (auto j : members) radius = std::max(radius, std::abs(sol.roots[j] - mean));
      if (std::abs(mean.real()) > radius) {
        for (auto j : members) sol.roots[j] = cplx(mean.real(), 0.0);
      }
    }
  }
  for (auto& z : sol.roots)
    if (std::abs(z.imag()) < kRootSnapTol) z = cplx(z.real(), 0.0);
  cplx sum = 0.0;
  double half_abs = 0.0;
  for (const auto& z : sol.roots) {
    sum += z;
    sol.max_imag = std::max(sol.max_imag, std::abs(z.imag()));
    half_abs += 0.5 * (policy == RootPolicy::strict ? std::abs(z.real()) : std::abs(z));
  }
  if (policy == RootPolicy::strict) {
    if (sol.max_imag >= kRootImagTol) {
      std::ostringstream os;
      os << "trace_distance_via_moments: ill-conditioned moments, complex root with |Im| = "
         << sol.max_imag;
      throw NumericalError(os.str());
    }
    if (std::abs(sum) >= 1e-8) {
      std::ostringstream os;
      os << "trace_distance_via_moments: roots sum to " << std::abs(sum) << ", not 0";
      throw NumericalError(os.str());
    }
  }
  // Cauchy-Schwarz cap T <= sqrt(Pi2).
  sol.trace_distance = std::min(half_abs, std::sqrt(std::max(m.pi2, 0.0)));
  return sol;
}

/// E, G, H and T from overlaps alone; fidelity itself is not available here.
struct OverlapDistances {
  double subfidelity = 0.0;
  double superfidelity = 0.0;
  double hilbert_schmidt = 0.0;
  double trace_distance = 0.0;
};

inline constexpr double kOverlapRadicandClip = 1e-9;

inline OverlapDistances distances_from_overlaps(const OverlapSet& o, const MomentSet& m,
                                                RootPolicy policy = RootPolicy::strict) {
  OverlapDistances d;
  d.hilbert_schmidt = detail::clipped_sqrt(m.pi2, kOverlapRadicandClip, "H from overlaps");
  d.superfidelity =
      o.o12 + detail::clipped_sqrt((1.0 - o.o11) * (1.0 - o.o22), kOverlapRadicandClip,
                                   "G from overlaps");
  d.subfidelity = o.o12 + detail::clipped_sqrt(2.0 * (o.o12 * o.o12 - o.o2_12),
                                               kOverlapRadicandClip, "E from overlaps");
  d.trace_distance = trace_distance_via_moments(m, policy).trace_distance;
  return d;
}

inline OverlapDistances distances_from_overlaps(const DensityMatrix& rho1,
                                                const DensityMatrix& rho2) {
  const auto o = overlap_set(rho1, rho2);
  return distances_from_overlaps(o, moments(o));
}

}  // namespace qoverlap
