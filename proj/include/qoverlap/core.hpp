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

/// @file core.hpp
/// Dense complex-matrix substrate: Pauli basis, validated density matrices,
/// the Bloch/correlation-matrix representation of two-qubit states, and
/// multi-copy assembly in the canonical mode order a1 b1 a2 b2 ...
///
/// Mode k of an n-mode state is the k-th Kronecker factor, i.e. bit (n-1-k)
/// of a computational-basis index.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace qoverlap {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-9;
inline constexpr int kMaxCopies = 4;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: bad index, wrong dimension, inconsistent layout.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input does not describe a physical quantum state.
class PhysicsError : public Error {
 public:
  PhysicsError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// A numerical procedure left a residue larger than its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(Eigen::Index n) {
  int k = 0;
  while ((Eigen::Index{1} << k) < n) ++k;
  return k;
}

inline void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace detail

/// Eigenvalues (ascending) of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues are clipped at zero first, so rank-deficient inputs are fine.
inline ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Standard Pauli matrix sigma_m, m in 0..3 (sigma_0 = I, sigma_3 = diag(1,-1)).
inline Eigen::Matrix2cd pauli(int m) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd s;
  switch (m) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -1i, 1i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw ValidationError("pauli: index " + std::to_string(m) + " outside 0..3");
  }
  return s;
}

/// sigma_m (x) sigma_n on two qubits.
inline Eigen::Matrix4cd pauli_pair(int m, int n) {
  Eigen::Matrix4cd out = Eigen::kroneckerProduct(pauli(m), pauli(n)).eval();
  return out;
}

/// Kronecker product of an arbitrary list of square matrices, in order.
inline ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = Eigen::kroneckerProduct(out, f).eval();
  return out;
}

class DensityMatrix;

namespace detail {
struct DensityAccess;
}

/// Hermitian, unit-trace, positive-semidefinite matrix on 1..8 qubits.
class DensityMatrix {
 public:
  /// Validates every invariant; throws ValidationError or PhysicsError.
  static DensityMatrix from_matrix(ComplexMatrix m) {
    detail::require_square_finite(m, "DensityMatrix");
    const auto d = m.rows();
    if (!detail::is_power_of_two(d) || d < 2 || d > 256) {
      throw ValidationError("DensityMatrix: dimension " + std::to_string(d) +
                            " is not a power of two in 2..256");
    }
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) {
      std::ostringstream os;
      os << "DensityMatrix: not Hermitian (max |rho - rho^dagger| = " << herm << ")";
      throw ValidationError(os.str());
    }
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    const cplx tr = h.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
      std::ostringstream os;
      os << "DensityMatrix: trace " << tr.real() << " differs from 1";
      throw ValidationError(os.str());
    }
    const double min_ev = hermitian_eigenvalues(h).minCoeff();
    if (min_ev < -kPsdTol) {
      std::ostringstream os;
      os << "DensityMatrix: not positive semidefinite (min eigenvalue " << min_ev << ")";
      throw PhysicsError(os.str(), min_ev);
    }
    return DensityMatrix(std::move(h));
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  int qubits() const noexcept { return detail::log2_exact(m_.rows()); }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  friend struct detail::DensityAccess;

  ComplexMatrix m_;
};

namespace detail {
/// Wraps matrices that are valid by construction (tensor products,
/// permutations, partial traces of valid states) without re-diagonalizing.
struct DensityAccess {
  static DensityMatrix trusted(ComplexMatrix m) {
    return DensityMatrix(0.5 * (m + m.adjoint()));
  }
};
}  // namespace detail

/// Real 4x4 matrix R_mn = Tr(rho sigma_m (x) sigma_n) with R_00 = 1.
class CorrelationMatrix {
 public:
  static CorrelationMatrix from_entries(const Eigen::Matrix4d& r) {
    if (!r.allFinite()) throw ValidationError("CorrelationMatrix: non-finite entries");
    if (std::abs(r(0, 0) - 1.0) > kTraceTol) {
      throw ValidationError("CorrelationMatrix: R[0][0] must equal 1 (got " +
                            std::to_string(r(0, 0)) + ")");
    }
    Eigen::Matrix4d copy = r;
    copy(0, 0) = 1.0;
    return CorrelationMatrix(copy);
  }

  /// All-zero correlations: the maximally mixed two-qubit state.
  static CorrelationMatrix maximally_mixed() {
    Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
    r(0, 0) = 1.0;
    return CorrelationMatrix(r);
  }

  double operator()(int m, int n) const { return r_(m, n); }
  const Eigen::Matrix4d& entries() const noexcept { return r_; }

  bool within_bounds(double slack = 1e-12) const {
    return r_.cwiseAbs().maxCoeff() <= 1.0 + slack;
  }

 private:
  explicit CorrelationMatrix(const Eigen::Matrix4d& r) : r_(r) {}
  Eigen::Matrix4d r_;
};

inline CorrelationMatrix to_correlation(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw ValidationError("to_correlation: expected a two-qubit state (dim 4), got dim " +
                          std::to_string(rho.dim()));
  }
  Eigen::Matrix4d r;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const cplx v = (rho.matrix() * pauli_pair(m, n)).trace();
      if (std::abs(v.imag()) > kImagResidueTol) {
        throw ValidationError("to_correlation: imaginary expectation value " +
                              std::to_string(v.imag()) + " at (" + std::to_string(m) +
                              "," + std::to_string(n) + ")");
      }
      r(m, n) = v.real();
    }
  }
  return CorrelationMatrix::from_entries(r);
}

/// rho = 1/4 sum_mn R_mn sigma_m (x) sigma_n, validated as a density matrix.
inline DensityMatrix from_correlation(const CorrelationMatrix& r) {
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (r(m, n) != 0.0) rho += 0.25 * r(m, n) * pauli_pair(m, n);
  return DensityMatrix::from_matrix(std::move(rho));
}

enum class Subsystem { first, second };

/// Reduced single-qubit state of a two-qubit density matrix.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (rho.dim() != 4) {
    throw ValidationError("partial_trace: expected dim 4, got " + std::to_string(rho.dim()));
  }
  const auto& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        out(i, j) += keep == Subsystem::first ? m(2 * i + k, 2 * j + k)
                                              : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return detail::DensityAccess::trusted(std::move(out));
}

enum class StateId : int { first = 1, second = 2 };

inline int as_int(StateId s) { return static_cast<int>(s); }

/// One two-qubit copy in a multi-copy assembly.
struct CopySlot {
  StateId state = StateId::first;
  int copy_index = 0;

  friend bool operator==(const CopySlot&, const CopySlot&) = default;
};

/// Ordered copies; copy c owns modes 2c (a) and 2c+1 (b).
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<CopySlot> copies) : copies_(std::move(copies)) {
    if (copies_.size() > static_cast<std::size_t>(kMaxCopies)) {
      throw ValidationError("ModeLayout: " + std::to_string(copies_.size()) +
                            " copies exceed the limit of " + std::to_string(kMaxCopies));
    }
  }

  /// Layout from a colour list such as {1,1,2,2}; copy indices count per state.
  static ModeLayout from_states(std::span<const StateId> states) {
    std::vector<CopySlot> copies;
    int seen[3] = {0, 0, 0};
    for (StateId s : states) copies.push_back({s, seen[as_int(s)]++});
    return ModeLayout(std::move(copies));
  }

  const std::vector<CopySlot>& copies() const noexcept { return copies_; }
  int copy_count() const noexcept { return static_cast<int>(copies_.size()); }
  int mode_count() const noexcept { return 2 * copy_count(); }
  StateId state_of_copy(int c) const { return copies_.at(static_cast<std::size_t>(c)).state; }
  int count(StateId s) const {
    return static_cast<int>(std::count_if(copies_.begin(), copies_.end(),
                                          [s](const CopySlot& c) { return c.state == s; }));
  }

  friend bool operator==(const ModeLayout&, const ModeLayout&) = default;

 private:
  std::vector<CopySlot> copies_;
};

/// Tensor product of two-qubit states in layout order; states[id-1] supplies
/// every copy labelled with state id.
inline DensityMatrix assemble(std::span<const DensityMatrix> states, const ModeLayout& layout) {
  if (layout.copy_count() > kMaxCopies) {
    throw ValidationError("assemble: more than 4 copies would exceed 256 dimensions");
  }
  std::vector<ComplexMatrix> factors;
  factors.reserve(static_cast<std::size_t>(layout.copy_count()));
  for (const auto& slot : layout.copies()) {
    const auto idx = static_cast<std::size_t>(as_int(slot.state) - 1);
    if (idx >= states.size()) {
      throw ValidationError("assemble: layout refers to state " +
                            std::to_string(as_int(slot.state)) + " but only " +
                            std::to_string(states.size()) + " states were given");
    }
    if (states[idx].dim() != 4) {
      throw ValidationError("assemble: copies must be two-qubit states");
    }
    factors.push_back(states[idx].matrix());
  }
  return detail::DensityAccess::trusted(kron_all(factors));
}

namespace detail {

inline std::uint64_t swap_bits(std::uint64_t x, int p, int q) {
  const std::uint64_t bp = (x >> p) & 1U;
  const std::uint64_t bq = (x >> q) & 1U;
  if (bp != bq) x ^= (std::uint64_t{1} << p) | (std::uint64_t{1} << q);
  return x;
}

/// P A P^dagger for the permutation exchanging qubits i and j.
inline ComplexMatrix permute_qubits(const ComplexMatrix& a, int i, int j) {
  const int n = log2_exact(a.rows());
  const int p = n - 1 - i;
  const int q = n - 1 - j;
  const Eigen::Index d = a.rows();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
  for (Eigen::Index r = 0; r < d; ++r)
    perm[static_cast<std::size_t>(r)] =
        static_cast<Eigen::Index>(swap_bits(static_cast<std::uint64_t>(r), p, q));
  ComplexMatrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r)
      out(r, c) = a(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
  return out;
}

}  // namespace detail

/// Unitary that exchanges qubits (modes) i and j of an n-qubit register.
inline ComplexMatrix swap_operator(int n_qubits, int i, int j) {
  if (n_qubits < 1 || n_qubits > 8 || i < 0 || j < 0 || i >= n_qubits || j >= n_qubits) {
    throw ValidationError("swap_operator: invalid qubit indices");
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto c = static_cast<Eigen::Index>(
        detail::swap_bits(static_cast<std::uint64_t>(r), n_qubits - 1 - i, n_qubits - 1 - j));
    s(r, c) = 1.0;
  }
  return s;
}

inline DensityMatrix swap_modes(const DensityMatrix& rho, int i, int j) {
  const int n = rho.qubits();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw ValidationError("swap_modes: invalid mode pair (" + std::to_string(i) + "," +
                          std::to_string(j) + ") for " + std::to_string(n) + " modes");
  }
  return detail::DensityAccess::trusted(detail::permute_qubits(rho.matrix(), i, j));
}

enum class Ensemble { ginibre, pure, rank_constrained };

namespace detail {

inline ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(r, c) = cplx(re, im);
    }
  return g;
}

inline DensityMatrix random_state_from(int dim, Ensemble ensemble, std::mt19937_64& rng,
                                       int rank) {
  if (dim != 2 && dim != 4) {
    throw ValidationError("random_state: unsupported dimension " + std::to_string(dim));
  }
  int k = dim;
  if (ensemble == Ensemble::pure) k = 1;
  if (ensemble == Ensemble::rank_constrained) {
    if (rank < 1 || rank > dim) throw ValidationError("random_state: rank outside 1..dim");
    k = rank;
  }
  const ComplexMatrix g = gaussian_matrix(dim, k, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityAccess::trusted(std::move(rho));
}

}  // namespace detail

/// Random density matrix; Ginibre is the Hilbert-Schmidt measure G G^dagger / Tr.
inline DensityMatrix random_state(int dim, Ensemble ensemble, std::uint64_t seed, int rank = 2) {
  std::mt19937_64 rng(seed);
  return detail::random_state_from(dim, ensemble, rng, rank);
}

/// Haar-random unitary via QR of a complex Ginibre matrix with phase fix.
inline ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = detail::gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}

/// U rho U^dagger.
inline DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw ValidationError("conjugate: unitary dimension mismatch");
  }
  return detail::DensityAccess::trusted(u * rho.matrix() * u.adjoint());
}

/// Mixes a root seed with a task index (SplitMix64) for per-task RNG streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t task) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// |Phi+> <Phi+|.
inline DensityMatrix bell_phi_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return detail::DensityAccess::trusted(std::move(m));
}

/// |Psi-> <Psi-|, the singlet.
inline DensityMatrix singlet() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(1, 1) = m(2, 2) = 0.5;
  m(1, 2) = m(2, 1) = -0.5;
  return detail::DensityAccess::trusted(std::move(m));
}

inline DensityMatrix maximally_mixed(int dim) {
  if (!detail::is_power_of_two(dim) || dim < 2 || dim > 256) {
    throw ValidationError("maximally_mixed: bad dimension");
  }
  return detail::DensityAccess::trusted(ComplexMatrix::Identity(dim, dim) / dim);
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() * b.dim() > 256) throw ValidationError("tensor: dimension above 256");
  return detail::DensityAccess::trusted(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
}

}  // namespace qoverlap
