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

/// @file oracle.hpp
/// Spectral reference values for distances between density matrices.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qoverlap/core.hpp"

namespace qoverlap {

inline constexpr double kRadicandClip = 1e-12;
inline constexpr double kAuditSlack = 1e-9;
/// Radicands below this are rounding noise and read as zero.
inline constexpr double kRadicandZero = 1e-15;

namespace detail {

inline void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* fn) {
  if (a.dim() != b.dim()) {
    throw ValidationError(std::string(fn) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

/// sqrt of a radicand that may carry rounding noise; throws beyond `clip`.
inline double clipped_sqrt(double x, double clip, const char* what) {
  if (x >= kRadicandZero) return std::sqrt(x);
  if (x >= 0.0) return 0.0;
  if (x >= -clip) return 0.0;
  std::ostringstream os;
  os << what << ": negative radicand " << x;
  throw NumericalError(os.str());
}

}  // namespace detail

/// Tr(rho1 rho2).
inline double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "overlap");
  return (a.matrix() * b.matrix()).trace().real();
}

/// Tr[(rho1 rho2)^2].
inline double overlap2(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "overlap2");
  const ComplexMatrix x = a.matrix() * b.matrix();
  return (x * x).trace().real();
}

inline double linear_entropy(const DensityMatrix& rho) { return 1.0 - rho.purity(); }

inline constexpr double kRankTol = 1e-14;

namespace detail {

/// F with rho = F F^dagger, dropping eigenvalues at or below kRankTol.
inline ComplexMatrix psd_factor(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > kRankTol) keep.push_back(i);
  ComplexMatrix f(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    f.col(static_cast<Eigen::Index>(c)) =
        es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
  return f;
}

}  // namespace detail

/// Uhlmann-Jozsa fidelity [Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2, clipped to [0,1].
/// Evaluated as the squared nuclear norm of A^dagger B for rho1 = A A^dagger, rho2 = B B^dagger.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "fidelity");
  const ComplexMatrix fa = detail::psd_factor(a.matrix());
  const ComplexMatrix fb = detail::psd_factor(b.matrix());
  if (fa.cols() == 0 || fb.cols() == 0) return 0.0;
  const ComplexMatrix x = fa.adjoint() * fb;
  const double root = Eigen::JacobiSVD<ComplexMatrix>(x).singularValues().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "trace_distance");
  return 0.5 * hermitian_eigenvalues(a.matrix() - b.matrix()).cwiseAbs().sum();
}

inline double hilbert_schmidt(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "hilbert_schmidt");
  const ComplexMatrix d = a.matrix() - b.matrix();
  return detail::clipped_sqrt((d * d).trace().real(), kRadicandClip, "hilbert_schmidt");
}

struct FidelityBounds {
  double sub = 0.0;    ///< E
  double super = 0.0;  ///< G
};

/// E = O + sqrt(2[O^2 - O2]) and G = O + sqrt(S_L(rho1) S_L(rho2)).
inline FidelityBounds sub_super_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "sub_super_fidelity");
  const double o = overlap(a, b);
  const double o2 = overlap2(a, b);
  FidelityBounds fb;
  fb.sub = o + detail::clipped_sqrt(2.0 * (o * o - o2), kRadicandClip, "subfidelity");
  fb.super = o + detail::clipped_sqrt(linear_entropy(a) * linear_entropy(b), kRadicandClip,
                                      "superfidelity");
  return fb;
}

struct AuditLine {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool enforced = true;  ///< false: reported only, not a theorem for squared F
};

struct DistanceSet {
  double fidelity = 0.0;
  double sqrt_fidelity = 0.0;
  double bures_sq = 0.0;
  double trace_distance = 0.0;
  double hilbert_schmidt = 0.0;
  double subfidelity = 0.0;
  double superfidelity = 0.0;
  double linear_entropy_1 = 0.0;
  double linear_entropy_2 = 0.0;

  /// Checks every chain inequality with the given slack.
  std::vector<AuditLine> audit(double slack = kAuditSlack) const {
    const double f = fidelity;
    const double t = trace_distance;
    auto le = [slack](std::string name, double lhs, double rhs) {
      return AuditLine{std::move(name), lhs, rhs, lhs <= rhs + slack};
    };
    std::vector<AuditLine> out;
    out.push_back(le("E <= F", subfidelity, f));
    out.push_back(le("F <= G", f, superfidelity));
    out.push_back(le("1 - sqrt F <= T", 1.0 - sqrt_fidelity, t));
    out.push_back(le("T <= sqrt(1 - F)", t, std::sqrt(std::max(0.0, 1.0 - f))));
    out.push_back(le("T <= sqrt(1 - F^2)", t, std::sqrt(std::max(0.0, 1.0 - f * f))));
    auto root_form = le("1 - F <= T", 1.0 - f, t);
    root_form.enforced = false;
    out.push_back(root_form);
    out.push_back(le("0 <= H", 0.0, hilbert_schmidt));
    out.push_back(le("H <= 2T", hilbert_schmidt, 2.0 * t));
    const double db = 2.0 * (1.0 - sqrt_fidelity);
    out.push_back(AuditLine{"D_B^2 = 2(1 - sqrt F)", bures_sq, db,
                            std::abs(bures_sq - db) <= 1e-12});
    return out;
  }

  bool audit_passes(double slack = kAuditSlack) const {
    for (const auto& a : audit(slack))
      if (a.enforced && !a.pass) return false;
    return true;
  }
};

inline DistanceSet distance_set(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "distance_set");
  DistanceSet d;
  d.fidelity = fidelity(a, b);
  d.sqrt_fidelity = std::sqrt(d.fidelity);
  d.bures_sq = 2.0 * (1.0 - d.sqrt_fidelity);
  d.trace_distance = trace_distance(a, b);
  d.hilbert_schmidt = hilbert_schmidt(a, b);
  const auto fb = sub_super_fidelity(a, b);
  d.subfidelity = fb.sub;
  d.superfidelity = fb.super;
  d.linear_entropy_1 = linear_entropy(a);
  d.linear_entropy_2 = linear_entropy(b);
  return d;
}

}  // namespace qoverlap
