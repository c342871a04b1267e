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

#include <array>

#include <catch2/catch_amalgamated.hpp>

#include "qoverlap/overlap.hpp"

using namespace qoverlap;
using Catch::Approx;

namespace {

std::pair<DensityMatrix, DensityMatrix> pair_for(std::uint64_t root, std::uint64_t i) {
  return {random_state(4, Ensemble::ginibre, derive_seed(root, 2 * i)),
          random_state(4, Ensemble::ginibre, derive_seed(root, 2 * i + 1))};
}

}  // namespace

TEST_CASE("Pauli structure constants reproduce products", "[overlap]") {
  for (int i = 0; i < 4; ++i)
    for (int m = 0; m < 4; ++m) {
      ComplexMatrix acc = ComplexMatrix::Zero(2, 2);
      for (int k = 0; k < 4; ++k) acc += pauli_structure(i, m, k) * pauli(k);
      CHECK((acc - pauli(i) * pauli(m)).norm() < 1e-15);
    }
  CHECK(levi_civita(1, 2, 3) == 1.0);
  CHECK(levi_civita(2, 1, 3) == -1.0);
  CHECK(levi_civita(1, 1, 3) == 0.0);
  CHECK(delta3(2, 2) == 1.0);
  CHECK(delta3(0, 0) == 0.0);
}

TEST_CASE("first-order overlap from correlations", "[overlap]") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto [a, b] = pair_for(21, s);
    CHECK(overlap_first(to_correlation(a), to_correlation(b)) ==
          Approx(overlap(a, b)).margin(1e-12));
  }
}

TEST_CASE("second-order overlap from the A tensors", "[overlap]") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto [a, b] = pair_for(22, s);
    CHECK(overlap_second(a, b) == Approx(overlap2(a, b)).margin(1e-12));
  }
  CHECK(overlap_second(bell_phi_plus(), maximally_mixed(4)) == Approx(1.0 / 16.0).margin(1e-14));
}

TEST_CASE("A tensor contributions add up to the second-order overlap", "[overlap]") {
  const auto r = to_correlation(maximally_mixed(4));
  const auto c = a_tensor_contributions(r, r);
  CHECK(std::abs(c[0] + c[1] + c[2] + c[3] - cplx(1.0 / 64.0)) < 1e-15);
  const auto [a, b] = pair_for(33, 0);
  const auto d = a_tensor_contributions(to_correlation(a), to_correlation(b));
  CHECK(std::abs(d[0] + d[1] + d[2] + d[3] - cplx(overlap2(a, b))) < 1e-13);
}

TEST_CASE("shift operator on two copies of the product", "[overlap]") {
  const auto& s = shift_operator();
  CHECK(s.rows() == 16);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto [a, b] = pair_for(23, i);
    CHECK(shift_operator_check(a, b) == Approx(overlap2(a, b)).margin(1e-12));
  }
}

TEST_CASE("copy-level shift on four stacked copies", "[overlap]") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto [a, b] = pair_for(24, i);
    CHECK(copy_shift_check(a, b) == Approx(overlap2(a, b)).margin(1e-12));
  }
}

TEST_CASE("copy shift needs the 1,2,2,1 arrangement", "[overlap]") {
  const auto [a, b] = pair_for(25, 0);
  const std::array<DensityMatrix, 2> st{a, b};
  const std::array<StateId, 4> alt{StateId::first, StateId::second, StateId::first,
                                   StateId::second};
  const auto big = assemble(st, ModeLayout::from_states(alt));
  const double v = trace_of_product(copy_shift_operator(), big.matrix()).real();
  const double o1122 = matrix_word_trace("1122", a, b);
  CHECK(v == Approx(o1122).margin(1e-12));
  CHECK(std::abs(v - overlap2(a, b)) > 1e-6);
}

TEST_CASE("Pauli form of the two-pair shift", "[overlap]") {
  const ComplexMatrix plus = shift_prime_pauli_form(1);
  const ComplexMatrix s = swap_operator(4, 2, 3) * swap_operator(4, 0, 1);
  CHECK((plus - s).norm() < 1e-13);
  const ComplexMatrix p = singlet_projector();
  const ComplexMatrix pp = 4.0 * Eigen::kroneckerProduct(p, p).eval();
  CHECK((shift_prime_pauli_form(-1) - pp).norm() < 1e-13);
  CHECK_THROWS_AS(shift_prime_pauli_form(0), ValidationError);
}

TEST_CASE("singlet projection gives the spatial product, V the full one", "[overlap]") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto [a, b] = pair_for(26, s);
    const auto r1 = to_correlation(a), r2 = to_correlation(b);
    for (int m = 0; m < 4; ++m)
      for (int k = 0; k < 4; ++k) {
        CHECK(singlet_product_rule(a, b, m, k, PairObservable::one_minus_4p) ==
              Approx(bloch_product(r1, r2, m, k, true)).margin(1e-12));
        CHECK(singlet_product_rule(a, b, m, k, PairObservable::v) ==
              Approx(bloch_product(r1, r2, m, k, false)).margin(1e-12));
      }
  }
}

TEST_CASE("overlap operator expectation is four times the overlap", "[overlap]") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto [a, b] = pair_for(27, s);
    CHECK(overlap_operator_expectation(a, b) == Approx(4.0 * overlap(a, b)).margin(1e-12));
  }
  CHECK_THROWS_AS(overlap_operator_expectation(maximally_mixed(2), maximally_mixed(2)),
                  ValidationError);
}

TEST_CASE("word traces agree between routes", "[overlap]") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto [a, b] = pair_for(28, s);
    const auto r1 = to_correlation(a), r2 = to_correlation(b);
    for (const auto& w : overlap_words())
      CHECK(bloch_word_trace(w, r1, r2) == Approx(matrix_word_trace(w, a, b)).margin(1e-12));
  }
}

TEST_CASE("moments from overlaps match direct powers", "[overlap][property]") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto [a, b] = pair_for(29, s);
    const auto m = moments(a, b);
    const auto d = moments_direct(a, b);
    CHECK(m.pi2 == Approx(d.pi2).margin(1e-12));
    CHECK(m.pi3 == Approx(d.pi3).margin(1e-12));
    CHECK(m.pi4 == Approx(d.pi4).margin(1e-12));
    CHECK(m.pi2 >= 0.0);
    CHECK(m.pi4 >= 0.0);
    CHECK(m.pi4 <= m.pi2 * m.pi2 + 1e-12);
  }
}

TEST_CASE("alternative fourth-moment sign pattern is not an identity", "[overlap]") {
  const auto [a, b] = pair_for(30, 0);
  const auto o = overlap_set(a, b);
  const double alt = o.word("1111") + o.word("2222") - 2.0 * o.word("1212") +
                     4.0 * o.word("1122") + 4.0 * (o.word("1222") - o.word("1112"));
  CHECK(std::abs(alt - moments_direct(a, b).pi4) > 1e-4);
}

TEST_CASE("trace distance through the characteristic polynomial", "[overlap][property]") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto [a, b] = pair_for(31, s);
    const auto q = trace_distance_via_moments(moments(a, b));
    CHECK(q.trace_distance == Approx(trace_distance(a, b)).margin(1e-9));
  }
}

TEST_CASE("degenerate spectra", "[overlap]") {
  SECTION("identical states") {
    const auto a = random_state(4, Ensemble::ginibre, 3);
    CHECK(trace_distance_via_moments(moments(a, a)).trace_distance ==
          Approx(0.0).margin(1e-7));
  }
  SECTION("orthogonal pure states") {
    CHECK(trace_distance_via_moments(moments(bell_phi_plus(), singlet())).trace_distance ==
          Approx(1.0).margin(1e-7));
  }
  SECTION("Bell against maximally mixed") {
    CHECK(trace_distance_via_moments(moments(bell_phi_plus(), maximally_mixed(4)))
              .trace_distance == Approx(0.75).margin(1e-7));
  }
  SECTION("commuting states with repeated eigenvalues") {
    ComplexMatrix d1 = ComplexMatrix::Zero(4, 4), d2 = ComplexMatrix::Zero(4, 4);
    d1.diagonal() << 0.4, 0.4, 0.1, 0.1;
    d2.diagonal() << 0.1, 0.1, 0.4, 0.4;
    const auto u = random_unitary(4, 5);
    const auto a = conjugate(DensityMatrix::from_matrix(d1), u);
    const auto b = conjugate(DensityMatrix::from_matrix(d2), u);
    CHECK(trace_distance_via_moments(moments(a, b)).trace_distance == Approx(0.6).margin(1e-7));
  }
}

TEST_CASE("distances from overlaps match the oracle", "[overlap]") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [a, b] = pair_for(32, s);
    const auto o = distances_from_overlaps(a, b);
    const auto d = distance_set(a, b);
    CHECK(o.trace_distance == Approx(d.trace_distance).margin(1e-9));
    CHECK(o.hilbert_schmidt == Approx(d.hilbert_schmidt).margin(1e-9));
    CHECK(o.subfidelity == Approx(d.subfidelity).margin(1e-9));
    CHECK(o.superfidelity == Approx(d.superfidelity).margin(1e-9));
  }
}
