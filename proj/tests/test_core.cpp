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

#include "qoverlap/core.hpp"

using namespace qoverlap;
using Catch::Approx;

TEST_CASE("Pauli matrices square to identity and anticommute", "[core]") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  for (int i = 0; i < 4; ++i) CHECK((pauli(i) * pauli(i) - id).norm() < 1e-15);
  const cplx I(0, 1);
  CHECK((pauli(1) * pauli(2) - I * pauli(3)).norm() < 1e-15);
  CHECK((pauli(2) * pauli(3) - I * pauli(1)).norm() < 1e-15);
  CHECK((pauli(1) * pauli(2) + pauli(2) * pauli(1)).norm() < 1e-15);
  CHECK_THROWS_AS(pauli(4), ValidationError);
}

TEST_CASE("density matrix validation", "[core]") {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4) * 0.25;
  CHECK_NOTHROW(DensityMatrix::from_matrix(m));
  ComplexMatrix bad_trace = ComplexMatrix::Identity(4, 4) * 0.3;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad_trace), ValidationError);
  ComplexMatrix non_herm = m;
  non_herm(0, 1) = cplx(0.1, 0.0);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(non_herm), ValidationError);
  ComplexMatrix neg = ComplexMatrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(neg), PhysicsError);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(ComplexMatrix::Identity(3, 3) / 3.0), ValidationError);
}

TEST_CASE("correlation round trip", "[core]") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto rho = random_state(4, Ensemble::ginibre, s);
    const auto back = from_correlation(to_correlation(rho));
    CHECK((back.matrix() - rho.matrix()).norm() < 1e-13);
  }
  const auto r = to_correlation(maximally_mixed(4));
  CHECK(r(0, 0) == Approx(1.0));
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (m || n) CHECK(std::abs(r(m, n)) < 1e-15);
}

TEST_CASE("Bell state correlations", "[core]") {
  const auto r = to_correlation(bell_phi_plus());
  CHECK(r(1, 1) == Approx(1.0));
  CHECK(r(2, 2) == Approx(-1.0));
  CHECK(r(3, 3) == Approx(1.0));
  const auto s = to_correlation(singlet());
  for (int i = 1; i <= 3; ++i) CHECK(s(i, i) == Approx(-1.0));
}

TEST_CASE("partial trace of product and Bell states", "[core]") {
  const auto a = random_state(2, Ensemble::ginibre, 3);
  const auto b = random_state(2, Ensemble::pure, 4);
  const auto ab = tensor(a, b);
  CHECK((partial_trace(ab, Subsystem::first).matrix() - a.matrix()).norm() < 1e-14);
  CHECK((partial_trace(ab, Subsystem::second).matrix() - b.matrix()).norm() < 1e-14);
  const auto half = partial_trace(bell_phi_plus(), Subsystem::first);
  CHECK((half.matrix() - maximally_mixed(2).matrix()).norm() < 1e-15);
}

TEST_CASE("assemble follows the copy layout", "[core]") {
  const auto a = random_state(4, Ensemble::ginibre, 10);
  const auto b = random_state(4, Ensemble::ginibre, 11);
  const std::array<DensityMatrix, 2> st{a, b};
  const std::array<StateId, 2> order{StateId::second, StateId::first};
  const auto big = assemble(st, ModeLayout::from_states(order));
  CHECK(big.dim() == 16);
  CHECK((big.matrix() - tensor(b, a).matrix()).norm() < 1e-14);
  const std::array<StateId, 5> too_many{StateId::first, StateId::first, StateId::first,
                                        StateId::first, StateId::first};
  CHECK_THROWS_AS(ModeLayout::from_states(too_many), ValidationError);
}

TEST_CASE("swap operator is an involution that exchanges factors", "[core]") {
  const ComplexMatrix s = swap_operator(2, 0, 1);
  CHECK((s * s - ComplexMatrix::Identity(4, 4)).norm() < 1e-15);
  const auto a = random_state(2, Ensemble::ginibre, 1);
  const auto b = random_state(2, Ensemble::ginibre, 2);
  const ComplexMatrix ab = tensor(a, b).matrix();
  CHECK((s * ab * s - tensor(b, a).matrix()).norm() < 1e-14);
  CHECK((swap_modes(tensor(a, b), 0, 1).matrix() - tensor(b, a).matrix()).norm() < 1e-14);
  const ComplexMatrix s4 = swap_operator(4, 1, 3);
  CHECK((s4 * s4 - ComplexMatrix::Identity(16, 16)).norm() < 1e-14);
}

TEST_CASE("random states are valid and deterministic", "[core]") {
  for (auto e : {Ensemble::ginibre, Ensemble::pure, Ensemble::rank_constrained}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto r1 = random_state(4, e, s);
      const auto r2 = random_state(4, e, s);
      CHECK(r1.matrix() == r2.matrix());
      CHECK(std::abs(r1.matrix().trace() - cplx(1.0)) < 1e-12);
      CHECK(hermitian_eigenvalues(r1.matrix()).minCoeff() > -1e-12);
      if (e == Ensemble::pure) CHECK(r1.purity() == Approx(1.0).margin(1e-12));
    }
  }
  CHECK_FALSE(random_state(4, Ensemble::ginibre, 1).matrix() ==
              random_state(4, Ensemble::ginibre, 2).matrix());
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("random unitary is unitary", "[core]") {
  const auto u = random_unitary(4, 9);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm() < 1e-13);
}

TEST_CASE("hermitian square root squares back", "[core]") {
  const auto rho = random_state(4, Ensemble::ginibre, 5);
  const ComplexMatrix r = hermitian_sqrt(rho.matrix());
  CHECK((r * r - rho.matrix()).norm() < 1e-12);
}
