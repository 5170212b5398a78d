/*
 * Copyright 2026 The sdcar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "support.hpp"

using namespace sdcar;
using sdcar::testing::rotated_space;
using Catch::Matchers::WithinAbs;

TEST_CASE("standard space conjugation swaps the halves", "[selfdual]") {
  auto space = standard_space(1);
  REQUIRE(space.dim() == 2);
  Vec e1 = Vec::Unit(2, 0);
  CHECK((space.conjugate(e1) - Vec::Unit(2, 1)).norm() == 0.0);
  CHECK(validate(space).empty());

  Rng rng(11, "conjugate");
  auto s3 = standard_space(3);
  for (int k = 0; k < 20; ++k) {
    const Vec x = rng.vector(6);
    const cplx a = rng.complex_normal();
    CHECK(max_abs(s3.conjugate(a * x) - std::conj(a) * s3.conjugate(x)) < 1e-13);
    CHECK(max_abs(s3.conjugate(s3.conjugate(x)) - x) < 1e-13);
    // Γ is antiunitary: <Γx, Γy> = conj <x, y>.
    const Vec y = rng.vector(6);
    CHECK(std::abs(s3.conjugate(x).dot(s3.conjugate(y)) - std::conj(x.dot(y))) < 1e-12);
  }
}

TEST_CASE("space construction errors", "[selfdual]") {
  CHECK_THROWS_AS(standard_space(0), DimensionError);
  CHECK_THROWS_AS(SelfDualSpace::from_gamma(Mat::Identity(3, 3)), DimensionError);
  CHECK_THROWS_AS(SelfDualSpace::from_gamma(2.0 * Mat::Identity(2, 2)), InvariantError);
  // unitary but C conj(C) = -1: a quaternionic structure, not a conjugation.
  Mat j = Mat::Zero(2, 2);
  j(0, 1) = 1.0;
  j(1, 0) = -1.0;
  try {
    SelfDualSpace::from_gamma(j);
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    REQUIRE(e.report().size() == 1);
    CHECK(e.report()[0].invariant == "gamma_involution");
  }
}

TEST_CASE("validate names the broken projection identities", "[selfdual]") {
  auto space = standard_space(2);
  CHECK(validate(BasisProjection::standard(2)).empty());

  Mat not_dual = Mat::Zero(4, 4);
  not_dual(0, 0) = not_dual(2, 2) = 1.0;  // e1 and Γe1 both in range
  auto report = validate_projection(space, not_dual);
  REQUIRE(report.size() == 1);
  CHECK(report[0].invariant == "gamma_duality");

  Mat half = 0.5 * Mat::Identity(4, 4);
  report = validate_projection(space, half);
  REQUIRE(report.size() == 1);
  CHECK(report[0].invariant == "idempotent");
  CHECK_THROWS_AS(BasisProjection::make(space, half), InvariantError);
  CHECK_THROWS_AS(BasisProjection::make(space, Mat::Zero(3, 3)), DimensionError);

  const auto all = validate_projection(space, BasisProjection::standard(2).matrix(), true);
  CHECK(all.size() == 4);
}

TEST_CASE("symbols: tracial state and spectrum bounds", "[selfdual]") {
  auto space = standard_space(2);
  CHECK(validate_symbol(space, 0.5 * Mat::Identity(4, 4)).empty());
  auto report = validate_symbol(space, 1.5 * Mat::Identity(4, 4));
  bool spectrum = false;
  for (const auto& v : report) spectrum |= v.invariant == "spectrum_in_unit_interval";
  CHECK(spectrum);
}

TEST_CASE("random projections are basis projections", "[selfdual][property]") {
  for (std::size_t n = 1; n <= 6; ++n) {
    Rng rng(n, "random_projection");
    for (int k = 0; k < 10; ++k) {
      auto p = random_projection(standard_space(n), rng);
      CHECK(validate(p).empty());
      CHECK_THAT(p.matrix().trace().real(), WithinAbs(static_cast<double>(n), 1e-10));
    }
  }
}

TEST_CASE("ground projection commutes with its Hamiltonian", "[selfdual]") {
  Rng rng(3, "ground");
  auto space = standard_space(3);
  const Mat k = random_hamiltonian(space, rng);
  CHECK(validate_hamiltonian(space, k).empty());
  auto p = projection_from_hamiltonian(space, k);
  CHECK(max_abs(p.matrix() * k - k * p.matrix()) < 1e-8);
  // P K P is negative definite on range(P).
  const auto eig = hermitian_eigen(p.matrix() * k * p.matrix());
  CHECK(eig.eigenvalues().head(3).maxCoeff() < 0.0);
}

TEST_CASE("zero modes are rejected", "[selfdual]") {
  auto space = standard_space(2);
  CHECK_THROWS_AS(projection_from_hamiltonian(space, Mat::Zero(4, 4)), ZeroModeError);
  Mat k = Mat::Zero(4, 4);
  k(0, 0) = 1.0;
  k(2, 2) = -1.0;  // mode 2 has zero energy
  try {
    projection_from_hamiltonian(space, k);
    FAIL("expected ZeroModeError");
  } catch (const ZeroModeError& e) {
    CHECK(e.smallest_eigenvalue() == 0.0);
  }
  Mat not_self_dual = Mat::Identity(4, 4);
  CHECK_THROWS_AS(projection_from_hamiltonian(space, not_self_dual), InvariantError);
}

TEST_CASE("Bogoliubov transport preserves the structure", "[selfdual][property]") {
  for (std::size_t n = 1; n <= 4; ++n) {
    Rng rng(100 + n, "transport");
    auto space = standard_space(n);
    for (int k = 0; k < 10; ++k) {
      auto u = random_bogoliubov(space, rng);
      CHECK(validate(u).empty());
      CHECK(validate(transport_symbol(u, random_symbol(space, rng))).empty());
      CHECK(validate(transport_projection(u, random_projection(space, rng))).empty());
      // B(Uφ)* = B(ΓUφ) = B(UΓφ): U commutes with Γ on vectors.
      const Vec x = rng.vector(space.dim());
      CHECK(max_abs(space.conjugate(u.apply(x)) - u.apply(space.conjugate(x))) < 1e-12);
    }
  }
}

TEST_CASE("non-standard conjugations", "[selfdual]") {
  Rng rng(5, "rotated");
  auto space = rotated_space(3, rng);
  CHECK_FALSE(space.is_standard());
  CHECK(validate(space).empty());
  for (int k = 0; k < 5; ++k) CHECK(validate(random_projection(space, rng)).empty());
  CHECK(validate(random_symbol(space, rng)).empty());
}

TEST_CASE("flip_modes", "[selfdual]") {
  auto p = BasisProjection::standard(3);
  auto q = flip_modes(p, {0, 2});
  CHECK(q.matrix()(0, 0) == cplx(0.0));
  CHECK(q.matrix()(3, 3) == cplx(1.0));
  CHECK(q.matrix()(1, 1) == cplx(1.0));
  CHECK(validate(q).empty());
  CHECK(flip_modes(q, {0, 2}).matrix() == p.matrix());
  CHECK(flip_modes(p, {}).matrix() == p.matrix());
  CHECK_THROWS_AS(flip_modes(p, {3}), DimensionError);

  Rng rng(9, "flip");
  auto r = random_projection(standard_space(3), rng);
  CHECK_THROWS_AS(flip_modes(r, {0}), InvariantError);
  const Mat basis = mode_basis(r);
  auto f = flip_modes(r, {1}, basis);
  CHECK(validate(f).empty());
  auto back = flip_modes(f, {1}, flipped_basis(r, basis, {1}));
  CHECK(max_abs(back.matrix() - r.matrix()) < 1e-12);
  CHECK_THROWS_AS(flip_modes(r, {1}, Mat::Identity(6, 3)), InvariantError);
  CHECK_THROWS_AS(flip_modes(r, {1}, Mat::Identity(6, 2)), DimensionError);
}

TEST_CASE("seeded streams are reproducible and distinct", "[random]") {
  Rng a(42, "x"), b(42, "x"), c(42, "y");
  const double va = a.normal();
  CHECK(va == b.normal());
  CHECK(va != c.normal());
  Rng s1 = Rng(1).split(3), s2 = Rng(1).split(3), s3 = Rng(1).split(4);
  const double v1 = s1.uniform(0, 1);
  CHECK(v1 == s2.uniform(0, 1));
  CHECK(v1 != s3.uniform(0, 1));
}
