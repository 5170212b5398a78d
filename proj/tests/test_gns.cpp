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
using namespace sdcar::testing;

namespace {

std::vector<int> random_indices(Rng& rng, int dim, std::size_t length) {
  std::vector<int> w;
  for (std::size_t k = 0; k < length; ++k) w.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(dim))));
  return w;
}

AlgebraElement random_element(Rng& rng, const SelfDualSpace& space, int terms) {
  AlgebraElement a;
  for (int t = 0; t < terms; ++t) a += rng.complex_normal() * normal_order(space, random_indices(rng, static_cast<int>(space.dim()), rng.index(4)));
  return a;
}

MonomialWord coordinate_word(const SelfDualSpace& space, const std::vector<int>& idx) { return MonomialWord::coordinates(space, idx); }

}  // namespace

TEST_CASE("canonical words", "[gns]") {
  auto w = CanonicalWord::from_indices({0, 2, 3});
  CHECK(w.mask() == 0b1101);
  CHECK(w.size() == 3);
  CHECK_FALSE(w.even());
  CHECK(w.indices() == std::vector<int>{0, 2, 3});
  CHECK_THROWS_AS(CanonicalWord::from_indices({2, 1}), DimensionError);
  CHECK_THROWS_AS(CanonicalWord::from_indices({1, 1}), DimensionError);
}

TEST_CASE("normal ordering examples", "[gns]") {
  auto space = standard_space(1);
  // B2 B1 = -B1 B2 + C_21
  auto a = normal_order(space, {1, 0});
  CHECK(a.terms().size() == 2);
  CHECK(a.coefficient(CanonicalWord::from_indices({0, 1})) == cplx(-1.0));
  CHECK(a.coefficient(CanonicalWord(0)) == cplx(1.0));
  // B1 B1 = C_11 / 2 = 0 on the standard space
  CHECK(normal_order(space, {0, 0}).is_zero());
  CHECK(normal_order(space, {}).coefficient(CanonicalWord(0)) == cplx(1.0));
  CHECK_THROWS_AS(normal_order(space, {2}), DimensionError);
  // canonical input is a fixed point
  auto s3 = standard_space(3);
  auto c = normal_order(s3, {0, 2, 5});
  CHECK(c.terms().size() == 1);
  CHECK(c.coefficient(CanonicalWord::from_indices({0, 2, 5})) == cplx(1.0));
}

TEST_CASE("rewriting preserves every state value", "[gns][property]") {
  // Moments of non-canonical words come straight from the pfaffian, which
  // never sees the rewriting rules.
  int checked = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    Rng rng(n, "rewrite");
    auto space = standard_space(n);
    auto state = QuasiFreeState(random_symbol(space, rng));
    auto fock = FockSpace::over(random_projection(space, rng));
    auto pure = state_from_projection(fock.projection());
    for (int k = 0; k < 170; ++k) {
      const auto idx = random_indices(rng, static_cast<int>(space.dim()), rng.index(7));
      const auto rewritten = normal_order(space, idx);
      CHECK(std::abs(expectation(state, rewritten) - moment(state, coordinate_word(space, idx))) < 1e-10);
      CHECK(std::abs(expectation(pure, rewritten) - vacuum_expectation(fock, coordinate_word(space, idx))) < 1e-10);
      ++checked;
    }
  }
  CHECK(checked >= 500);
}

TEST_CASE("rewriting on a rotated conjugation", "[gns][property]") {
  Rng rng(91, "rotated");
  auto space = rotated_space(2, rng);
  auto state = QuasiFreeState(random_symbol(space, rng));
  // B(e_i)^2 = C_ii / 2 need not vanish here
  auto sq = normal_order(space, {1, 1});
  CHECK(std::abs(sq.coefficient(CanonicalWord(0)) - 0.5 * space.gamma()(1, 1)) < 1e-14);
  for (int k = 0; k < 50; ++k) {
    const auto idx = random_indices(rng, 4, rng.index(7));
    CHECK(std::abs(expectation(state, normal_order(space, idx)) - moment(state, coordinate_word(space, idx))) < 1e-10);
  }
}

TEST_CASE("algebra laws", "[gns][property]") {
  Rng rng(5, "laws");
  auto space = standard_space(2);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_element(rng, space, 3), b = random_element(rng, space, 3), c = random_element(rng, space, 3);
    CHECK(distance(multiply(space, multiply(space, a, b), c), multiply(space, a, multiply(space, b, c))) < 1e-12);
    CHECK(distance(adjoint(space, adjoint(space, a)), a) < 1e-12);
    CHECK(distance(adjoint(space, multiply(space, a, b)), multiply(space, adjoint(space, b), adjoint(space, a))) < 1e-12);
  }
  // generator of a vector is antilinear and satisfies the CAR symbolically
  const Vec f = rng.vector(4), g = rng.vector(4);
  const auto bf = generator(space, f), bg = generator(space, g);
  const auto anti = multiply(space, bf, adjoint(space, bg)) + multiply(space, adjoint(space, bg), bf);
  CHECK(distance(anti, AlgebraElement::scalar(f.dot(g))) < 1e-12);
  CHECK(distance(adjoint(space, bf), generator(space, space.conjugate(f))) < 1e-12);
}

TEST_CASE("gram matrix of the n = 1 Fock state has rank 2", "[gns]") {
  auto state = state_from_projection(BasisProjection::standard(1));
  const Mat g = gram_matrix(state);
  REQUIRE(g.rows() == 4);
  CHECK(hermiticity_residual(g) < 1e-14);
  CHECK(numerical_rank(g, 1e-9) == 2);
  auto gns = gns_construct(state);
  CHECK(gns.rank == 2);
  CHECK(gns.kernel.cols() == 2);
  CHECK(std::abs(gns.cyclic_vector.norm() - 1.0) < 1e-12);
}

TEST_CASE("tracial state is faithful", "[gns]") {
  for (std::size_t n = 1; n <= 2; ++n) {
    auto gns = gns_construct(tracial_state(standard_space(n)));
    CHECK(gns.rank == (std::size_t{1} << (2 * n)));
    CHECK(gns.kernel.cols() == 0);
  }
}

TEST_CASE("GNS representation reproduces the state", "[gns][property]") {
  for (std::size_t n = 1; n <= 2; ++n) {
    Rng rng(n, "gnsstate");
    auto space = standard_space(n);
    auto state = QuasiFreeState(random_symbol(space, rng));
    auto gns = gns_construct(state);
    CHECK(gns.gram_min_eigenvalue > -1e-10);
    for (int k = 0; k < 20; ++k) {
      const auto a = random_element(rng, space, 3);
      const cplx via_rep = gns.cyclic_vector.dot(represent(gns, a) * gns.cyclic_vector);
      CHECK(std::abs(via_rep - expectation(state, a)) < 1e-9);
      const auto b = random_element(rng, space, 2);
      CHECK(max_abs(represent(gns, multiply(space, a, b)) - represent(gns, a) * represent(gns, b)) < 1e-9);
      CHECK(max_abs(represent(gns, adjoint(space, a)) - represent(gns, a).adjoint()) < 1e-9);
    }
  }
}

TEST_CASE("null ideal of a Fock state", "[gns]") {
  const std::size_t n = 2;
  auto space = standard_space(n);
  auto gns = gns_construct(state_from_projection(BasisProjection::standard(n)));
  const double tol = 1e-12;
  // rightmost factor an annihilator (index < n): in the kernel
  CHECK(gns.norm_squared(normal_order(space, {0})) < tol);
  CHECK(gns.norm_squared(normal_order(space, {3, 1})) < tol);
  CHECK(gns.norm_squared(normal_order(space, {2, 3, 0})) < tol);
  // leftmost factor a creator: zero expectation, but not in the kernel
  auto state = state_from_projection(BasisProjection::standard(n));
  CHECK(std::abs(expectation(state, normal_order(space, {2, 3}))) < tol);
  CHECK(std::abs(expectation(state, normal_order(space, {3, 0, 1}))) < tol);
  // pure creator words are not in the kernel
  CHECK(gns.norm_squared(normal_order(space, {2})) > 0.5);
  CHECK(gns.norm_squared(normal_order(space, {2, 3})) > 0.5);
  CHECK(gns.norm_squared(normal_order(space, {3, 2})) > 0.5);
}

TEST_CASE("GNS of Fock states matches the Fock representation", "[gns]") {
  for (std::size_t n = 1; n <= 3; ++n) {
    Rng rng(n, "intertwine");
    for (int k = 0; k < 2; ++k) {
      auto p = k == 0 ? BasisProjection::standard(n) : random_projection(standard_space(n), rng);
      auto gns = gns_construct(state_from_projection(p));
      CHECK(gns.rank == (std::size_t{1} << n));
      CHECK(gns.well_definedness_residual < 1e-9);
      auto fs = FockSpace::over(p);
      auto u = intertwiner_to_fock(p, gns, fs);
      CHECK(u.unitarity_residual < 1e-9);
      CHECK(u.vacuum_residual < 1e-9);
      CHECK(u.intertwining_residual < 1e-9);
      auto split = gns_parity_split(gns, u, fs);
      CHECK(split.even_dim == (std::size_t{1} << (n - 1)));
      CHECK(split.odd_dim == (std::size_t{1} << (n - 1)));
      CHECK(split.complement_residual < 1e-9);
      CHECK(split.block_residual < 1e-9);
      CHECK(split.even_unitarity_residual < 1e-9);
      CHECK(split.odd_unitarity_residual < 1e-9);
      CHECK(split.invariance_residual < 1e-9);
    }
  }
}

TEST_CASE("GNS size limit", "[gns]") {
  CHECK_THROWS_AS(gram_matrix(tracial_state(standard_space(5))), SizeLimitError);
}
