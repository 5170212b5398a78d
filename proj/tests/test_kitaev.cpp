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

#include <bit>

using namespace sdcar;
using namespace sdcar::testing;

namespace {

/// Many-body oracle: Jordan-Wigner fermions on L sites, H = -1/2 Ψ^* K Ψ with
/// Ψ = (c_0..c_{L-1}, c*_0..c*_{L-1}), applied directly on occupation bitmasks.
struct ManyBody {
  int sites = 0;
  Vec ground;
  double split = 0.0;  // gap above the ground state
  int parity = 1;

  /// Ψ_i v.
  Vec apply(int i, const Vec& v) const {
    Vec out = Vec::Zero(v.size());
    const int site = i % sites;
    const bool create = i >= sites;
    for (Eigen::Index b = 0; b < v.size(); ++b) {
      const auto bits = static_cast<unsigned>(b);
      const bool occupied = (bits >> site & 1U) != 0;
      if (occupied == create || v(b) == cplx(0.0)) continue;
      const int below = std::popcount(bits & ((1U << site) - 1U));
      out(static_cast<Eigen::Index>(bits ^ (1U << site))) += (below % 2 == 0 ? 1.0 : -1.0) * v(b);
    }
    return out;
  }
  int dual(int i) const { return i < sites ? i + sites : i - sites; }  // Ψ_i^* = Ψ_dual(i)
};

ManyBody many_body(const SelfDualHamiltonian& h) {
  ManyBody mb;
  mb.sites = static_cast<int>(h.space().modes());
  const Eigen::Index dim = Eigen::Index{1} << mb.sites;
  const Mat& k = h.matrix();
  Mat ham = Mat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const Vec e = Vec::Unit(dim, b);
    for (int c = 0; c < 2 * mb.sites; ++c) {
      const Vec right = mb.apply(c, e);
      if (right.isZero()) continue;
      for (int a = 0; a < 2 * mb.sites; ++a)
        if (k(a, c) != cplx(0.0)) ham.col(b) += -0.5 * k(a, c) * mb.apply(mb.dual(a), right);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(ham);
  mb.ground = eig.eigenvectors().col(0);
  mb.split = eig.eigenvalues()(1) - eig.eigenvalues()(0);
  double even = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b)
    if (std::popcount(static_cast<unsigned>(b)) % 2 == 0) even += std::norm(mb.ground(b));
  mb.parity = even > 0.5 ? 1 : -1;
  return mb;
}

KitaevParams chain(double mu, Boundary bc, std::size_t l = 8) {
  KitaevParams p;
  p.sites = l;
  p.t = 1.0;
  p.delta = 1.0;
  p.mu = mu;
  p.boundary = bc;
  return p;
}

}  // namespace

TEST_CASE("two-site open chain without pairing", "[kitaev]") {
  KitaevParams p;
  p.sites = 2;
  p.t = 1.0;
  p.delta = 0.0;
  p.mu = 0.0;
  const auto h = build_kitaev(p);
  Mat want = Mat::Zero(4, 4);
  want(0, 1) = want(1, 0) = -1.0;
  want(2, 3) = want(3, 2) = 1.0;
  CHECK(h.matrix() == want);
}

TEST_CASE("Kitaev Hamiltonians are self-dual", "[kitaev][property]") {
  Rng rng(1, "kitaev");
  for (int k = 0; k < 20; ++k) {
    KitaevParams p;
    p.sites = 2 + rng.index(8);
    p.t = rng.uniform(-2, 2);
    p.delta = rng.uniform(-2, 2);
    p.mu = rng.uniform(-4, 4);
    p.boundary = static_cast<Boundary>(rng.index(3));
    const auto h = build_kitaev(p);
    CHECK(hermiticity_residual(h.matrix()) <= 1e-12);
    CHECK(max_abs(h.space().conjugate_operator(h.matrix()) + h.matrix()) <= 1e-12);
  }
}

TEST_CASE("spectrum is symmetric about zero", "[kitaev]") {
  const auto h = build_kitaev(chain(0.0, Boundary::periodic));
  const RealVec ev = hermitian_eigen(h.matrix()).eigenvalues();
  CHECK((ev + ev.reverse()).cwiseAbs().maxCoeff() < 1e-12);
  // t = Δ, μ = 0: flat bands at ±2
  CHECK((ev.cwiseAbs().array() - 2.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("ground projections", "[kitaev]") {
  // t = Δ, μ = 0 on an open chain carries two Majorana end modes at zero energy
  CHECK_THROWS_AS(ground_state_projection(build_kitaev(chain(0.0, Boundary::open, 2))), ZeroModeError);
  CHECK(spectral_gap(build_kitaev(chain(0.0, Boundary::open, 2))) < 1e-12);
  auto open = chain(0.5, Boundary::open, 2);
  auto p = ground_state_projection(build_kitaev(open));
  CHECK(validate(p).empty());
  CHECK(std::abs(p.matrix().trace() - cplx(2.0)) < 1e-12);

  KitaevParams zero;
  zero.sites = 3;
  zero.t = zero.delta = zero.mu = 0.0;
  CHECK_THROWS_AS(ground_state_projection(build_kitaev(zero)), ZeroModeError);

  for (double mu : {-3.0, -1.0, 0.5, 2.5}) {
    const auto h = build_kitaev(chain(mu, Boundary::antiperiodic));
    const auto q = ground_state_projection(h);
    CHECK(validate(q).empty());
    CHECK(max_abs(q.matrix() * h.matrix() - h.matrix() * q.matrix()) < 1e-8);
  }
}

TEST_CASE("parameter validation", "[kitaev]") {
  CHECK_THROWS_AS(build_kitaev(chain(0.0, Boundary::open, 1)), DimensionError);
  auto bad = chain(std::nan(""), Boundary::open);
  CHECK_THROWS_AS(build_kitaev(bad), InvariantError);
  CHECK_THROWS_AS(boundary_from_string("twisted"), DimensionError);
  CHECK(boundary_from_string("antiperiodic") == Boundary::antiperiodic);
}

TEST_CASE("many-body oracle fixes the expected indices", "[kitaev][oracle]") {
  for (double mu : {0.0, 3.0, -0.7, 1.3, -2.6, 4.0}) {
    const auto hp = build_kitaev(chain(mu, Boundary::periodic));
    const auto ha = build_kitaev(chain(mu, Boundary::antiperiodic));
    const auto mp = many_body(hp), ma = many_body(ha);
    REQUIRE(mp.split > 1e-6);
    REQUIRE(ma.split > 1e-6);
    // the many-body ground state is the quasi-free state of the negative projection
    const auto pp = ground_state_projection(hp);
    // <g, Ψ_i Ψ_j^* g> = <Ψ_i^* g, Ψ_j^* g>
    std::vector<Vec> starred;
    for (int i = 0; i < 16; ++i) starred.push_back(mp.apply(mp.dual(i), mp.ground));
    double two_point = 0.0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        two_point = std::max(two_point, std::abs(starred[static_cast<std::size_t>(i)].dot(starred[static_cast<std::size_t>(j)]) - pp.matrix()(i, j)));
    CHECK(two_point < 1e-9);
    const int oracle = mp.parity * ma.parity;
    CHECK(sigma_proj(pp, ground_state_projection(ha)) == oracle);
    if (mu == 0.0) CHECK(oracle == -1);
    if (mu == 3.0) CHECK(oracle == 1);
  }
}

TEST_CASE("sweep reports", "[kitaev]") {
  auto p = chain(0.4, Boundary::periodic);
  auto rows = sweep({{p, p}});
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].report);
  CHECK(rows[0].report->sigma_proj == 1);
  CHECK(rows[0].report->dim_intersection == 0);

  rows = sweep({{chain(0.0, Boundary::periodic), chain(0.0, Boundary::antiperiodic)},
                {chain(2.0, Boundary::periodic), chain(2.0, Boundary::antiperiodic)},
                {chain(3.0, Boundary::periodic), chain(3.0, Boundary::antiperiodic)}});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].report->sigma_proj == -1);
  CHECK(rows[0].report->lemma_consistent);
  CHECK_FALSE(rows[1].report.has_value());
  CHECK(rows[1].status == "gap_closed");
  CHECK(rows[1].a.mu == 2.0);
  CHECK(rows[2].report->sigma_proj == 1);

  KitaevParams zero = chain(0.0, Boundary::open, 3);
  zero.t = zero.delta = 0.0;
  rows = sweep({{zero, zero}});
  CHECK(rows[0].status == "gap_closed");
}

TEST_CASE("index is constant on each side of the critical line", "[kitaev][property]") {
  Rng rng(2026, "mu-grid");
  int checked = 0;
  while (checked < 30) {
    const double mu = rng.uniform(-4.0, 4.0);
    if (std::abs(std::abs(mu) - 2.0) < 0.05) continue;
    auto row = sweep_point(chain(mu, Boundary::periodic), chain(mu, Boundary::antiperiodic));
    REQUIRE(row.report);
    CHECK(row.report->sigma_proj == (std::abs(mu) < 2.0 ? -1 : 1));
    ++checked;
  }
}

TEST_CASE("ground projections move continuously", "[kitaev]") {
  for (double mu : {-1.0, 0.5, 3.0}) {
    double last = 1e9;
    for (double step : {0.1, 0.05, 0.025}) {
      auto a = ground_state_projection(build_kitaev(chain(mu, Boundary::periodic)));
      auto b = ground_state_projection(build_kitaev(chain(mu + step, Boundary::periodic)));
      const double d = hs_norm(a, b);
      CHECK(d < last);
      last = d;
    }
    CHECK(last < 0.1);
  }
}

TEST_CASE("mu grid", "[kitaev]") {
  auto grid = mu_grid(chain(0.0, Boundary::open), -4.0, 4.0, 50, Boundary::periodic, Boundary::antiperiodic);
  REQUIRE(grid.size() == 50);
  CHECK(grid.front().first.mu == -4.0);
  CHECK(grid.back().second.mu == 4.0);
  CHECK(grid[7].first.boundary == Boundary::periodic);
  CHECK(grid[7].second.boundary == Boundary::antiperiodic);
  CHECK_THROWS_AS(mu_grid(chain(0.0, Boundary::open), 0, 1, 0, Boundary::open, Boundary::open), DimensionError);
}
