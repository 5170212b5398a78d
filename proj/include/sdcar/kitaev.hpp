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

#pragma once

// Kitaev chain in the particle/hole block basis of standard_space(L), and
// index sweeps between its ground-state projections.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdcar/z2_index.hpp"

namespace sdcar {

namespace tol {
inline constexpr double kSweepGap = 1e-6;
inline constexpr double kSelfDualBuild = 1e-12;
}  // namespace tol

enum class Boundary { open, periodic, antiperiodic };

inline std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::open: return "open";
    case Boundary::periodic: return "periodic";
    case Boundary::antiperiodic: return "antiperiodic";
  }
  return "open";
}

inline Boundary boundary_from_string(std::string_view s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  if (s == "antiperiodic") return Boundary::antiperiodic;
  throw DimensionError("unknown boundary condition '" + std::string(s) + "'");
}

struct KitaevParams {
  std::size_t sites = 2;
  double t = 1.0;
  double delta = 1.0;
  double mu = 0.0;
  Boundary boundary = Boundary::open;

  void validate() const {
    if (sites < 2) throw DimensionError("Kitaev chain needs L >= 2");
    if (!std::isfinite(t) || !std::isfinite(delta) || !std::isfinite(mu))
      throw InvariantError("Kitaev parameters must be finite");
  }
};

class SelfDualHamiltonian {
 public:
  static SelfDualHamiltonian make(SelfDualSpace space, Mat k) {
    detail::throw_if_invalid(validate_hamiltonian(space, k), "not a self-dual Hamiltonian");
    return SelfDualHamiltonian(std::move(space), std::move(k));
  }

  const SelfDualSpace& space() const { return space_; }
  const Mat& matrix() const { return matrix_; }

 private:
  SelfDualHamiltonian(SelfDualSpace space, Mat k) : space_(std::move(space)), matrix_(std::move(k)) {}
  SelfDualSpace space_;
  Mat matrix_;
};

/// K = [[h, d], [-conj d, -conj h]] with nearest-neighbour hopping -t, pairing
/// Δ and on-site -μ; wrap bonds carry +1 / -1 for periodic / antiperiodic.
inline SelfDualHamiltonian build_kitaev(const KitaevParams& p) {
  p.validate();
  const auto l = static_cast<Eigen::Index>(p.sites);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(l, l);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(l, l);
  for (Eigen::Index i = 0; i < l; ++i) h(i, i) = -p.mu;
  for (Eigen::Index j = 0; j + 1 < l; ++j) {
    h(j + 1, j) += -p.t;
    h(j, j + 1) += -p.t;
    d(j + 1, j) += p.delta;
    d(j, j + 1) -= p.delta;
  }
  if (p.boundary != Boundary::open) {
    const double s = p.boundary == Boundary::periodic ? 1.0 : -1.0;
    h(0, l - 1) += -p.t * s;
    h(l - 1, 0) += -p.t * s;
    d(0, l - 1) += p.delta * s;
    d(l - 1, 0) -= p.delta * s;
  }
  Mat k(2 * l, 2 * l);
  k << h.cast<cplx>(), d.cast<cplx>(), -d.cast<cplx>(), -h.cast<cplx>();
  return SelfDualHamiltonian::make(SelfDualSpace::standard(p.sites), std::move(k));
}

/// Distance of the spectrum of K from zero.
inline double spectral_gap(const SelfDualHamiltonian& h) {
  return hermitian_eigen(h.matrix()).eigenvalues().cwiseAbs().minCoeff();
}

/// Negative spectral projection; throws ZeroModeError below 1e-8.
inline BasisProjection ground_state_projection(const SelfDualHamiltonian& h) {
  return projection_from_hamiltonian(h.space(), h.matrix());
}

struct SweepRow {
  KitaevParams a;
  KitaevParams b;
  double gap = 0.0;                   // min of the two spectral gaps
  std::optional<IndexReport> report;  // absent when the point was refused
  std::string status = "ok";
};

inline SweepRow sweep_point(const KitaevParams& a, const KitaevParams& b) {
  SweepRow row{a, b, 0.0, std::nullopt, "ok"};
  try {
    const auto ha = build_kitaev(a);
    const auto hb = build_kitaev(b);
    row.gap = std::min(spectral_gap(ha), spectral_gap(hb));
    if (row.gap < tol::kSweepGap) {
      row.status = "gap_closed";
      return row;
    }
    row.report = index_report(ground_state_projection(ha), ground_state_projection(hb));
  } catch (const ZeroModeError&) {
    row.status = "zero_mode";
  } catch (const Error& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

/// One row per pair, in input order; failures stay in their row.
inline std::vector<SweepRow> sweep(const std::vector<std::pair<KitaevParams, KitaevParams>>& grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& [a, b] : grid) rows.push_back(sweep_point(a, b));
  return rows;
}

/// `steps` equally spaced μ values from lo to hi inclusive, each paired across two boundaries.
inline std::vector<std::pair<KitaevParams, KitaevParams>> mu_grid(KitaevParams base, double lo, double hi, std::size_t steps,
                                                                 Boundary first, Boundary second) {
  if (steps == 0) throw DimensionError("mu grid needs at least one step");
  std::vector<std::pair<KitaevParams, KitaevParams>> grid;
  for (std::size_t k = 0; k < steps; ++k) {
    const double mu = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    KitaevParams a = base, b = base;
    a.mu = b.mu = mu;
    a.boundary = first;
    b.boundary = second;
    grid.emplace_back(a, b);
  }
  return grid;
}

}  // namespace sdcar
