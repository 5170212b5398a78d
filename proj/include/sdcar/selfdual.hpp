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

// Self-dual one-particle data: the space (H, Γ), basis projections, symbols and
// Bogoliubov transformations.
//
// Γ is stored as a matrix C acting by x -> C conj(x). With that encoding
//   Γ A Γ      = C conj(A) C^*
//   A Γ = Γ A  <=>  A C = C conj(A)
// and every Γ-condition below is one of these closed matrix identities.

#include <algorithm>
#include <set>
#include <vector>

#include "sdcar/linalg.hpp"
#include "sdcar/random.hpp"

namespace sdcar {

namespace tol {
inline constexpr double kGamma = 1e-12;       // conjugation identities
inline constexpr double kStructure = 1e-10;   // projections, symbols, transforms
inline constexpr double kZeroMode = 1e-8;     // spectral floor for ground projections
}  // namespace tol

class SelfDualSpace {
 public:
  /// H = C^{2n} with Γ the block swap [[0, I], [I, 0]] followed by complex conjugation.
  static SelfDualSpace standard(std::size_t n) {
    if (n == 0) throw DimensionError("standard_space: mode count must be positive");
    const auto k = static_cast<Eigen::Index>(n);
    Mat c = Mat::Zero(2 * k, 2 * k);
    c.topRightCorner(k, k).setIdentity();
    c.bottomLeftCorner(k, k).setIdentity();
    return SelfDualSpace(std::move(c));
  }

  /// Throws InvariantError when `gamma` is not a unitary involutive conjugation.
  static SelfDualSpace from_gamma(Mat gamma);

  std::size_t modes() const { return static_cast<std::size_t>(gamma_.rows() / 2); }
  Eigen::Index dim() const { return gamma_.rows(); }
  const Mat& gamma() const { return gamma_; }

  Vec conjugate(const Vec& x) const { return gamma_ * x.conjugate(); }
  Mat conjugate_operator(const Mat& a) const { return gamma_ * a.conjugate() * gamma_.adjoint(); }

  bool operator==(const SelfDualSpace& other) const {
    return gamma_.rows() == other.gamma_.rows() && gamma_ == other.gamma_;
  }

  bool is_standard() const { return *this == standard(modes()); }

 private:
  explicit SelfDualSpace(Mat gamma) : gamma_(std::move(gamma)) {}
  Mat gamma_;
};

inline SelfDualSpace standard_space(std::size_t n) { return SelfDualSpace::standard(n); }

/// Validators return the broken identities; with keep_passing every measured residual.
inline ValidationReport validate_gamma(const Mat& gamma, bool keep_passing = false) {
  if (gamma.rows() != gamma.cols() || gamma.rows() == 0 || gamma.rows() % 2 != 0) {
    throw DimensionError("self-dual space needs a square conjugation matrix of even positive size");
  }
  ValidationReport report;
  double r = unitarity_residual(gamma);
  if (keep_passing || r > tol::kGamma) report.push_back({"gamma_unitary", r, tol::kGamma});
  r = max_abs(gamma * gamma.conjugate() - Mat::Identity(gamma.rows(), gamma.cols()));
  if (keep_passing || r > tol::kGamma) report.push_back({"gamma_involution", r, tol::kGamma});
  return report;
}

inline SelfDualSpace SelfDualSpace::from_gamma(Mat gamma) {
  auto report = validate_gamma(gamma);
  if (!report.empty()) throw InvariantError("invalid conjugation: " + describe(report), report);
  return SelfDualSpace(std::move(gamma));
}

inline ValidationReport validate(const SelfDualSpace& space) { return validate_gamma(space.gamma()); }

inline ValidationReport validate_projection(const SelfDualSpace& space, const Mat& p, bool keep_passing = false) {
  require_square(p, space.dim(), "basis projection");
  ValidationReport report;
  const Mat id = Mat::Identity(space.dim(), space.dim());
  double r = hermiticity_residual(p);
  if (keep_passing || r > tol::kStructure) report.push_back({"hermitian", r, tol::kStructure});
  r = max_abs(p * p - p);
  if (keep_passing || r > tol::kStructure) report.push_back({"idempotent", r, tol::kStructure});
  r = max_abs(space.conjugate_operator(p) - (id - p));
  if (keep_passing || r > tol::kStructure) report.push_back({"gamma_duality", r, tol::kStructure});
  r = std::abs(p.trace() - cplx(static_cast<double>(space.modes()), 0.0));
  if (keep_passing || r > tol::kStructure) report.push_back({"trace_equals_n", r, tol::kStructure});
  return report;
}

inline ValidationReport validate_symbol(const SelfDualSpace& space, const Mat& s, bool keep_passing = false) {
  require_square(s, space.dim(), "symbol");
  ValidationReport report;
  const Mat id = Mat::Identity(space.dim(), space.dim());
  double r = hermiticity_residual(s);
  if (keep_passing || r > tol::kStructure) report.push_back({"hermitian", r, tol::kStructure});
  const RealVec ev = hermitian_eigen(s).eigenvalues();
  r = std::max({0.0, -ev.minCoeff(), ev.maxCoeff() - 1.0});
  if (keep_passing || r > tol::kStructure) report.push_back({"spectrum_in_unit_interval", r, tol::kStructure});
  r = max_abs(s + space.conjugate_operator(s) - id);
  if (keep_passing || r > tol::kStructure) report.push_back({"gamma_duality", r, tol::kStructure});
  return report;
}

inline ValidationReport validate_bogoliubov(const SelfDualSpace& space, const Mat& u, bool keep_passing = false) {
  require_square(u, space.dim(), "Bogoliubov transform");
  ValidationReport report;
  double r = unitarity_residual(u);
  if (keep_passing || r > tol::kStructure) report.push_back({"unitary", r, tol::kStructure});
  r = max_abs(u * space.gamma() - space.gamma() * u.conjugate());
  if (keep_passing || r > tol::kStructure) report.push_back({"commutes_with_gamma", r, tol::kStructure});
  return report;
}

/// K Hermitian with Γ K Γ = -K.
inline ValidationReport validate_hamiltonian(const SelfDualSpace& space, const Mat& k, bool keep_passing = false) {
  require_square(k, space.dim(), "self-dual Hamiltonian");
  ValidationReport report;
  double r = hermiticity_residual(k);
  if (keep_passing || r > tol::kStructure) report.push_back({"hermitian", r, tol::kStructure});
  r = max_abs(space.conjugate_operator(k) + k);
  if (keep_passing || r > tol::kStructure) report.push_back({"self_dual", r, tol::kStructure});
  return report;
}

namespace detail {

template <typename Derived>
class SpaceOperator {
 public:
  const SelfDualSpace& space() const { return space_; }
  const Mat& matrix() const { return matrix_; }

 protected:
  SpaceOperator(SelfDualSpace space, Mat matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {}

 private:
  SelfDualSpace space_;
  Mat matrix_;
};

inline void throw_if_invalid(const ValidationReport& report, const char* what) {
  if (!report.empty()) throw InvariantError(std::string(what) + ": " + describe(report), report);
}

}  // namespace detail

/// Orthogonal projection P with Γ P Γ = 1 - P.
class BasisProjection : public detail::SpaceOperator<BasisProjection> {
 public:
  static BasisProjection make(SelfDualSpace space, Mat p) {
    detail::throw_if_invalid(validate_projection(space, p), "not a basis projection");
    return BasisProjection(std::move(space), std::move(p));
  }

  /// diag(I_n, 0) on the standard space.
  static BasisProjection standard(std::size_t n) {
    auto space = SelfDualSpace::standard(n);
    Mat p = Mat::Zero(space.dim(), space.dim());
    p.topLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).setIdentity();
    return BasisProjection(std::move(space), std::move(p));
  }

  Mat complement() const { return Mat::Identity(space().dim(), space().dim()) - matrix(); }

 private:
  using SpaceOperator::SpaceOperator;
};

/// 0 <= S <= 1 with S + Γ S Γ = 1.
class Symbol : public detail::SpaceOperator<Symbol> {
 public:
  static Symbol make(SelfDualSpace space, Mat s) {
    detail::throw_if_invalid(validate_symbol(space, s), "not a symbol");
    return Symbol(std::move(space), std::move(s));
  }

  static Symbol from(const BasisProjection& p) { return Symbol(p.space(), p.matrix()); }

 private:
  using SpaceOperator::SpaceOperator;
};

/// Unitary U with U Γ = Γ U.
class BogoliubovTransform : public detail::SpaceOperator<BogoliubovTransform> {
 public:
  static BogoliubovTransform make(SelfDualSpace space, Mat u) {
    detail::throw_if_invalid(validate_bogoliubov(space, u), "not a Bogoliubov transformation");
    return BogoliubovTransform(std::move(space), std::move(u));
  }

  Vec apply(const Vec& phi) const { return matrix() * phi; }

 private:
  using SpaceOperator::SpaceOperator;
};

inline ValidationReport validate(const BasisProjection& p) { return validate_projection(p.space(), p.matrix()); }
inline ValidationReport validate(const Symbol& s) { return validate_symbol(s.space(), s.matrix()); }
inline ValidationReport validate(const BogoliubovTransform& u) { return validate_bogoliubov(u.space(), u.matrix()); }

/// Spectral projection of K onto its negative eigenvalues.
inline BasisProjection projection_from_hamiltonian(const SelfDualSpace& space, const Mat& k) {
  detail::throw_if_invalid(validate_hamiltonian(space, k), "not a self-dual Hamiltonian");
  auto eig = hermitian_eigen(k);
  const RealVec& ev = eig.eigenvalues();
  const double smallest = ev.cwiseAbs().minCoeff();
  if (smallest < tol::kZeroMode) {
    throw ZeroModeError("Hamiltonian has a zero mode; ground projection is ill-defined", smallest);
  }
  const Eigen::Index negative = (ev.array() < 0.0).count();
  const Mat v = eig.eigenvectors().leftCols(negative);
  Mat p = v * v.adjoint();
  p = 0.5 * (p + p.adjoint());
  return BasisProjection::make(space, std::move(p));
}

/// Fermi-Dirac symbol 1 / (1 + exp(beta K)); tends to the ground projection as beta grows.
inline Symbol symbol_from_hamiltonian(const SelfDualSpace& space, const Mat& k, double beta) {
  detail::throw_if_invalid(validate_hamiltonian(space, k), "not a self-dual Hamiltonian");
  auto eig = hermitian_eigen(k);
  RealVec occ = eig.eigenvalues().unaryExpr([beta](double e) { return 1.0 / (1.0 + std::exp(beta * e)); });
  Mat s = eig.eigenvectors() * occ.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint();
  s = 0.5 * (s + s.adjoint());
  return Symbol::make(space, std::move(s));
}

/// Hermitian draw projected onto the self-dual subspace, K -> (K - Γ K Γ) / 2.
inline Mat random_hamiltonian(const SelfDualSpace& space, Rng& rng) {
  Mat h = rng.hermitian(space.dim());
  Mat k = 0.5 * (h - space.conjugate_operator(h));
  return 0.5 * (k + k.adjoint());
}

inline BasisProjection random_projection(const SelfDualSpace& space, Rng& rng) {
  for (;;) {
    try {
      return projection_from_hamiltonian(space, random_hamiltonian(space, rng));
    } catch (const ZeroModeError&) {
    }
  }
}

inline Symbol random_symbol(const SelfDualSpace& space, Rng& rng) {
  const double beta = rng.uniform(0.2, 5.0);
  return symbol_from_hamiltonian(space, random_hamiltonian(space, rng), beta);
}

/// exp(iK) for a random self-dual K commutes with Γ.
inline BogoliubovTransform random_bogoliubov(const SelfDualSpace& space, Rng& rng) {
  auto eig = hermitian_eigen(random_hamiltonian(space, rng));
  Vec phases = eig.eigenvalues().unaryExpr([](double e) { return std::exp(kI * e); });
  Mat u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  return BogoliubovTransform::make(space, std::move(u));
}

/// Symbol of the state ω ∘ χ_U, namely U^* S U.
inline Symbol transport_symbol(const BogoliubovTransform& u, const Symbol& s) {
  if (!(u.space() == s.space())) throw DimensionError("transport_symbol: operands live on different spaces");
  Mat t = u.matrix().adjoint() * s.matrix() * u.matrix();
  t = 0.5 * (t + t.adjoint());
  return Symbol::make(s.space(), std::move(t));
}

/// U P U^* is again a basis projection for a Bogoliubov U.
inline BasisProjection transport_projection(const BogoliubovTransform& u, const BasisProjection& p) {
  if (!(u.space() == p.space())) throw DimensionError("transport_projection: operands live on different spaces");
  Mat t = u.matrix() * p.matrix() * u.matrix().adjoint();
  t = 0.5 * (t + t.adjoint());
  return BasisProjection::make(p.space(), std::move(t));
}

namespace detail {

inline std::set<std::size_t> checked_modes(const std::vector<std::size_t>& modes, std::size_t n) {
  std::set<std::size_t> out;
  for (auto j : modes) {
    if (j >= n) throw DimensionError("flip_modes: mode index " + std::to_string(j) + " out of range");
    out.insert(j);
  }
  return out;
}

}  // namespace detail

/// Flips modes of a coordinate-diagonal basis projection on the standard space
/// (mode j pairs coordinates j and n + j, zero-based). Exact: flipping twice
/// restores the input bit for bit.
inline BasisProjection flip_modes(const BasisProjection& p, const std::vector<std::size_t>& modes) {
  const auto& space = p.space();
  const auto n = static_cast<Eigen::Index>(space.modes());
  const Mat& m = p.matrix();
  bool diagonal = space.is_standard();
  for (Eigen::Index j = 0; diagonal && j < 2 * n; ++j)
    for (Eigen::Index i = 0; i < 2 * n; ++i)
      if (i != j && m(i, j) != cplx(0.0)) diagonal = false;
  if (!diagonal) {
    throw InvariantError("flip_modes: projection is not coordinate-diagonal; pass an adapted basis");
  }
  auto flips = detail::checked_modes(modes, space.modes());
  Mat out = m;
  for (auto j : flips) {
    const auto a = static_cast<Eigen::Index>(j);
    std::swap(out(a, a), out(a + n, a + n));
  }
  return BasisProjection::make(space, std::move(out));
}

/// Replaces f_j by Γ f_j for j in `modes`; `basis` columns must be an
/// orthonormal basis of range(P).
inline Mat flipped_basis(const BasisProjection& p, const Mat& basis, const std::vector<std::size_t>& modes) {
  const auto& space = p.space();
  if (basis.rows() != space.dim() || basis.cols() != static_cast<Eigen::Index>(space.modes())) {
    throw DimensionError("flip_modes: adapted basis has wrong shape");
  }
  const double orth = max_abs(basis.adjoint() * basis - Mat::Identity(basis.cols(), basis.cols()));
  const double inside = max_abs(p.matrix() * basis - basis);
  if (orth > tol::kStructure || inside > tol::kStructure) {
    throw InvariantError("flip_modes: basis is not an orthonormal basis of range(P)",
                         {{"adapted_basis", std::max(orth, inside), tol::kStructure}});
  }
  Mat out = basis;
  for (auto j : detail::checked_modes(modes, space.modes())) {
    const auto c = static_cast<Eigen::Index>(j);
    out.col(c) = space.conjugate(basis.col(c));
  }
  return out;
}

inline BasisProjection flip_modes(const BasisProjection& p, const std::vector<std::size_t>& modes, const Mat& basis) {
  Mat f = flipped_basis(p, basis, modes);
  Mat out = f * f.adjoint();
  out = 0.5 * (out + out.adjoint());
  return BasisProjection::make(p.space(), std::move(out));
}

}  // namespace sdcar
