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

// Fock representation over range(P).
//
// Basis of the Fock space: occupation bitmasks b in [0, 2^n), ordered by value.
// Mode j (zero-based) is bit j, and b stands for f_{j1} ∧ ... ∧ f_{jk} with
// j1 < ... < jk. a*(f_j) inserts f_j with sign (-1)^(number of occupied modes below j).
//
//   π_P(B(φ)) = a(Pφ) + a*(Γ P^⊥ φ)

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "sdcar/quasifree.hpp"

namespace sdcar {

using FockOperator = Mat;

namespace tol {
inline constexpr std::size_t kMaxFockModes = 12;
inline constexpr double kCommutantNull = 1e-8;
inline constexpr double kInvariance = 1e-10;
inline constexpr double kVacuum = 1e-9;
}  // namespace tol

/// Orthonormal basis of range(P) from Gram-Schmidt over the columns of P with
/// largest-residual column pivoting; each vector's phase is fixed so its first
/// largest entry is real positive. For diag(I_n, 0) this returns e_1..e_n.
inline Mat mode_basis(const BasisProjection& p) {
  const Eigen::Index dim = p.space().dim();
  const auto n = static_cast<Eigen::Index>(p.space().modes());
  Mat residual = p.matrix();
  Mat basis(dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index pick = 0;
    double best = -1.0;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double norm = residual.col(c).norm();
      if (norm > best + 1e-12) {
        best = norm;
        pick = c;
      }
    }
    Vec v = residual.col(pick);
    v -= basis.leftCols(j) * (basis.leftCols(j).adjoint() * v);
    v.normalize();
    fix_phase(v);
    basis.col(j) = v;
    residual -= v * (v.adjoint() * residual);
  }
  return basis;
}

class FockSpace {
 public:
  static FockSpace over(BasisProjection p) {
    if (p.space().modes() > tol::kMaxFockModes) throw SizeLimitError("FockSpace: more than 12 modes");
    Mat basis = sdcar::mode_basis(p);
    const double orth = max_abs(basis.adjoint() * basis - Mat::Identity(basis.cols(), basis.cols()));
    const double inside = max_abs(p.matrix() * basis - basis);
    if (orth > tol::kStructure || inside > tol::kStructure) {
      throw InvariantError("FockSpace: mode basis failed", {{"mode_basis", std::max(orth, inside), tol::kStructure}});
    }
    return FockSpace(std::move(p), std::move(basis));
  }

  const BasisProjection& projection() const { return projection_; }
  const SelfDualSpace& space() const { return projection_.space(); }
  const Mat& mode_basis() const { return basis_; }
  std::size_t modes() const { return space().modes(); }
  Eigen::Index dim() const { return Eigen::Index{1} << modes(); }

  Vec vacuum() const { return Vec::Unit(dim(), 0); }

 private:
  FockSpace(BasisProjection p, Mat basis) : projection_(std::move(p)), basis_(std::move(basis)) {}

  BasisProjection projection_;
  Mat basis_;
};

namespace detail {

inline double ladder_sign(std::uint64_t mask, std::size_t j) {
  const std::uint64_t below = mask & ((std::uint64_t{1} << j) - 1);
  return std::popcount(below) % 2 == 0 ? 1.0 : -1.0;
}

inline void check_mode(const FockSpace& fs, std::size_t j) {
  if (j >= fs.modes()) throw DimensionError("mode index " + std::to_string(j) + " out of range");
}

/// out += coeff * a_j v
inline void add_annihilation(std::size_t j, cplx coeff, const Vec& v, Vec& out) {
  const std::uint64_t bit = std::uint64_t{1} << j;
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    const auto mask = static_cast<std::uint64_t>(b);
    if ((mask & bit) && v(b) != cplx(0.0)) out(static_cast<Eigen::Index>(mask ^ bit)) += coeff * ladder_sign(mask, j) * v(b);
  }
}

/// out += coeff * a*_j v
inline void add_creation(std::size_t j, cplx coeff, const Vec& v, Vec& out) {
  const std::uint64_t bit = std::uint64_t{1} << j;
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    const auto mask = static_cast<std::uint64_t>(b);
    if (!(mask & bit) && v(b) != cplx(0.0)) out(static_cast<Eigen::Index>(mask | bit)) += coeff * ladder_sign(mask, j) * v(b);
  }
}

}  // namespace detail

inline FockOperator annihilation(const FockSpace& fs, std::size_t j) {
  detail::check_mode(fs, j);
  const std::uint64_t bit = std::uint64_t{1} << j;
  FockOperator a = Mat::Zero(fs.dim(), fs.dim());
  for (Eigen::Index b = 0; b < fs.dim(); ++b) {
    const auto mask = static_cast<std::uint64_t>(b);
    if (mask & bit) a(static_cast<Eigen::Index>(mask ^ bit), b) = detail::ladder_sign(mask, j);
  }
  return a;
}

inline FockOperator creation(const FockSpace& fs, std::size_t j) { return annihilation(fs, j).adjoint(); }

/// Coefficients c_j = <f_j, φ> for φ in range(P).
inline Vec mode_coefficients(const FockSpace& fs, const Vec& phi) { return fs.mode_basis().adjoint() * phi; }

/// Coefficient pair of π_P(B(φ)) = sum_j conj(c_j) a_j + d_j a*_j
/// with c = coefficients of Pφ and d = coefficients of Γ P^⊥ φ.
struct RepresentedGenerator {
  Vec annihilate;  // conj(c)
  Vec create;      // d
};

inline RepresentedGenerator generator_coefficients(const FockSpace& fs, const Vec& phi) {
  require_length(phi, fs.space().dim(), "fock_representation");
  const auto& p = fs.projection();
  const Vec in_range = p.matrix() * phi;
  const Vec dual = fs.space().conjugate(p.complement() * phi);
  return {mode_coefficients(fs, in_range).conjugate(), mode_coefficients(fs, dual)};
}

/// π_P(B(φ)) v without forming the matrix.
inline Vec apply_generator(const FockSpace& fs, const Vec& phi, const Vec& v) {
  const auto g = generator_coefficients(fs, phi);
  Vec out = Vec::Zero(v.size());
  for (std::size_t j = 0; j < fs.modes(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    if (g.annihilate(k) != cplx(0.0)) detail::add_annihilation(j, g.annihilate(k), v, out);
    if (g.create(k) != cplx(0.0)) detail::add_creation(j, g.create(k), v, out);
  }
  return out;
}

inline FockOperator fock_representation(const FockSpace& fs, const Vec& phi) {
  FockOperator out = Mat::Zero(fs.dim(), fs.dim());
  for (Eigen::Index b = 0; b < fs.dim(); ++b) out.col(b) = apply_generator(fs, phi, Vec::Unit(fs.dim(), b));
  return out;
}

/// π_P(B(e_i)) for every coordinate vector, i = 0..2n-1.
inline std::vector<FockOperator> represented_generators(const FockSpace& fs) {
  std::vector<FockOperator> out;
  for (Eigen::Index i = 0; i < fs.space().dim(); ++i) out.push_back(fock_representation(fs, Vec::Unit(fs.space().dim(), i)));
  return out;
}

/// π_P(B(e_i) B(e_j)) for i < j.
inline std::vector<FockOperator> represented_quadratics(const FockSpace& fs) {
  auto gens = represented_generators(fs);
  std::vector<FockOperator> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) out.push_back(gens[i] * gens[j]);
  return out;
}

/// <Ω, π_P(B(φ_1)) ... π_P(B(φ_k)) Ω>.
inline cplx vacuum_expectation(const FockSpace& fs, const MonomialWord& word) {
  Vec v = fs.vacuum();
  for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it) v = apply_generator(fs, *it, v);
  return v(0);
}

inline cplx vacuum_expectation(const BasisProjection& p, const MonomialWord& word) {
  return vacuum_expectation(FockSpace::over(p), word);
}

struct ParityProjectors {
  Mat even;
  Mat odd;
};

/// Even / odd occupation-number subspaces H_P^+ and H_P^-.
inline ParityProjectors parity_decomposition(const FockSpace& fs) {
  ParityProjectors out{Mat::Zero(fs.dim(), fs.dim()), Mat::Zero(fs.dim(), fs.dim())};
  for (Eigen::Index b = 0; b < fs.dim(); ++b) {
    if (std::popcount(static_cast<std::uint64_t>(b)) % 2 == 0)
      out.even(b, b) = 1.0;
    else
      out.odd(b, b) = 1.0;
  }
  return out;
}

/// Dimension of {X on range(Q) : X A = A X for all A in ops}, via the null
/// space of the stacked commutator system (singular values below 1e-8 are null).
inline std::size_t commutant_dimension(std::span<const FockOperator> ops, const Mat& q) {
  const Eigen::Index full = q.rows();
  const Mat w = orthonormal_range(q, 0.5);
  const Eigen::Index d = w.cols();
  if (d == 0) return 0;
  const Mat outside = Mat::Identity(full, full) - w * w.adjoint();
  std::vector<Mat> restricted;
  for (const auto& a : ops) {
    if (a.rows() != full || a.cols() != full) throw DimensionError("commutant_dimension: operator size mismatch");
    const double leak = max_abs(outside * a * w);
    if (leak > tol::kInvariance) {
      throw InvariantError("commutant_dimension: operator does not leave range(Q) invariant",
                           {{"invariance", leak, tol::kInvariance}});
    }
    restricted.push_back(w.adjoint() * a * w);
  }
  if (restricted.empty()) return static_cast<std::size_t>(d * d);

  // vec(X A - A X) = (A^T ⊗ I - I ⊗ A) vec(X) for column-major vec.
  const Eigen::Index block = d * d;
  Mat system(block * static_cast<Eigen::Index>(restricted.size()), block);
  const Mat id = Mat::Identity(d, d);
  for (std::size_t k = 0; k < restricted.size(); ++k) {
    const Mat& a = restricted[k];
    Mat kron(block, block);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) kron.block(r * d, c * d, d, d) = a(c, r) * id - (r == c ? a : Mat::Zero(d, d));
    system.middleRows(static_cast<Eigen::Index>(k) * block, block) = kron;
  }
  Mat reduced = system;
  if (system.rows() > block) {
    Eigen::HouseholderQR<Mat> qr(system);
    reduced = qr.matrixQR().topRows(block).triangularView<Eigen::Upper>();
  }
  return static_cast<std::size_t>(block - numerical_rank(reduced, tol::kCommutantNull));
}

/// Vacuum of π_P located in the Fock space of `ref`: the joint null vector of
/// π_ref(B(f)) over f in range(P), found as the kernel of
/// sum_j π_ref(B(f_j))^* π_ref(B(f_j)) (whose spectrum is 0, 1, ..., n).
inline Vec vacuum_in_reference(const FockSpace& ref, const BasisProjection& p) {
  if (!(ref.space() == p.space())) throw DimensionError("vacuum_in_reference: different spaces");
  const Mat basis = mode_basis(p);
  Mat number = Mat::Zero(ref.dim(), ref.dim());
  std::vector<FockOperator> annihilators;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    annihilators.push_back(fock_representation(ref, basis.col(j)));
    number += annihilators.back().adjoint() * annihilators.back();
  }
  auto eig = hermitian_eigen(number);
  const Eigen::Index nulls = (eig.eigenvalues().array() < 0.5).count();
  if (nulls != 1) {
    throw ConsistencyError("vacuum_in_reference: joint null space has dimension " + std::to_string(nulls),
                           static_cast<double>(nulls));
  }
  Vec v = eig.eigenvectors().col(0);
  fix_phase(v);
  double residual = 0.0;
  for (const auto& a : annihilators) residual = std::max(residual, (a * v).norm());
  if (residual > tol::kVacuum) throw ConsistencyError("vacuum_in_reference: annihilation residual too large", residual);
  return v;
}

/// Orthonormal basis of H with Γψ = ψ for every vector (B(ψ) self-adjoint).
/// Candidates e_k + Γe_k and i(e_k - Γe_k) are orthonormalized in order.
inline Mat real_basis(const SelfDualSpace& space) {
  const Eigen::Index dim = space.dim();
  Mat basis(dim, dim);
  Eigen::Index found = 0;
  for (Eigen::Index k = 0; k < dim && found < dim; ++k) {
    const Vec e = Vec::Unit(dim, k);
    const Vec ge = space.conjugate(e);
    for (const Vec& cand : {Vec(e + ge), Vec(kI * (e - ge))}) {
      if (found == dim) break;
      Vec v = cand - basis.leftCols(found) * (basis.leftCols(found).adjoint() * cand);
      if (v.norm() < 0.5) continue;
      basis.col(found++) = v.normalized();
    }
  }
  if (found != dim) throw ConsistencyError("real_basis: could not complete a Γ-real basis", static_cast<double>(found));
  return basis;
}

/// Normalized volume element: T = π(B(ψ_1)) ... π(B(ψ_2n)) over a Γ-real
/// orthonormal basis, rescaled by the principal square root of the scalar T^2
/// and rotated by i if the result is anti-Hermitian.
inline FockOperator volume_element(const FockSpace& ref) {
  const Mat psi = real_basis(ref.space());
  FockOperator t = Mat::Identity(ref.dim(), ref.dim());
  for (Eigen::Index a = 0; a < psi.cols(); ++a) t = t * fock_representation(ref, psi.col(a));
  const Mat t2 = t * t;
  const cplx lambda = t2.trace() / static_cast<double>(ref.dim());
  const double off = max_abs(t2 - lambda * Mat::Identity(ref.dim(), ref.dim()));
  if (std::abs(lambda) == 0.0 || off > 1e-8 * std::abs(lambda)) {
    throw ConsistencyError("volume_element: T^2 is not a nonzero scalar", off);
  }
  FockOperator theta = t / std::sqrt(lambda);
  if (max_abs(theta + theta.adjoint()) < max_abs(theta - theta.adjoint())) theta *= kI;
  return theta;
}

/// s(P) = <Ω_P, Θ Ω_P> in the reference Fock space. Only products s(P1) s(P2)
/// carry meaning.
inline int parity_sign(const FockSpace& ref, const BasisProjection& p) {
  const Vec v = vacuum_in_reference(ref, p);
  const cplx s = v.dot(volume_element(ref) * v);
  const double dev = std::min(std::abs(s - 1.0), std::abs(s + 1.0));
  if (dev > 1e-8) throw ConsistencyError("parity_sign: vacuum is not a volume-element eigenvector", dev);
  return s.real() > 0 ? 1 : -1;
}

}  // namespace sdcar
