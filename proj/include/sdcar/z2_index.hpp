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

// Two Z2 indices for pairs of basis projections and the audit that compares
// them:
//   projection route   sigma(P1, P2)   = (-1)^dim(P1 H ∩ P2^⊥ H)
//   state route        sigma(w1, w2)   = (-1)^N(w1, w2),  N = <w1, 2 tr - w2>
// where <f, g> = sum_ij conj f(B_i B_j^*) g(B_i B_j^*) over the coordinate basis.

#include <cmath>
#include <numbers>
#include <utility>

#include "sdcar/quasifree.hpp"

namespace sdcar {

namespace tol {
inline constexpr double kUnitEigen = 1e-8;        // |λ - 1| below: counted as intersection
inline constexpr double kUnitEigenWarn = 1e-6;    // (1e-8, 1e-6): ill-conditioned
inline constexpr double kIntegerResidual = 1e-6;  // |N - round(N)| above: non-integer
inline constexpr double kNormIdentity = 1e-9;
}  // namespace tol

/// Coset representative of a functional on sCAR: its matrix of values
/// F_ij = f(B(e_i) B(e_j)^*).
class TwoPointFunctional {
 public:
  TwoPointFunctional(SelfDualSpace space, Mat values) : space_(std::move(space)), values_(std::move(values)) {
    require_square(values_, space_.dim(), "two-point functional");
    if (!values_.allFinite()) throw InvariantError("two-point functional has non-finite entries");
  }

  static TwoPointFunctional of(const QuasiFreeState& state) { return {state.space(), state.matrix()}; }

  const SelfDualSpace& space() const { return space_; }
  const Mat& values() const { return values_; }

  friend TwoPointFunctional operator+(const TwoPointFunctional& a, const TwoPointFunctional& b) {
    a.require_same(b);
    return {a.space_, a.values_ + b.values_};
  }
  friend TwoPointFunctional operator-(const TwoPointFunctional& a, const TwoPointFunctional& b) {
    a.require_same(b);
    return {a.space_, a.values_ - b.values_};
  }
  friend TwoPointFunctional operator*(cplx s, const TwoPointFunctional& a) { return {a.space_, s * a.values_}; }

  void require_same(const TwoPointFunctional& other) const {
    if (!(space_ == other.space_)) throw DimensionError("two-point functionals live on different spaces");
  }

 private:
  SelfDualSpace space_;
  Mat values_;
};

/// sum_ij conj(F_ij) G_ij.
inline cplx pairing(const TwoPointFunctional& f, const TwoPointFunctional& g) {
  f.require_same(g);
  return (f.values().conjugate().array() * g.values().array()).sum();
}

inline double f_norm(const TwoPointFunctional& f) { return f.values().norm(); }

namespace detail {
inline void require_same_space(const SelfDualSpace& a, const SelfDualSpace& b, const char* what) {
  if (!(a == b)) throw DimensionError(std::string(what) + ": operands live on different spaces");
}
}  // namespace detail

/// N(w1, w2) = <w1, 2 tr - w2>, evaluated literally as a double sum through `pairing`.
inline cplx n_quantity_form(const QuasiFreeState& w1, const QuasiFreeState& w2) {
  detail::require_same_space(w1.space(), w2.space(), "n_quantity");
  const auto f1 = TwoPointFunctional::of(w1);
  const auto tr = TwoPointFunctional::of(tracial_state(w1.space()));
  return pairing(f1, cplx(2.0) * tr - TwoPointFunctional::of(w2));
}

/// N(w1, w2) = trace(S1 (1 - S2)) for quasi-free states.
inline double n_quantity(const QuasiFreeState& w1, const QuasiFreeState& w2) {
  detail::require_same_space(w1.space(), w2.space(), "n_quantity");
  const Mat id = Mat::Identity(w1.space().dim(), w1.space().dim());
  return (w1.matrix() * (id - w2.matrix())).trace().real();
}

/// || w1 - w2 ||_F, the Frobenius norm of S1 - S2.
inline double f_norm_diff(const QuasiFreeState& w1, const QuasiFreeState& w2) {
  detail::require_same_space(w1.space(), w2.space(), "f_norm_diff");
  return f_norm(TwoPointFunctional::of(w1) - TwoPointFunctional::of(w2));
}

inline double hs_norm(const BasisProjection& p1, const BasisProjection& p2) {
  detail::require_same_space(p1.space(), p2.space(), "hs_norm");
  return (p1.matrix() - p2.matrix()).norm();
}

struct IntersectionDiagnostics {
  std::size_t count = 0;            // eigenvalues of P1 - P2 within kUnitEigen of 1
  double nearest_outside = 1.0;     // distance to 1 of the closest eigenvalue not counted
  bool ill_conditioned = false;     // some eigenvalue in the warning band
  long rank_count = -1;             // rank(P1) + rank(P2^⊥) - rank([P1 | P2^⊥]), when requested
  RealVec eigenvalues;              // spectrum of P1 - P2, ascending
};

inline IntersectionDiagnostics intersection_diagnostics(const BasisProjection& p1, const BasisProjection& p2,
                                                        bool rank_cross_check = false) {
  detail::require_same_space(p1.space(), p2.space(), "dim_intersection");
  IntersectionDiagnostics out;
  out.eigenvalues = hermitian_eigen(p1.matrix() - p2.matrix()).eigenvalues();
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    const double gap = std::abs(out.eigenvalues(i) - 1.0);
    if (gap < tol::kUnitEigen) {
      ++out.count;
    } else {
      out.nearest_outside = std::min(out.nearest_outside, gap);
      if (gap < tol::kUnitEigenWarn) out.ill_conditioned = true;
    }
  }
  if (rank_cross_check) {
    const double cut = 1e-8;
    const Mat q1 = orthonormal_range(p1.matrix(), 0.5);
    const Mat q2 = orthonormal_range(p2.complement(), 0.5);
    Mat stacked(q1.rows(), q1.cols() + q2.cols());
    stacked << q1, q2;
    out.rank_count = static_cast<long>(q1.cols() + q2.cols() - numerical_rank(stacked, cut));
  }
  return out;
}

/// dim(P1 H ∩ P2^⊥ H) as the multiplicity of eigenvalue 1 of P1 - P2.
/// In strict mode an eigenvalue in the (1e-8, 1e-6) band around 1 throws.
inline std::size_t dim_intersection(const BasisProjection& p1, const BasisProjection& p2, bool strict = false) {
  auto d = intersection_diagnostics(p1, p2);
  if (strict && d.ill_conditioned) {
    throw IllConditionedError("dim_intersection: eigenvalue of P1 - P2 within 1e-6 of 1 but not within 1e-8");
  }
  return d.count;
}

inline int parity(std::size_t k) { return k % 2 == 0 ? 1 : -1; }

inline int sigma_proj(const BasisProjection& p1, const BasisProjection& p2) {
  return parity(dim_intersection(p1, p2));
}

struct StateIndex {
  int sigma = 1;
  double n_value = 0.0;
  long n_rounded = 0;
  double residual = 0.0;   // |N - round(N)|
  bool non_integer = false;
};

/// (-1)^round(N) with the rounding residual. A non-integer N sets the flag;
/// the parity is then only meaningful through sigma_proj.
inline StateIndex sigma_state(const QuasiFreeState& w1, const QuasiFreeState& w2) {
  StateIndex out;
  out.n_value = n_quantity(w1, w2);
  out.n_rounded = std::lround(out.n_value);
  out.residual = std::abs(out.n_value - static_cast<double>(out.n_rounded));
  out.non_integer = out.residual > tol::kIntegerResidual;
  out.sigma = out.n_rounded % 2 == 0 ? 1 : -1;
  return out;
}

struct IndexReport {
  double n_value = 0.0;
  long n_rounded = 0;
  double n_residual = 0.0;
  std::size_t dim_intersection = 0;
  int sigma_proj = 1;
  int sigma_state = 1;
  double hs_norm = 0.0;
  double f_norm = 0.0;
  bool lemma_consistent = true;
};

/// Both index routes side by side; lemma_consistent records whether
/// N(w_P1, w_P2) = dim(P1 ∧ P2^⊥) holds for this pair.
inline IndexReport index_report(const BasisProjection& p1, const BasisProjection& p2) {
  const auto w1 = state_from_projection(p1);
  const auto w2 = state_from_projection(p2);
  const auto state = sigma_state(w1, w2);
  IndexReport r;
  r.n_value = state.n_value;
  r.n_rounded = state.n_rounded;
  r.n_residual = state.residual;
  r.dim_intersection = dim_intersection(p1, p2);
  r.sigma_proj = parity(r.dim_intersection);
  r.sigma_state = state.sigma;
  r.hs_norm = hs_norm(p1, p2);
  r.f_norm = f_norm_diff(w1, w2);
  r.lemma_consistent = r.n_residual <= tol::kIntegerResidual &&
                       r.n_rounded == static_cast<long>(r.dim_intersection);
  return r;
}

/// Residuals of the report's internal identities; empty when all hold.
inline ValidationReport check(const IndexReport& r) {
  ValidationReport out;
  double d = std::abs(r.f_norm * r.f_norm - 2.0 * r.n_value);
  if (d > tol::kNormIdentity) out.push_back({"f_norm_squared_eq_2N", d, tol::kNormIdentity});
  d = std::abs(r.hs_norm - r.f_norm);
  if (d > tol::kNormIdentity) out.push_back({"hs_norm_eq_f_norm", d, tol::kNormIdentity});
  if (r.sigma_proj != parity(r.dim_intersection)) out.push_back({"sigma_proj_parity", 1.0, 0.0});
  if (r.sigma_state != (r.n_rounded % 2 == 0 ? 1 : -1)) out.push_back({"sigma_state_parity", 1.0, 0.0});
  return out;
}

/// Counterexample pair on standard_space(2): P1 = diag(1, 1, 0, 0) and P2 the
/// projection onto span{cos θ e1 + sin θ e4, cos θ e2 - sin θ e3}.
/// N = 2 sin^2 θ while P1 H ∩ P2^⊥ H = {0} for θ in (0, π/2).
inline std::pair<BasisProjection, BasisProjection> theta_family(double theta) {
  auto p1 = BasisProjection::standard(2);
  const double c = std::cos(theta), s = std::sin(theta);
  Mat v = Mat::Zero(4, 2);
  v(0, 0) = c;
  v(3, 0) = s;
  v(1, 1) = c;
  v(2, 1) = -s;
  Mat p2 = v * v.adjoint();
  return {p1, BasisProjection::make(p1.space(), std::move(p2))};
}

}  // namespace sdcar
