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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "sdcar/errors.hpp"

namespace sdcar {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest entry modulus; 0 for an empty matrix.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline void require_square(const Mat& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

inline void require_length(const Vec& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw DimensionError(std::string(what) + ": expected vector of length " + std::to_string(dim) +
                         ", got " + std::to_string(v.size()));
  }
}

inline double hermiticity_residual(const Mat& m) { return max_abs(m - m.adjoint()); }

inline double unitarity_residual(const Mat& u) {
  return max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols()));
}

/// Eigen-decomposition of the Hermitian part of `m` (eigenvalues ascending).
inline Eigen::SelfAdjointEigenSolver<Mat> hermitian_eigen(const Mat& m) {
  Mat h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Mat>(h);
}

/// Number of singular values above `tol`.
inline Eigen::Index numerical_rank(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return static_cast<Eigen::Index>((s.array() > tol).count());
}

/// Orthonormal basis (columns) of the kernel of `m`; singular values <= tol are null.
inline Mat null_space(const Mat& m, double tol) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  // Thin SVD only reports min(rows, cols) right vectors, so pad short matrices.
  Mat work = m;
  if (work.rows() < cols) {
    work.conservativeResize(cols, cols);
    work.bottomRows(cols - m.rows()).setZero();
  }
  Eigen::JacobiSVD<Mat> svd(work, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = (s.array() > tol).count();
  return svd.matrixV().rightCols(cols - rank);
}

/// Orthonormal basis of the column span of `m`, cut at singular values <= tol.
inline Mat orthonormal_range(const Mat& m, double tol) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = (s.array() > tol).count();
  return svd.matrixU().leftCols(rank);
}

/// Multiplies `v` by a unit phase so that its first largest-modulus entry is
/// real and positive.
inline void fix_phase(Eigen::Ref<Vec> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best_abs + 1e-12) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
}

}  // namespace sdcar
