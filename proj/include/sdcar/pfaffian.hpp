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

#include <algorithm>
#include <numeric>
#include <vector>

#include "sdcar/linalg.hpp"

namespace sdcar {

namespace tol {
inline constexpr double kSkew = 1e-10;
/// Relative pivot size under which the elimination declares Pf = 0.
inline constexpr double kPfaffianPivot = 1e-13;
}  // namespace tol

namespace detail {

template <typename Derived>
double check_skew(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw DimensionError("pfaffian: matrix is not square");
  if (m.rows() % 2 != 0) throw DimensionError("pfaffian: matrix has odd order");
  const double scale = max_abs(m);
  const double asym = max_abs(m + m.transpose());
  if (asym > tol::kSkew * std::max(1.0, scale)) {
    throw InvariantError("pfaffian: matrix is not skew-symmetric", {{"skew_symmetric", asym, tol::kSkew}});
  }
  return scale;
}

}  // namespace detail

/// Pfaffian by the permutation sum (1 / (2^N N!)) sum_pi sgn(pi) prod_j M[pi(2j-1), pi(2j)].
/// Exponential cost; restricted to order <= 8.
template <typename Derived>
typename Derived::Scalar pfaffian_definition(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::check_skew(m);
  const auto order = static_cast<int>(m.rows());
  if (order > 8) throw SizeLimitError("pfaffian_definition: order above 8");
  if (order == 0) return Scalar(1);

  std::vector<int> perm(static_cast<std::size_t>(order));
  std::iota(perm.begin(), perm.end(), 0);
  Scalar total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < order; ++i)
      for (int j = i + 1; j < order; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Scalar term = (inversions % 2 == 0) ? Scalar(1) : Scalar(-1);
    for (int j = 0; j < order; j += 2) term *= m(perm[j], perm[j + 1]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));

  double norm = 1.0;
  for (int k = 1; k <= order / 2; ++k) norm *= 2.0 * k;  // 2^N N!
  return total / norm;
}

/// Pfaffian by skew-symmetric Gaussian elimination (Parlett-Reid, partial
/// pivoting), O(n^3).
template <typename Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Work = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Column = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const double scale = detail::check_skew(m);
  const Eigen::Index n = m.rows();
  if (n == 0) return Scalar(1);
  if (scale == 0.0) return Scalar(0);

  Work a = m;
  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (std::abs(a(k + 1, k)) <= tol::kPfaffianPivot * scale) return Scalar(0);

    pf *= a(k, k + 1);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      Column tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      Column x = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * x.transpose() - x * tau.transpose();
    }
  }
  return pf;
}

}  // namespace sdcar
