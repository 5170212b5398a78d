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

// Shared helpers for the unit suites: seeded draws and small independent
// oracles that do not go through the library code under test.

#include <catch_amalgamated.hpp>

#include <vector>

#include "sdcar/cli.hpp"
#include "sdcar/sdcar.hpp"

namespace sdcar::testing {

/// Unit vector in C^dim, complex Gaussian direction.
inline Vec random_unit(Rng& rng, Eigen::Index dim) { return rng.vector(dim).normalized(); }

inline MonomialWord random_word(Rng& rng, const SelfDualSpace& space, std::size_t length) {
  MonomialWord w;
  for (std::size_t k = 0; k < length; ++k) w.factors.push_back(random_unit(rng, space.dim()));
  return w;
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline Mat random_unitary(Rng& rng, Eigen::Index dim) {
  Eigen::HouseholderQR<Mat> qr(rng.matrix(dim, dim));
  return qr.householderQ() * Mat::Identity(dim, dim);
}

/// Real skew-symmetric matrix with Gaussian entries.
inline Eigen::MatrixXd random_skew(Rng& rng, Eigen::Index order) {
  Eigen::MatrixXd a = rng.real_matrix(order, order);
  return a - a.transpose();
}

inline Mat random_complex_skew(Rng& rng, Eigen::Index order) {
  Mat a = rng.matrix(order, order);
  return a - a.transpose();
}

/// All subsets of {0..n-1} as index vectors.
inline std::vector<std::vector<std::size_t>> all_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < n; ++j)
      if (m >> j & 1U) s.push_back(j);
    out.push_back(std::move(s));
  }
  return out;
}

/// Conjugation on C^{2n} rotated by a unitary W: C' = W C W^T.
inline SelfDualSpace rotated_space(std::size_t n, Rng& rng) {
  const Mat w = random_unitary(rng, static_cast<Eigen::Index>(2 * n));
  return SelfDualSpace::from_gamma(w * SelfDualSpace::standard(n).gamma() * w.transpose());
}

}  // namespace sdcar::testing
