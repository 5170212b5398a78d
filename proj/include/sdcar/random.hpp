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

// Seeded randomness. Every consumer asks for a named stream; the stream seed is
// splitmix64(seed XOR fnv1a(name)), so adding a new stream never perturbs the
// draws of an existing one.

#include <cstdint>
#include <random>
#include <string_view>

#include "sdcar/linalg.hpp"

namespace sdcar {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng(std::uint64_t seed, std::string_view stream) : engine_(splitmix64(seed ^ fnv1a(stream))) {}

  /// Child stream, e.g. one per test case or sweep point.
  Rng split(std::uint64_t index) { return Rng(splitmix64(engine_() ^ splitmix64(index))); }

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  cplx complex_normal() { return {normal(), normal()}; }

  Vec vector(Eigen::Index dim) {
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_normal();
    return v;
  }

  Mat matrix(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  Mat hermitian(Eigen::Index dim) {
    Mat a = matrix(dim, dim);
    return 0.5 * (a + a.adjoint());
  }

  Eigen::MatrixXd real_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace sdcar
