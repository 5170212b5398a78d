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

// Quasi-free states and their moments on words B(φ_1)...B(φ_k).
//
// Conventions used throughout the library:
//  * <x, y> = x^* y, antilinear in the first slot.
//  * φ -> B(φ) is antilinear and B(φ)^* = B(Γφ).
//  * {B(φ_1), B(φ_2)^*} = <φ_1, φ_2>, hence {B(φ_1), B(φ_2)} = <φ_1, Γφ_2>.

#include <vector>

#include "sdcar/pfaffian.hpp"
#include "sdcar/selfdual.hpp"

namespace sdcar {

/// Ordered generator list; factor k stands for B(factors[k]). Empty is the unit.
struct MonomialWord {
  std::vector<Vec> factors;

  std::size_t size() const { return factors.size(); }
  bool empty() const { return factors.empty(); }

  /// Word of the adjoint: reversed, each vector replaced by its Γ-image.
  MonomialWord adjoint(const SelfDualSpace& space) const {
    MonomialWord out;
    out.factors.reserve(factors.size());
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) out.factors.push_back(space.conjugate(*it));
    return out;
  }

  /// Word made of coordinate basis vectors e_i (zero-based indices).
  static MonomialWord coordinates(const SelfDualSpace& space, const std::vector<int>& indices) {
    MonomialWord out;
    for (int i : indices) {
      if (i < 0 || i >= space.dim()) throw DimensionError("coordinate word: index out of range");
      out.factors.push_back(Vec::Unit(space.dim(), i));
    }
    return out;
  }
};

class QuasiFreeState {
 public:
  explicit QuasiFreeState(Symbol symbol) : symbol_(std::move(symbol)) {}

  const Symbol& symbol() const { return symbol_; }
  const SelfDualSpace& space() const { return symbol_.space(); }
  const Mat& matrix() const { return symbol_.matrix(); }

 private:
  Symbol symbol_;
};

inline QuasiFreeState tracial_state(const SelfDualSpace& space) {
  return QuasiFreeState(Symbol::make(space, 0.5 * Mat::Identity(space.dim(), space.dim())));
}

inline QuasiFreeState state_from_projection(const BasisProjection& p) { return QuasiFreeState(Symbol::from(p)); }

/// ω(B(φ_1) B(φ_2)^*) = <φ_1, S φ_2>.
inline cplx two_point(const QuasiFreeState& state, const Vec& phi1, const Vec& phi2) {
  require_length(phi1, state.space().dim(), "two_point");
  require_length(phi2, state.space().dim(), "two_point");
  return phi1.dot(state.matrix() * phi2);
}

/// ω(B(φ_k) B(φ_l)) = <φ_k, S Γφ_l>.
inline cplx pair_expectation(const QuasiFreeState& state, const Vec& phik, const Vec& phil) {
  return two_point(state, phik, state.space().conjugate(phil));
}

/// Skew matrix of pair expectations: upper triangle ω(B_k B_l), lower its negative transpose.
inline Mat pairing_matrix(const QuasiFreeState& state, const MonomialWord& word) {
  const auto len = static_cast<Eigen::Index>(word.size());
  const auto& space = state.space();
  for (const auto& v : word.factors) require_length(v, space.dim(), "moment");
  Mat conj_factors(space.dim(), len);
  for (Eigen::Index l = 0; l < len; ++l) conj_factors.col(l) = space.conjugate(word.factors[l]);
  Mat m = Mat::Zero(len, len);
  for (Eigen::Index k = 0; k < len; ++k) {
    const Vec left = state.matrix().adjoint() * word.factors[k];  // S^* φ_k, so <φ_k, S x> = left^* x
    for (Eigen::Index l = k + 1; l < len; ++l) {
      m(k, l) = left.dot(conj_factors.col(l));
      m(l, k) = -m(k, l);
    }
  }
  return m;
}

/// ω(B(φ_1)...B(φ_k)): 1 for the empty word, 0 for odd length, Pfaffian of
/// the pairing matrix otherwise.
inline cplx moment(const QuasiFreeState& state, const MonomialWord& word) {
  for (const auto& v : word.factors) require_length(v, state.space().dim(), "moment");
  if (word.empty()) return 1.0;
  if (word.size() % 2 != 0) return 0.0;
  return pfaffian(pairing_matrix(state, word));
}

}  // namespace sdcar
