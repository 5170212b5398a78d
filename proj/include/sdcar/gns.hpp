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

// Symbolic sCAR(H, Γ) over the coordinate basis and the GNS construction of a
// quasi-free state.
//
// A canonical word is B(e_{i1}) ... B(e_{ik}) with i1 < ... < ik, stored as the
// bitmask with bits i1..ik set (zero-based). The structure constants are
// {B(e_i), B(e_j)} = <e_i, Γ e_j> = C_ij, so B(e_i)^2 = C_ii / 2.

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "sdcar/fock.hpp"

namespace sdcar {

namespace tol {
inline constexpr double kCoefficient = 1e-14;
inline constexpr double kGramKernel = 1e-9;   // relative eigenvalue cut for the null ideal
inline constexpr double kGns = 1e-9;
inline constexpr std::size_t kMaxGnsModes = 4;
}  // namespace tol

class CanonicalWord {
 public:
  explicit CanonicalWord(std::uint64_t mask = 0) : mask_(mask) {}

  /// Throws unless `indices` is strictly increasing and inside [0, 64).
  static CanonicalWord from_indices(const std::vector<int>& indices) {
    std::uint64_t mask = 0;
    int last = -1;
    for (int i : indices) {
      if (i <= last || i >= 64) throw DimensionError("canonical word: indices must be strictly increasing");
      mask |= std::uint64_t{1} << i;
      last = i;
    }
    return CanonicalWord(mask);
  }

  std::uint64_t mask() const { return mask_; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  bool even() const { return size() % 2 == 0; }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  auto operator<=>(const CanonicalWord&) const = default;

 private:
  std::uint64_t mask_;
};

/// Finite linear combination of canonical words.
class AlgebraElement {
 public:
  static AlgebraElement unit() { return scalar(1.0); }
  static AlgebraElement scalar(cplx c) {
    AlgebraElement a;
    a.add(CanonicalWord(0), c);
    return a;
  }
  static AlgebraElement word(CanonicalWord w, cplx c = 1.0) {
    AlgebraElement a;
    a.add(w, c);
    return a;
  }

  void add(CanonicalWord w, cplx c) {
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) <= tol::kCoefficient) terms_.erase(it);
  }

  const std::map<CanonicalWord, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  cplx coefficient(CanonicalWord w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a += cplx(-1.0) * b; }
  friend AlgebraElement operator*(cplx s, const AlgebraElement& a) {
    AlgebraElement out;
    for (const auto& [w, c] : a.terms_) out.add(w, s * c);
    return out;
  }

  /// Max coefficient difference; the distance used by rewriting tests.
  friend double distance(const AlgebraElement& a, const AlgebraElement& b) {
    double d = 0.0;
    for (const auto& [w, c] : (a - b).terms()) d = std::max(d, std::abs(c));
    return d;
  }

 private:
  std::map<CanonicalWord, cplx> terms_;
};

namespace detail {

inline void check_generator(const SelfDualSpace& space, int i) {
  if (i < 0 || i >= space.dim()) throw DimensionError("generator index " + std::to_string(i) + " out of range");
}

/// out += coeff * B(e_i) * w, with w canonical; B(e_i) travels right
/// through the smaller indices and anticommutes.
inline void left_multiply_word(const Mat& c, int i, CanonicalWord w, cplx coeff, AlgebraElement& out) {
  const std::uint64_t bit = std::uint64_t{1} << i;
  double sign = 1.0;
  for (int j : w.indices()) {
    if (j < i) {
      const cplx s = c(i, j);
      if (s != cplx(0.0)) out.add(CanonicalWord(w.mask() ^ (std::uint64_t{1} << j)), coeff * sign * s);
      sign = -sign;
    } else if (j == i) {
      const cplx s = 0.5 * c(i, i);
      if (s != cplx(0.0)) out.add(CanonicalWord(w.mask() ^ bit), coeff * sign * s);
      return;
    } else {
      break;
    }
  }
  out.add(CanonicalWord(w.mask() | bit), coeff * sign);
}

}  // namespace detail

/// B(e_i) * a.
inline AlgebraElement left_multiply(const SelfDualSpace& space, int i, const AlgebraElement& a) {
  detail::check_generator(space, i);
  AlgebraElement out;
  for (const auto& [w, c] : a.terms()) detail::left_multiply_word(space.gamma(), i, w, c, out);
  return out;
}

/// Rewrites B(e_{w_1}) ... B(e_{w_k}) (any order, repeats allowed) into
/// canonical words, folding generators in from the right.
inline AlgebraElement normal_order(const SelfDualSpace& space, const std::vector<int>& word) {
  for (int i : word) detail::check_generator(space, i);
  AlgebraElement out = AlgebraElement::unit();
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = left_multiply(space, *it, out);
  return out;
}

inline AlgebraElement multiply(const SelfDualSpace& space, const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out;
  for (const auto& [w, c] : a.terms()) {
    AlgebraElement part = b;
    auto idx = w.indices();
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) part = left_multiply(space, *it, part);
    out += c * part;
  }
  return out;
}

/// B(φ) = sum_i conj(φ_i) B(e_i).
inline AlgebraElement generator(const SelfDualSpace& space, const Vec& phi) {
  require_length(phi, space.dim(), "generator");
  AlgebraElement out;
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    if (phi(i) != cplx(0.0)) out.add(CanonicalWord(std::uint64_t{1} << i), std::conj(phi(i)));
  return out;
}

inline AlgebraElement element_of(const SelfDualSpace& space, const MonomialWord& word) {
  AlgebraElement out = AlgebraElement::unit();
  for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it) out = multiply(space, generator(space, *it), out);
  return out;
}

/// a^*, using B(e_i)^* = B(Γ e_i).
inline AlgebraElement adjoint(const SelfDualSpace& space, const AlgebraElement& a) {
  std::vector<AlgebraElement> starred;
  for (Eigen::Index i = 0; i < space.dim(); ++i) starred.push_back(generator(space, space.conjugate(Vec::Unit(space.dim(), i))));
  AlgebraElement out;
  for (const auto& [w, c] : a.terms()) {
    AlgebraElement part = AlgebraElement::scalar(std::conj(c));
    for (int i : w.indices()) part = multiply(space, starred[static_cast<std::size_t>(i)], part);
    out += part;
  }
  return out;
}

/// ω on every canonical word, indexed by mask.
inline std::vector<cplx> canonical_moments(const QuasiFreeState& state) {
  const auto words = std::uint64_t{1} << state.space().dim();
  std::vector<cplx> out(words);
  for (std::uint64_t m = 0; m < words; ++m) {
    auto idx = CanonicalWord(m).indices();
    out[m] = (idx.size() % 2 != 0) ? cplx(0.0) : moment(state, MonomialWord::coordinates(state.space(), idx));
  }
  return out;
}

inline cplx expectation(const QuasiFreeState& state, const AlgebraElement& a) {
  cplx total = 0.0;
  for (const auto& [w, c] : a.terms())
    if (w.even()) total += c * moment(state, MonomialWord::coordinates(state.space(), w.indices()));
  return total;
}

namespace detail {

inline void check_gns_size(const SelfDualSpace& space) {
  if (space.modes() > tol::kMaxGnsModes) throw SizeLimitError("GNS construction limited to n <= 4 (256 words)");
}

inline cplx expectation_cached(const std::vector<cplx>& moments, const AlgebraElement& a) {
  cplx total = 0.0;
  for (const auto& [w, c] : a.terms()) total += c * moments[w.mask()];
  return total;
}

}  // namespace detail

/// G(w, w') = ω(w^* w') over all 2^{2n} canonical words.
inline Mat gram_matrix(const QuasiFreeState& state) {
  const auto& space = state.space();
  detail::check_gns_size(space);
  const auto words = static_cast<Eigen::Index>(std::uint64_t{1} << space.dim());
  const auto moments = canonical_moments(state);
  std::vector<AlgebraElement> adjoints;
  for (Eigen::Index w = 0; w < words; ++w)
    adjoints.push_back(adjoint(space, AlgebraElement::word(CanonicalWord(static_cast<std::uint64_t>(w)))));
  Mat g(words, words);
  for (Eigen::Index a = 0; a < words; ++a) {
    for (Eigen::Index b = a; b < words; ++b) {
      const auto prod = multiply(space, adjoints[static_cast<std::size_t>(a)],
                                 AlgebraElement::word(CanonicalWord(static_cast<std::uint64_t>(b))));
      g(a, b) = detail::expectation_cached(moments, prod);
      g(b, a) = std::conj(g(a, b));
    }
  }
  return g;
}

/// Coefficient vector of an element over all canonical words.
inline Vec coefficients(const SelfDualSpace& space, const AlgebraElement& a) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << space.dim()));
  for (const auto& [w, c] : a.terms()) v(static_cast<Eigen::Index>(w.mask())) = c;
  return v;
}

/// Matrix of A -> B(e_i) A on the canonical-word basis.
inline Mat left_multiplication_matrix(const SelfDualSpace& space, int i) {
  const auto words = static_cast<Eigen::Index>(std::uint64_t{1} << space.dim());
  Mat l = Mat::Zero(words, words);
  for (Eigen::Index w = 0; w < words; ++w) {
    AlgebraElement out;
    detail::left_multiply_word(space.gamma(), i, CanonicalWord(static_cast<std::uint64_t>(w)), 1.0, out);
    for (const auto& [v, c] : out.terms()) l(static_cast<Eigen::Index>(v.mask()), w) = c;
  }
  return l;
}

struct GnsData {
  SelfDualSpace space;
  Mat gram;                          // 4^n x 4^n, Hermitian PSD
  Mat quotient_basis;                // 4^n x r, orthonormal eigenvectors of the gram range
  RealVec weights;                   // the r retained gram eigenvalues
  Mat kernel;                        // 4^n x (4^n - r), basis of the null ideal
  Mat coordinates;                   // r x 4^n, Ψ_A coordinates of word combinations
  std::vector<Mat> rep_generators;   // π_ω(B(e_i)), r x r
  Vec cyclic_vector;                 // Ω_ω = Ψ_1
  std::size_t rank = 0;
  double well_definedness_residual = 0.0;
  double gram_min_eigenvalue = 0.0;

  /// Ψ_A in GNS coordinates.
  Vec vector_of(const AlgebraElement& a) const { return coordinates * sdcar::coefficients(space, a); }

  /// <Ψ_A, Ψ_A> = ω(A^* A).
  double norm_squared(const AlgebraElement& a) const {
    const Vec c = sdcar::coefficients(space, a);
    return c.dot(gram * c).real();
  }
};

/// GNS triple of a quasi-free state: quotient of the word space by the gram
/// kernel, generators acting by left multiplication, Ω_ω the class of the unit.
inline GnsData gns_construct(const QuasiFreeState& state) {
  const auto& space = state.space();
  GnsData out{space, gram_matrix(state), {}, {}, {}, {}, {}, {}, 0, 0.0, 0.0};
  auto eig = hermitian_eigen(out.gram);
  const RealVec& ev = eig.eigenvalues();
  out.gram_min_eigenvalue = ev.minCoeff();
  const double cut = tol::kGramKernel * ev.maxCoeff();
  const Eigen::Index nulls = (ev.array() <= cut).count();
  const Eigen::Index r = ev.size() - nulls;
  out.rank = static_cast<std::size_t>(r);
  out.kernel = eig.eigenvectors().leftCols(nulls);
  out.quotient_basis = eig.eigenvectors().rightCols(r);
  out.weights = ev.tail(r);
  const RealVec inv_sqrt = out.weights.cwiseSqrt().cwiseInverse();
  // Λ^{-1/2} V^* G equals Λ^{1/2} V^* but annihilates the kernel to rounding.
  out.coordinates = inv_sqrt.cast<cplx>().asDiagonal() * out.quotient_basis.adjoint() * out.gram;
  const Mat lift = out.quotient_basis * inv_sqrt.cast<cplx>().asDiagonal();

  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const Mat l = left_multiplication_matrix(space, static_cast<int>(i));
    out.rep_generators.push_back(out.coordinates * l * lift);
    if (nulls > 0) out.well_definedness_residual = std::max(out.well_definedness_residual, max_abs(out.coordinates * l * out.kernel));
  }
  out.cyclic_vector = out.coordinates.col(0);
  if (out.well_definedness_residual > tol::kGns) {
    throw ConsistencyError("gns_construct: left multiplication does not preserve the null ideal",
                           out.well_definedness_residual);
  }
  return out;
}

/// π_ω(A) as an r x r matrix.
inline Mat represent(const GnsData& gns, const AlgebraElement& a) {
  const auto r = static_cast<Eigen::Index>(gns.rank);
  Mat out = Mat::Zero(r, r);
  for (const auto& [w, c] : a.terms()) {
    Mat m = Mat::Identity(r, r);
    for (int i : w.indices()) m = m * gns.rep_generators[static_cast<std::size_t>(i)];
    out += c * m;
  }
  return out;
}

struct Intertwiner {
  Mat unitary;                       // GNS coordinates -> Fock bitmask basis
  double unitarity_residual = 0.0;
  double vacuum_residual = 0.0;      // |U Ψ_1 - Ω|
  double intertwining_residual = 0.0;  // max_i |π_ω(B_i) - U^* π_P(B_i) U|
};

/// Unitary fixed by Ψ_{B(f_{j1})^* ... B(f_{jk})^*} -> f_{j1} ∧ ... ∧ f_{jk}
/// and Ψ_1 -> Ω, with f_j the Fock mode basis of range(P).
inline Intertwiner intertwiner_to_fock(const BasisProjection& p, const GnsData& gns, const FockSpace& fs) {
  const auto& space = p.space();
  const Eigen::Index fock_dim = fs.dim();
  if (static_cast<Eigen::Index>(gns.rank) != fock_dim) {
    throw ConsistencyError("intertwiner_to_fock: GNS dimension differs from 2^n", static_cast<double>(gns.rank));
  }
  std::vector<AlgebraElement> creators;
  for (Eigen::Index j = 0; j < fs.mode_basis().cols(); ++j)
    creators.push_back(generator(space, space.conjugate(fs.mode_basis().col(j))));  // B(f_j)^* = B(Γ f_j)

  Mat images(fock_dim, fock_dim);
  for (Eigen::Index b = 0; b < fock_dim; ++b) {
    AlgebraElement e = AlgebraElement::unit();
    const auto modes = CanonicalWord(static_cast<std::uint64_t>(b)).indices();
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) e = multiply(space, creators[static_cast<std::size_t>(*it)], e);
    images.col(b) = gns.vector_of(e);
  }
  Intertwiner out;
  out.unitary = images.partialPivLu().inverse();
  out.unitarity_residual = unitarity_residual(out.unitary);
  out.vacuum_residual = (out.unitary * gns.cyclic_vector - fs.vacuum()).norm();
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const Mat fock = fock_representation(fs, Vec::Unit(space.dim(), i));
    const Mat pulled = out.unitary.adjoint() * fock * out.unitary;
    out.intertwining_residual = std::max(out.intertwining_residual,
                                         (gns.rep_generators[static_cast<std::size_t>(i)] - pulled).norm());
  }
  return out;
}

inline Intertwiner intertwiner_to_fock(const BasisProjection& p) {
  return intertwiner_to_fock(p, gns_construct(state_from_projection(p)), FockSpace::over(p));
}

struct GnsParitySplit {
  Mat even_projector;   // onto H_ω^+ = span π_ω(even words) Ω_ω
  Mat odd_projector;
  std::size_t even_dim = 0;
  std::size_t odd_dim = 0;
  double complement_residual = 0.0;     // |Π+ + Π- - 1| and |Π+ Π-|
  double block_residual = 0.0;          // U mixing parities
  double even_unitarity_residual = 0.0;  // U_+
  double odd_unitarity_residual = 0.0;   // U_-
  double invariance_residual = 0.0;     // π_ω(quadratics) leaking out of H_ω^±
};

inline GnsParitySplit gns_parity_split(const GnsData& gns, const Intertwiner& u, const FockSpace& fs) {
  const auto words = gns.coordinates.cols();
  const auto r = static_cast<Eigen::Index>(gns.rank);
  std::vector<Eigen::Index> even_cols, odd_cols;
  for (Eigen::Index w = 0; w < words; ++w)
    (CanonicalWord(static_cast<std::uint64_t>(w)).even() ? even_cols : odd_cols).push_back(w);
  auto span_of = [&](const std::vector<Eigen::Index>& cols) {
    Mat m(r, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = gns.coordinates.col(cols[k]);
    return orthonormal_range(m, 1e-8 * std::max(1.0, max_abs(m)));
  };
  const Mat we = span_of(even_cols);
  const Mat wo = span_of(odd_cols);

  GnsParitySplit out;
  out.even_projector = we * we.adjoint();
  out.odd_projector = wo * wo.adjoint();
  out.even_dim = static_cast<std::size_t>(we.cols());
  out.odd_dim = static_cast<std::size_t>(wo.cols());
  const Mat id = Mat::Identity(r, r);
  out.complement_residual = std::max(max_abs(out.even_projector + out.odd_projector - id),
                                     max_abs(out.even_projector * out.odd_projector));
  if (out.complement_residual > tol::kGns) {
    throw ConsistencyError("gns_parity_split: parity subspaces are not complementary", out.complement_residual);
  }

  const auto fock_parity = parity_decomposition(fs);
  out.block_residual = std::max((fock_parity.odd * u.unitary * out.even_projector).norm(),
                                (fock_parity.even * u.unitary * out.odd_projector).norm());
  const Mat fe = orthonormal_range(fock_parity.even, 0.5);
  const Mat fo = orthonormal_range(fock_parity.odd, 0.5);
  if (fe.cols() == we.cols()) out.even_unitarity_residual = unitarity_residual(fe.adjoint() * u.unitary * we);
  else out.even_unitarity_residual = 1.0;
  if (fo.cols() == wo.cols()) out.odd_unitarity_residual = unitarity_residual(fo.adjoint() * u.unitary * wo);
  else out.odd_unitarity_residual = 1.0;

  for (std::size_t i = 0; i < gns.rep_generators.size(); ++i) {
    for (std::size_t j = i + 1; j < gns.rep_generators.size(); ++j) {
      const Mat q = gns.rep_generators[i] * gns.rep_generators[j];
      out.invariance_residual = std::max({out.invariance_residual, ((id - out.even_projector) * q * out.even_projector).norm(),
                                          ((id - out.odd_projector) * q * out.odd_projector).norm()});
    }
  }
  return out;
}

inline GnsParitySplit gns_parity_split(const BasisProjection& p) {
  const auto gns = gns_construct(state_from_projection(p));
  const auto fs = FockSpace::over(p);
  return gns_parity_split(gns, intertwiner_to_fock(p, gns, fs), fs);
}

}  // namespace sdcar
