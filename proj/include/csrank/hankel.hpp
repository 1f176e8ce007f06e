/**
 * Copyright 2026 The csrank Authors
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

///
/// \file hankel.hpp
///
/// Rescaled Hankel matrices of Fock amplitudes and the singular-value lower
/// bounds on the epsilon-approximate coherent state rank derived from them.
///
#pragma once

#include "csrank/fock.hpp"

namespace csrank {

///
/// Square Hankel matrix H(i, j) = seq(i + j) built from a sequence of length
/// 2N + 1.
///
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
hankel_from_sequence(const Eigen::MatrixBase<Derived>& seq) {
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Derived);
  using Scalar = typename Derived::Scalar;
  eigen_assert(seq.size() % 2 == 1);
  const Index size = seq.size() / 2 + 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h(size, size);
  for (Index j = 0; j < size; ++j)
    for (Index i = 0; i < size; ++i) h(i, j) = seq(i + j);
  return h;
}

/// m_n: number of pairs (i, j) with i + j = n and 0 <= i, j <= N.
inline Index antidiagonal_multiplicity(Index n, Index N) {
  return n <= N ? n + 1 : 2 * N - n + 1;
}

///
/// H_{N,b}(psi) with its singular values.
///
/// Entries are stored as b^{i+j} sqrt((i+j)!) psi_{i+j} e^{-scale_exponent};
/// the common scale is factored out so that (2N)!-sized quantities never
/// leave double range. Singular values are sorted descending.
///
struct HankelBundle {
  MatrixXc matrix;
  Index N = 0;
  Real b = 1.0;
  VectorXr singular_values;
  Real scale_exponent = 0.0;

  /// sum_{l > r} sigma_l^2 in the scaled units of `matrix`.
  Real tail_energy(Index r) const;
};

/// Free parameters of the optimized bound search.
struct SearchConfig {
  Index N_min = 0;
  /// Negative means "derive from the state": min(20, floor(cutoff / 2)).
  Index N_max = -1;
  Real log10_b_min = -3.0;
  Real log10_b_max = 1.0;
  Index b_points = 200;
  Index refine_iters = 40;
  Real rank_tol = 1e-10;

  /// \throws InvalidArgument when the fields are inconsistent.
  void validate() const;
  /// N_max resolved against a state's cutoff.
  Index resolved_N_max(Index cutoff) const;
};

/// \throws InvalidArgument if psi.cutoff() < 2N, N < 0 or b <= 0.
HankelBundle hankel_matrix(const FockVector& psi, Index N, Real b = 1.0);

/// Singular values above rel_tol * sigma_1 (0 for the zero matrix).
Index numerical_rank(const HankelBundle& bundle, Real rel_tol = 1e-10);

///
/// (1 / (2 (N+1) (2N)!)) sum_{l=r+1}^{N+1} sigma_l(H_N(psi))^2.
///
/// Every epsilon strictly below the returned value certifies
/// kappa_epsilon(psi) > r.
///
Real plain_bound(const FockVector& psi, Index r, Index N);

/// Rescaled bound sum_{l>r} sigma_l(H_{N,b})^2 / (2 max_n m_n b^{2n} n!) at a
/// fixed (N, b).
Real rescaled_bound(const FockVector& psi, Index r, Index N, Real b);

/// Same as `rescaled_bound` but reusing an already decomposed bundle.
Real rescaled_bound(const HankelBundle& bundle, Index r);

struct OptimizedBound {
  Real value = 0.0;
  Real b_star = 1.0;
  Index N_star = 0;
};

///
/// Maximizes `rescaled_bound` over N in [max(r, N_min), N_max] and b on a
/// logarithmic grid (with b = 1 always included) followed by golden-section
/// refinement around the best grid cell. Ties are broken towards smaller N,
/// then smaller b.
///
OptimizedBound optimized_bound(const FockVector& psi, Index r,
                               const SearchConfig& cfg = {});

namespace detail {
/// log(max_n m_n b^{2n} n!) for n = 0..2N.
Real log_rescaled_denominator(Index N, Real b);
/// Combine a scaled tail energy with a log-space denominator.
Real assemble_bound(Real tail, Real scale_exponent, Real log_denominator);
}  // namespace detail

}  // namespace csrank
