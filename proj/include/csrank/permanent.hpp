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
/// \file permanent.hpp
///
/// Exact permanent kernels and the multilinear formula induced by a coherent
/// state decomposition of |1>^{(x) n}.
///
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "csrank/multimode.hpp"

namespace csrank {

inline constexpr Index kMaxNaivePermanent = 8;
inline constexpr Index kMaxGrayPermanent = 24;

/// Sum over all permutations of prod_i M(i, sigma(i)).
template <typename Derived>
typename Derived::Scalar permanent_naive(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw InvalidArgument("permanent: matrix must be square");
  const Index n = m.rows();
  if (n > kMaxNaivePermanent) throw ResourceLimit("permanent_naive: n > 8");
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  Scalar sum(0);
  do {
    Scalar prod(1);
    for (Index i = 0; i < n; ++i) prod *= m(i, perm[i]);
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

///
/// Ryser's inclusion-exclusion formula,
///   Per(M) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} M(i, j),
/// with row sums updated along a reflected binary Gray code over column
/// subsets.
///
template <typename Derived>
typename Derived::Scalar permanent_ryser(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw InvalidArgument("permanent: matrix must be square");
  const Index n = m.rows();
  if (n > kMaxGrayPermanent) throw ResourceLimit("permanent_ryser: n > 24");
  if (n == 0) return Scalar(1);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sums =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  Scalar total(0);
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int j = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << j;
    gray ^= bit;
    if (gray & bit)
      row_sums += m.col(j);
    else
      row_sums -= m.col(j);
    const Scalar prod = row_sums.prod();
    if (std::popcount(gray) % 2 == 0)
      total += prod;
    else
      total -= prod;
  }
  return n % 2 == 0 ? total : Scalar(-total);
}

///
/// Glynn's formula,
///   Per(M) = 2^{1-n} sum_{d in {+-1}^n, d_0 = 1} (prod_k d_k) prod_j sum_i d_i M(i, j),
/// with the sign vector walked in reflected binary Gray-code order.
///
template <typename Derived>
typename Derived::Scalar permanent_glynn(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw InvalidArgument("permanent: matrix must be square");
  const Index n = m.rows();
  if (n > kMaxGrayPermanent) throw ResourceLimit("permanent_glynn: n > 24");
  if (n == 0) return Scalar(1);

  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> col_sums = m.colwise().sum();
  std::vector<int> sign(n, 1);
  Scalar total = col_sums.prod();
  int parity = 1;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < count; ++k) {
    const Index row = std::countr_zero(k) + 1;
    sign[row] = -sign[row];
    parity = -parity;
    col_sums += Scalar(2 * sign[row]) * m.row(row);
    if (parity > 0)
      total += col_sums.prod();
    else
      total -= col_sums.prod();
  }
  return total / Scalar(static_cast<double>(count));
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// diagonal of R made positive. Deterministic per seed.
UnitaryMatrix haar_unitary(Index n, std::uint64_t seed);

///
/// F(X) = sum_j gamma_j prod_i (sum_k alphas(j, k) X(i, k)).
///
struct MultilinearFormula {
  Index n = 0;
  VectorXc gammas;
  /// r x n
  MatrixXc alphas;

  Index terms() const noexcept { return gammas.size(); }
  /// r n^2
  Index size() const noexcept { return terms() * n * n; }
};

/// gamma_j = c_j exp(-||alpha_j||^2 / 2), rows of `alphas` = alpha_j.
MultilinearFormula formula_from_decomposition(const MultimodeSuperposition& sup);

/// \throws InvalidArgument unless X is n x n.
Complex evaluate_formula(const MultilinearFormula& f, const MatrixXc& x);

/// The 2^n-term product of odd cats (|delta> - |-delta>) approximating
/// |1>^{(x) n}, i.e. the n-fold tensor power of the two-point circle
/// decomposition of |1>.
MultimodeSuperposition ones_cat_decomposition(int n, Real delta);

struct PermanentTrial {
  int trial = 0;
  std::uint64_t seed = 0;
  Real abs_permanent = 0.0;
  Real abs_formula = 0.0;
  Real error = 0.0;
};

struct PermanentBoundReport {
  Index n = 0;
  /// 1 - |<1...1|phi>|^2 for the normalized superposition (exact, no truncation).
  Real delta_inf = 0.0;
  /// sqrt(2 delta_inf)
  Real bound = 0.0;
  Real max_error = 0.0;
  /// Weight of the normalized superposition outside occupations <= 2 per mode.
  Real tail_weight = 0.0;
  Index formula_size = 0;
  bool passed = false;
  std::vector<PermanentTrial> trials;
};

///
/// Normalizes `sup`, aligns its global phase so that <1...1|phi> >= 0, and
/// compares Per(U) against F(U) on `trials` Haar unitaries (trial t uses seed
/// `seed + t`). Passes when max |Per(U) - F(U)| <= sqrt(2 delta_inf) + 1e-9.
///
/// \throws InvalidArgument if delta_inf > 0.5; ResourceLimit if n > 8.
PermanentBoundReport verify_permanent_bound(const MultimodeSuperposition& sup, int trials,
                                            std::uint64_t seed);

}  // namespace csrank
