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

#include <cmath>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "csrank/hankel.hpp"
#include "support/generators.hpp"

namespace csrank {
namespace {

using testing::for_all;
using testing::Gen;

/// b^n sqrt(n!) psi_n without any scaling, for small n.
VectorXc rescaled_sequence(const FockVector& psi, Index N, Real b) {
  VectorXc s(2 * N + 1);
  for (Index n = 0; n <= 2 * N; ++n)
    s(n) = std::pow(b, static_cast<Real>(n)) * std::sqrt(std::tgamma(n + 1.0)) * psi[n];
  return s;
}

Real max_rescaled_weight(Index N, Real b) {
  Real best = 0.0;
  for (Index n = 0; n <= 2 * N; ++n)
    best = std::max(best, static_cast<Real>(antidiagonal_multiplicity(n, N)) *
                              std::pow(b, 2.0 * n) * std::tgamma(n + 1.0));
  return best;
}

TEST(HankelFromSequence, ConstantAlongAntidiagonals) {
  Eigen::Matrix<Real, 5, 1> seq;
  seq << 1, 2, 3, 4, 5;
  const auto h = hankel_from_sequence(seq);
  ASSERT_EQ(h.rows(), 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), seq(i + j));
}

TEST(AntidiagonalMultiplicity, CountsPairs) {
  EXPECT_EQ(antidiagonal_multiplicity(0, 3), 1);
  EXPECT_EQ(antidiagonal_multiplicity(3, 3), 4);
  EXPECT_EQ(antidiagonal_multiplicity(6, 3), 1);
  EXPECT_EQ(antidiagonal_multiplicity(4, 3), 3);
}

TEST(HankelMatrix, FockStateIsAntidiagonalWithEqualSingularValues) {
  for (Index n = 1; n <= 12; ++n) {
    const HankelBundle h = hankel_matrix(fock_state(n, 2 * n), n);
    const Real expected = std::sqrt(std::tgamma(n + 1.0));
    for (Index l = 0; l <= n; ++l)
      EXPECT_NEAR(h.singular_values(l) * std::exp(h.scale_exponent) / expected, 1.0, 1e-12)
          << n << " " << l;
  }
}

TEST(HankelMatrix, FockOneIsSwapMatrix) {
  const HankelBundle h = hankel_matrix(fock_state(1, 2), 1);
  ASSERT_EQ(h.matrix.rows(), 2);
  const MatrixXc m = h.matrix * std::exp(h.scale_exponent);
  EXPECT_NEAR(std::abs(m(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(m(0, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(m(1, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(h.singular_values(0) * std::exp(h.scale_exponent), 1.0, 1e-15);
  EXPECT_NEAR(h.singular_values(1) * std::exp(h.scale_exponent), 1.0, 1e-15);
}

TEST(HankelMatrix, TwoCoherentTermsGiveRankTwo) {
  const FockVector psi =
      superposition_to_fock(CoherentSuperposition({{1.0, 0.8}, {0.6, Complex(-0.3, 0.9)}}), 40);
  EXPECT_EQ(numerical_rank(hankel_matrix(psi, 5)), 2);
}

TEST(HankelMatrix, RejectsShortVectorAndBadScale) {
  EXPECT_THROW(hankel_matrix(fock_state(1, 3), 2), InvalidArgument);
  EXPECT_THROW(hankel_matrix(fock_state(1, 4), 2, 0.0), InvalidArgument);
}

TEST(HankelMatrix, EntriesMatchDefinition) {
  Gen g(21);
  const FockVector psi = g.core_state(4);
  const Real b = 0.7;
  const HankelBundle h = hankel_matrix(psi, 4, b);
  const VectorXc s = rescaled_sequence(psi, 4, b);
  for (Index i = 0; i <= 4; ++i)
    for (Index j = 0; j <= 4; ++j)
      EXPECT_NEAR(std::abs(h.matrix(i, j) * std::exp(h.scale_exponent) - s(i + j)), 0.0,
                  1e-13 * s.cwiseAbs().maxCoeff());
  EXPECT_TRUE(h.matrix.isApprox(h.matrix.transpose(), 0.0));
}

TEST(PlainBound, FockOne) { EXPECT_NEAR(plain_bound(fock_state(1, 2), 1, 1), 0.125, 1e-16); }

TEST(PlainBound, FockStatesMatchClosedForm) {
  for (Index n = 1; n <= 12; ++n) {
    const Real expected =
        std::tgamma(n + 1.0) / (2.0 * (n + 1) * std::tgamma(2.0 * n + 1.0));
    EXPECT_NEAR(plain_bound(fock_state(n, 2 * n), n, n) / expected, 1.0, 1e-12) << n;
  }
}

TEST(PlainBound, StaysFiniteWhereFactorialsOverflow) {
  // (2N)! overflows a double for N >= 86.
  const Index n = 100;
  const Real v = plain_bound(fock_state(n, 2 * n), n, n);
  const Real log_expected = std::lgamma(n + 1.0) - std::log(2.0 * (n + 1)) - std::lgamma(2.0 * n + 1.0);
  ASSERT_GT(v, 0.0);
  EXPECT_NEAR(std::log(v), log_expected, 1e-10 * std::abs(log_expected));
}

TEST(PlainBound, SingleCoherentStateHasEmptyTail) {
  const FockVector psi = coherent_state(Complex(0.8, 0.4), 40);
  for (Index N : {1, 3, 6, 10})
    EXPECT_LE(plain_bound(psi, 1, N), 1e-12 * plain_bound(psi, 0, N)) << N;
}

TEST(PlainBound, RejectsRankAboveN) {
  EXPECT_THROW(plain_bound(fock_state(1, 4), 3, 2), InvalidArgument);
}

TEST(OptimizedBound, FockOneIsOneQuarter) {
  const OptimizedBound ob = optimized_bound(fock_state(1, 2), 1);
  EXPECT_NEAR(ob.value, 0.25, 1e-12);
  EXPECT_EQ(ob.N_star, 1);
  EXPECT_GE(ob.b_star * ob.b_star, 0.5 - 1e-9);
  EXPECT_LE(ob.b_star * ob.b_star, 1.0 + 1e-9);
}

TEST(OptimizedBound, DominatesPlainForFockStates) {
  for (Index n = 1; n <= 12; ++n) {
    const FockVector psi = fock_state(n, 2 * n);
    EXPECT_GE(optimized_bound(psi, n).value, plain_bound(psi, n, n)) << n;
  }
}

TEST(OptimizedBound, FockTwelveOrderOfMagnitude) {
  const FockVector psi = fock_state(12, 24);
  const Real v = optimized_bound(psi, 12).value;
  EXPECT_GE(v, 1e-5);
  EXPECT_LE(v, 1e-3);
  EXPECT_NEAR(v, 3.0405638845689201e-04, 1e-6 * v);
  EXPECT_LT(plain_bound(psi, 12, 12), 1e-16);
}

TEST(OptimizedBound, FrozenSmallFockValues) {
  EXPECT_NEAR(optimized_bound(fock_state(2, 4), 2).value, 1.0 / 6.0, 1e-9);
  EXPECT_NEAR(optimized_bound(fock_state(5, 10), 5).value, 3.1497039399395715e-02, 1e-9);
}

TEST(OptimizedBound, TiesBreakTowardSmallerN) {
  // The vacuum has nothing beyond rank 1 at every N; all values tie at zero.
  const OptimizedBound ob = optimized_bound(fock_state(0, 10), 1);
  EXPECT_EQ(ob.value, 0.0);
  EXPECT_EQ(ob.N_star, 1);
}

TEST(SearchConfig, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.resolved_N_max(60), 20);
  EXPECT_EQ(cfg.resolved_N_max(9), 4);
  cfg.b_points = 1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = SearchConfig{};
  cfg.N_min = 5;
  cfg.N_max = 3;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(NumericalRank, Examples) {
  for (Index n = 1; n <= 8; ++n)
    EXPECT_EQ(numerical_rank(hankel_matrix(fock_state(n, 2 * n), n)), n + 1);
  const FockVector three = superposition_to_fock(
      CoherentSuperposition({{1.0, 0.5}, {-0.7, Complex(0.2, 1.1)}, {0.4, -1.3}}), 40);
  EXPECT_EQ(numerical_rank(hankel_matrix(three, 8)), 3);
  EXPECT_EQ(numerical_rank(hankel_matrix(FockVector(VectorXc::Zero(9)), 4)), 0);
}

TEST(HankelProperties, PlainBoundIsNonIncreasingInR) {
  for_all(50, 31, [](Gen& g, int k) {
    const Index d = g.integer(1, 8);
    const FockVector psi = g.core_state(d);
    const Index N = g.integer(1, static_cast<int>(d));
    for (Index r = 1; r <= N; ++r)
      EXPECT_LE(plain_bound(psi, r, N), plain_bound(psi, r - 1, N)) << "case " << k;
  });
}

TEST(HankelProperties, PlainBoundAtFullRankUsesLastSingularValue) {
  for_all(30, 32, [](Gen& g, int k) {
    const Index d = g.integer(1, 6);
    const FockVector psi = g.core_state(d);
    const HankelBundle h = hankel_matrix(psi, d);
    const Real sigma = h.singular_values(d) * std::exp(h.scale_exponent);
    const Real expected =
        sigma * sigma / (2.0 * (d + 1) * std::tgamma(2.0 * d + 1.0));
    EXPECT_NEAR(plain_bound(psi, d, d), expected, 1e-10 * expected + 1e-300) << "case " << k;
  });
}

TEST(HankelProperties, GlobalPhaseLeavesSingularValuesUnchanged) {
  for_all(50, 33, [](Gen& g, int k) {
    const Index d = g.integer(1, 8);
    const FockVector psi = g.core_state(d);
    const FockVector rotated(psi.amplitudes() * std::polar(1.0, g.uniform(0.0, 6.3)));
    const Real b = std::exp(g.uniform(-1.0, 1.0));
    const HankelBundle a = hankel_matrix(psi, d, b);
    const HankelBundle c = hankel_matrix(rotated, d, b);
    EXPECT_NEAR(a.scale_exponent, c.scale_exponent, 1e-12);
    EXPECT_LT((a.singular_values - c.singular_values).cwiseAbs().maxCoeff(),
              1e-12 * a.singular_values(0))
        << "case " << k;
  });
}

TEST(HankelProperties, OptimizedDominatesPlainAtEverySearchedN) {
  for_all(20, 34, [](Gen& g, int k) {
    const Index d = g.integer(2, 7);
    const FockVector psi = g.core_state(d);
    const Index r = g.integer(1, static_cast<int>(d));
    const Real opt = optimized_bound(psi, r).value;
    for (Index N = r; N <= d; ++N)
      EXPECT_GE(opt, plain_bound(psi, r, N)) << "case " << k << " N " << N;
    EXPECT_GE(rescaled_bound(psi, r, d, 1.0), plain_bound(psi, r, d) * (1.0 - 1e-12));
  });
}

TEST(HankelProperties, FrobeniusDistanceIsControlledByStateDistance) {
  for_all(120, 35, [](Gen& g, int k) {
    const Index N = g.integer(1, 6);
    const FockVector psi = g.core_state(2 * N);
    const FockVector phi = g.core_state(2 * N);
    const Real b = k % 2 == 0 ? 1.0 : std::exp(g.uniform(-1.5, 1.0));
    const auto hp = hankel_from_sequence(rescaled_sequence(psi, N, b));
    const auto hq = hankel_from_sequence(rescaled_sequence(phi, N, b));
    const Real lhs = (hp - hq).squaredNorm();
    const Real dist2 = (psi.amplitudes() - phi.amplitudes()).squaredNorm();
    EXPECT_LE(lhs, max_rescaled_weight(N, b) * dist2 * (1.0 + 1e-12)) << "case " << k;
    if (b == 1.0)
      EXPECT_LE(lhs, (N + 1) * std::tgamma(2.0 * N + 1.0) * dist2 * (1.0 + 1e-12));
  });
}

TEST(HankelProperties, TruncatedSvdErrorEqualsTailEnergy) {
  for_all(50, 36, [](Gen& g, int k) {
    const Index d = g.integer(1, 8);
    const FockVector psi = g.core_state(d);
    const HankelBundle h = hankel_matrix(psi, d, std::exp(g.uniform(-1.0, 1.0)));
    Eigen::JacobiSVD<MatrixXc> svd(h.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index r = g.integer(0, static_cast<int>(d));
    VectorXr kept = svd.singularValues();
    kept.tail(kept.size() - r).setZero();
    const MatrixXc approx = svd.matrixU() * kept.cast<Complex>().asDiagonal() *
                            svd.matrixV().adjoint();
    const Real err = (h.matrix - approx).squaredNorm();
    const Real tail = h.tail_energy(r);
    EXPECT_NEAR(err, tail, 1e-10 * tail + 1e-14 * h.singular_values(0) * h.singular_values(0))
        << "case " << k;
  });
}

}  // namespace
}  // namespace csrank
