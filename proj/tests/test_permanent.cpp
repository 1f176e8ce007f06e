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

#include <gtest/gtest.h>

#include "csrank/permanent.hpp"
#include "support/generators.hpp"

namespace csrank {
namespace {

using testing::for_all;
using testing::Gen;

Real relative_gap(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(a)); }

TEST(Permanent, SmallExamples) {
  EXPECT_EQ(permanent_naive(MatrixXc::Identity(3, 3)), Complex(1.0));
  Eigen::Matrix2d m;
  m << 1, 2, 3, 4;
  EXPECT_EQ(permanent_naive(m), 10.0);
  EXPECT_EQ(permanent_ryser(m), 10.0);
  EXPECT_EQ(permanent_glynn(m), 10.0);
  EXPECT_EQ(permanent_naive(Eigen::Matrix2d::Ones()), 2.0);
  EXPECT_EQ(permanent_ryser(MatrixXc(0, 0)), Complex(1.0));
  EXPECT_EQ(permanent_glynn(MatrixXc(0, 0)), Complex(1.0));
}

TEST(Permanent, IdentityUpToTwenty) {
  for (Index n = 1; n <= 20; ++n) {
    EXPECT_NEAR(permanent_glynn(Eigen::MatrixXd::Identity(n, n)), 1.0, 1e-12) << n;
    if (n <= 16) EXPECT_NEAR(permanent_ryser(Eigen::MatrixXd::Identity(n, n)), 1.0, 1e-12) << n;
  }
}

TEST(Permanent, AllOnesIsFactorial) {
  for (Index n = 1; n <= 10; ++n) {
    const Real f = std::tgamma(n + 1.0);
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
    if (n <= 8) EXPECT_NEAR(permanent_naive(ones) / f, 1.0, 1e-12) << n;
    EXPECT_NEAR(permanent_ryser(ones) / f, 1.0, 1e-12) << n;
    EXPECT_NEAR(permanent_glynn(ones) / f, 1.0, 1e-12) << n;
  }
}

TEST(Permanent, SizeLimits) {
  EXPECT_THROW(permanent_naive(MatrixXc::Identity(9, 9)), ResourceLimit);
  EXPECT_THROW(permanent_ryser(MatrixXc::Identity(25, 25)), ResourceLimit);
  EXPECT_THROW(permanent_glynn(MatrixXc::Identity(25, 25)), ResourceLimit);
  EXPECT_THROW(permanent_glynn(MatrixXc(2, 3)), InvalidArgument);
}

TEST(PermanentProperties, KernelsAgreeOnRandomMatrices) {
  for_all(60, 71, [](Gen& g, int k) {
    const Index n = g.integer(1, 8);
    const MatrixXc mm = g.matrix(n, n);
    const Complex naive = permanent_naive(mm);
    EXPECT_LT(relative_gap(naive, permanent_ryser(mm)), 1e-9) << "case " << k;
    EXPECT_LT(relative_gap(naive, permanent_glynn(mm)), 1e-9) << "case " << k;
  });
}

TEST(HaarUnitary, Examples) {
  const UnitaryMatrix one = haar_unitary(1, 5);
  EXPECT_NEAR(std::abs(one(0, 0)), 1.0, 1e-15);
  const MatrixXc u = haar_unitary(8, 17).matrix();
  EXPECT_LT((u.adjoint() * u - MatrixXc::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(haar_unitary(6, 3).matrix(), haar_unitary(6, 3).matrix());
  EXPECT_NE(haar_unitary(6, 3).matrix(), haar_unitary(6, 4).matrix());
  EXPECT_THROW(haar_unitary(0, 1), InvalidArgument);
}

TEST(HaarUnitary, PhasesAreUniform) {
  // For Haar samples, E[U(0,0)] = 0 and E[|U(0,0)|^2] = 1/n.
  Complex mean{};
  Real second = 0.0;
  const int samples = 4000;
  for (int s = 0; s < samples; ++s) {
    const Complex z = haar_unitary(3, 1000 + s)(0, 0);
    mean += z;
    second += std::norm(z);
  }
  EXPECT_LT(std::abs(mean) / samples, 0.03);
  EXPECT_NEAR(second / samples, 1.0 / 3.0, 0.02);
}

TEST(Formula, SingleTermOfOnes) {
  const Index n = 3;
  const MultilinearFormula f =
      formula_from_decomposition(MultimodeSuperposition({{1.0, VectorXc::Ones(n)}}));
  EXPECT_EQ(f.size(), n * n);
  Gen g(72);
  const MatrixXc x = g.matrix(n, n);
  const Complex expected = std::exp(-0.5 * n) * x.rowwise().sum().prod();
  EXPECT_NEAR(std::abs(evaluate_formula(f, x) - expected), 0.0, 1e-14);
}

TEST(Formula, CatDecompositionHasSignedDeltaRows) {
  const int n = 4;
  const Real d = 0.3;
  const MultilinearFormula f = formula_from_decomposition(ones_cat_decomposition(n, d));
  EXPECT_EQ(f.terms(), 16);
  EXPECT_EQ(f.size(), 16 * n * n);
  for (Index j = 0; j < f.terms(); ++j)
    for (Index k = 0; k < n; ++k) EXPECT_NEAR(std::abs(f.alphas(j, k)), d, 1e-15);
}

TEST(Formula, GammaOfZeroDisplacementIsCoefficient) {
  const MultilinearFormula f =
      formula_from_decomposition(MultimodeSuperposition({{Complex(0.3, 0.2), VectorXc::Zero(2)}}));
  EXPECT_EQ(f.gammas(0), Complex(0.3, 0.2));
}

TEST(Formula, EvaluationExamples) {
  const MultilinearFormula f =
      formula_from_decomposition(MultimodeSuperposition({{1.0, VectorXc::Ones(2)}}));
  EXPECT_NEAR(std::abs(evaluate_formula(f, MatrixXc::Identity(2, 2)) - std::exp(-1.0)), 0.0, 1e-15);
  const MultilinearFormula cats = formula_from_decomposition(ones_cat_decomposition(3, 0.2));
  EXPECT_EQ(evaluate_formula(cats, MatrixXc::Zero(3, 3)), Complex(0.0));
  EXPECT_THROW(evaluate_formula(cats, MatrixXc::Zero(2, 3)), InvalidArgument);
}

TEST(PermanentProperties, FormulaIsLinearInEachRow) {
  for_all(40, 73, [](Gen& g, int k) {
    const int n = g.integer(1, 5);
    const MultilinearFormula f = formula_from_decomposition(ones_cat_decomposition(n, g.uniform(0.1, 1.0)));
    const MatrixXc x = g.matrix(n, n);
    const Complex t = g.complex_normal();
    const Index row = g.integer(0, n - 1);
    MatrixXc scaled = x;
    scaled.row(row) *= t;
    const Complex base = evaluate_formula(f, x);
    EXPECT_NEAR(std::abs(evaluate_formula(f, scaled) - t * base), 0.0,
                1e-12 * (1.0 + std::abs(t * base)))
        << "case " << k;
    // Affine with zero constant: the row's contributions add.
    MatrixXc y = x;
    y.row(row) = g.matrix(1, n);
    MatrixXc sum = x;
    sum.row(row) += y.row(row);
    EXPECT_NEAR(std::abs(evaluate_formula(f, sum) - base - evaluate_formula(f, y)), 0.0,
                1e-12 * (1.0 + std::abs(base)))
        << "case " << k;
  });
}

TEST(PermanentBridge, OnesAmplitudeEqualsPermanent) {
  for (int s = 0; s < 10; ++s) {
    const UnitaryMatrix u = haar_unitary(4, 500 + s);
    const MultimodeFockState out = evolve(MultimodeFockState::ones(4), u);
    EXPECT_NEAR(std::abs(out[{1, 1, 1, 1}] - permanent_glynn(u.matrix())), 0.0, 1e-10) << s;
  }
}

TEST(VerifyPermanentBound, CatDecompositionAtTwoRadii) {
  const PermanentBoundReport coarse = verify_permanent_bound(ones_cat_decomposition(4, 0.5), 100, 0);
  const PermanentBoundReport fine = verify_permanent_bound(ones_cat_decomposition(4, 0.2), 100, 0);
  for (const auto* r : {&coarse, &fine}) {
    EXPECT_TRUE(r->passed);
    EXPECT_LE(r->max_error, r->bound + 1e-9);
    EXPECT_EQ(r->trials.size(), 100u);
    EXPECT_EQ(r->formula_size, 16 * 16);
  }
  EXPECT_LT(fine.delta_inf, coarse.delta_inf);
  EXPECT_LT(fine.max_error, coarse.max_error);
  EXPECT_EQ(coarse.trials[7].seed, 7u);
}

TEST(VerifyPermanentBound, ScalarCase) {
  const PermanentBoundReport r = verify_permanent_bound(ones_cat_decomposition(1, 0.3), 50, 9);
  EXPECT_TRUE(r.passed);
  for (const auto& t : r.trials) {
    EXPECT_NEAR(t.abs_permanent, 1.0, 1e-12);
    EXPECT_LE(t.error, r.bound + 1e-9);
  }
}

TEST(VerifyPermanentBound, RejectsDistantOrLargeInputs) {
  VectorXc far(2);
  far << 3.0, 3.0;
  EXPECT_THROW(verify_permanent_bound(MultimodeSuperposition({{1.0, far}}), 1, 0), InvalidArgument);
  EXPECT_THROW(verify_permanent_bound(ones_cat_decomposition(9, 0.2), 1, 0), ResourceLimit);
}

}  // namespace
}  // namespace csrank
