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
#include <limits>

#include <gtest/gtest.h>

#include "csrank/certify.hpp"
#include "csrank/io.hpp"
#include "support/generators.hpp"

namespace csrank {
namespace {

using testing::for_all;
using testing::Gen;

TEST(FockAnalyticThreshold, Examples) {
  EXPECT_NEAR(fock_analytic_threshold(1), 0.125, 1e-16);
  EXPECT_NEAR(fock_analytic_threshold(12) / 2.9693264435967724e-17, 1.0, 1e-12);
  EXPECT_NEAR(fock_analytic_threshold(0), 0.5, 1e-16);
}

TEST(FockAnalyticThreshold, AgreesWithPlainBound) {
  for (Index n = 1; n <= 12; ++n) {
    const FockVector psi = fock_state(n, 2 * n);
    EXPECT_NEAR(plain_bound(psi, n, n) / fock_analytic_threshold(n), 1.0, 1e-12) << n;
    for (Index r = 0; r <= n; ++r)
      EXPECT_NEAR(plain_bound(psi, r, n) / fock_analytic_threshold(n, r), 1.0, 1e-12)
          << n << " " << r;
  }
  EXPECT_THROW(fock_analytic_threshold(3, 4), InvalidArgument);
}

TEST(CertifyRank, FockOneAtTenPercent) {
  const BoundCertificate c = certify_rank(fock_state(1, 2), 0.1);
  EXPECT_EQ(c.r, 1);
  EXPECT_NEAR(c.epsilon_threshold, 0.25, 1e-12);
  EXPECT_EQ(c.method, BoundMethod::optimized);
}

TEST(CertifyRank, CoherentStateIsNeverCertified) {
  const BoundCertificate c = certify_rank(coherent_state(1.0, 40), 1e-6);
  EXPECT_EQ(c.r, 0);
  EXPECT_EQ(c.epsilon_threshold, 0.0);
}

TEST(CertifyRank, SqueezedStateBeyondRankTwo) {
  SearchConfig cfg;
  cfg.N_max = 10;
  const BoundCertificate c =
      certify_rank(squeezed_state(SqueezedParams(0.5, 0.0), 40), 1e-8, cfg);
  EXPECT_GE(c.r, 2);
  EXPECT_GT(c.epsilon_threshold, 1e-8);
}

TEST(CertifyRank, RejectsEpsilonOutsideUnitInterval) {
  EXPECT_THROW(certify_rank(fock_state(1, 2), 0.0), InvalidArgument);
  EXPECT_THROW(certify_rank(fock_state(1, 2), 1.0), InvalidArgument);
}

TEST(RecurrenceOrder, TwoCoherentTerms) {
  const FockVector psi =
      superposition_to_fock(CoherentSuperposition({{1.0, 0.6}, {1.0, -0.9}}), 40);
  const RecurrenceReport rep = recurrence_order(psi, 8);
  ASSERT_TRUE(rep.detected_order.has_value());
  EXPECT_EQ(*rep.detected_order, 2);
  EXPECT_TRUE(rep.saturated);
  EXPECT_EQ(rep.ranks_by_N.size(), 8u);
}

TEST(RecurrenceOrder, FockThreeHasOrderFour) {
  const RecurrenceReport rep = recurrence_order(fock_state(3, 16), 8);
  ASSERT_TRUE(rep.detected_order.has_value());
  EXPECT_EQ(*rep.detected_order, 4);
}

TEST(RecurrenceOrder, SqueezedStateNeverSaturates) {
  const RecurrenceReport rep = recurrence_order(squeezed_state(SqueezedParams(0.5, 0.0), 40), 8);
  EXPECT_FALSE(rep.saturated);
  EXPECT_FALSE(rep.detected_order.has_value());
  for (const auto& s : rep.ranks_by_N) {
    EXPECT_EQ(s.rank, s.N + 1) << s.N;
    EXPECT_GT(s.full_rank_bound, 0.0);
  }
}

TEST(RecurrenceOrder, RejectsShortState) {
  EXPECT_THROW(recurrence_order(fock_state(1, 5), 3), InvalidArgument);
}

TEST(Certificate, JsonRoundTripAndCheck) {
  const nlohmann::json desc = resolve_descriptor({{"type", "squeezed"}, {"r", 0.4}, {"phi", 0.2}});
  BoundCertificate c = certify_rank(state_from_json(desc), 1e-5);
  c.state_descriptor = desc;
  const nlohmann::json j = to_json(c);
  for (const char* key : {"state", "r", "epsilon_threshold", "method", "parameters", "statement",
                          "epsilon", "certified", "version", "tolerances"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("certified"), true);
  const BoundCertificate back = certificate_from_json(j);
  EXPECT_EQ(back.r, c.r);
  EXPECT_EQ(back.epsilon_threshold, c.epsilon_threshold);
  EXPECT_EQ(back.N, c.N);
  EXPECT_EQ(back.b, c.b);
  EXPECT_TRUE(check_certificate(back));

  BoundCertificate tampered = back;
  tampered.epsilon_threshold *= 1.001;
  EXPECT_FALSE(check_certificate(tampered));
}

TEST(Certificate, PlainAndAnalyticRecompute) {
  BoundCertificate c;
  c.state_descriptor = {{"type", "fock"}, {"n", 4}};
  c.r = 4;
  c.N = 4;
  c.method = BoundMethod::plain;
  c.epsilon_threshold = fock_analytic_threshold(4);
  EXPECT_TRUE(check_certificate(c));
  c.method = BoundMethod::analytic_fock;
  EXPECT_TRUE(check_certificate(c));
  c.state_descriptor = {{"type", "core"}, {"amps", {1, 0, 0, 0, 1}}};
  EXPECT_THROW(check_certificate(c), InvalidArgument);
}

TEST(Certificate, MalformedJsonIsRejected) {
  EXPECT_THROW(certificate_from_json({{"r", 1}}), InvalidArgument);
  EXPECT_THROW(bound_method_from_string("exact"), InvalidArgument);
}

TEST(CertifyProperties, CertifiedRankIsNonIncreasingInEpsilon) {
  for_all(15, 41, [](Gen& g, int k) {
    const FockVector psi = g.core_state(g.integer(2, 6));
    Index previous = std::numeric_limits<Index>::max();
    for (Real eps : {1e-9, 1e-7, 1e-5, 1e-3, 1e-2, 1e-1}) {
      const Index r = certify_rank(psi, eps).r;
      EXPECT_LE(r, previous) << "case " << k << " eps " << eps;
      previous = r;
    }
  });
}

TEST(CertifyProperties, RecurrenceOrderOfExponentialSums) {
  // psi_n = sum_i d_i lambda_i^n / sqrt(n!) has a rescaled sequence obeying a
  // linear recurrence of order k.
  for_all(40, 42, [](Gen& g, int k) {
    const int order = g.integer(1, 5);
    const CoherentSuperposition sup = g.superposition(order, 2.0, 0.2);
    VectorXc v(21);
    std::vector<Complex> powers(sup.size(), Complex(1.0));
    for (Index n = 0; n <= 20; ++n) {
      Complex s{};
      for (std::size_t i = 0; i < sup.size(); ++i) {
        s += sup.terms()[i].c * powers[i];
        powers[i] *= sup.terms()[i].alpha;
      }
      v(n) = s * std::exp(-0.5 * detail::log_factorial(n));
    }
    const RecurrenceReport rep = recurrence_order(FockVector(v / v.norm()), 10);
    ASSERT_TRUE(rep.detected_order.has_value()) << "case " << k;
    EXPECT_EQ(*rep.detected_order, order) << "case " << k;
  });
}

}  // namespace
}  // namespace csrank
