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
/// \file certify.hpp
///
/// Rank certificates built from the Hankel bounds, analytic Fock-state
/// thresholds and finite-order (linear recurrence) detection.
///
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csrank/hankel.hpp"

namespace csrank {

enum class BoundMethod { plain, optimized, analytic_fock };

std::string to_string(BoundMethod m);
BoundMethod bound_method_from_string(const std::string& s);

///
/// Machine-checkable claim: every epsilon < epsilon_threshold implies
/// kappa_epsilon(state) > r.
///
struct BoundCertificate {
  static constexpr const char* kStatement =
      "any eps < epsilon_threshold implies kappa_eps(state) > r";

  nlohmann::json state_descriptor;
  Index r = 0;
  Real epsilon_threshold = 0.0;
  BoundMethod method = BoundMethod::optimized;
  Index N = 0;
  Real b = 1.0;
  /// Epsilon the certificate was requested for, if any.
  std::optional<Real> epsilon;
  SearchConfig config;
};

nlohmann::json to_json(const BoundCertificate& cert);
BoundCertificate certificate_from_json(const nlohmann::json& j);

struct RecurrenceStep {
  Index N = 0;
  Index rank = 0;
  /// Plain bound at r = N, i.e. the epsilon below which kappa_eps > N.
  Real full_rank_bound = 0.0;
};

struct RecurrenceReport {
  std::optional<Index> detected_order;
  std::vector<RecurrenceStep> ranks_by_N;
  bool saturated = false;
};

nlohmann::json to_json(const RecurrenceReport& report);

/// Consecutive equal ranks required before a finite order is declared.
inline constexpr Index kSaturationWindow = 3;

///
/// Largest r with optimized_bound(psi, r, cfg) > epsilon, searched upward
/// from r = 1. Returns r = 0 with threshold 0 when nothing certifies.
///
/// \throws InvalidArgument unless 0 < epsilon < 1.
BoundCertificate certify_rank(const FockVector& psi, Real epsilon,
                              const SearchConfig& cfg = {});

/// n! / (2 (n+1) (2n)!), evaluated in log space.
Real fock_analytic_threshold(Index n);

/// (n + 1 - r) n! / (2 (n+1) (2n)!) for 0 <= r <= n: the plain bound of
/// |n> at N = n with the tail starting after r equal singular values.
Real fock_analytic_threshold(Index n, Index r);

/// Numerical ranks of H_N(psi) for N = 1..N_max.
RecurrenceReport recurrence_order(const FockVector& psi, Index N_max,
                                  Real rel_tol = 1e-10);

/// Recomputes the threshold from the stored state and parameters.
/// Returns the recomputed value.
Real recompute_threshold(const BoundCertificate& cert);

/// True when the recomputed threshold matches to `rel_tol`.
bool check_certificate(const BoundCertificate& cert, Real rel_tol = 1e-12);

}  // namespace csrank
