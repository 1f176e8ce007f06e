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

#include "csrank/certify.hpp"

#include <cmath>

#include "csrank/io.hpp"

namespace csrank {

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::plain: return "plain";
    case BoundMethod::optimized: return "optimized";
    case BoundMethod::analytic_fock: return "analytic_fock";
  }
  return "unknown";
}

BoundMethod bound_method_from_string(const std::string& s) {
  if (s == "plain") return BoundMethod::plain;
  if (s == "optimized") return BoundMethod::optimized;
  if (s == "analytic_fock" || s == "analytic") return BoundMethod::analytic_fock;
  throw InvalidArgument("unknown bound method '" + s + "'");
}

nlohmann::json to_json(const BoundCertificate& cert) {
  nlohmann::json j;
  j["state"] = cert.state_descriptor;
  j["r"] = cert.r;
  j["epsilon_threshold"] = cert.epsilon_threshold;
  j["method"] = to_string(cert.method);
  j["parameters"] = {{"N", cert.N}, {"b", cert.b}};
  j["statement"] = BoundCertificate::kStatement;
  if (cert.epsilon) {
    j["epsilon"] = *cert.epsilon;
    j["certified"] = *cert.epsilon < cert.epsilon_threshold;
  }
  j["version"] = kVersion;
  j["tolerances"] = {
      {"rank_tol", cert.config.rank_tol},
      {"b_grid", {cert.config.log10_b_min, cert.config.log10_b_max, cert.config.b_points}},
      {"refine_iters", cert.config.refine_iters},
      {"N_min", cert.config.N_min},
      {"N_max", cert.config.N_max},
  };
  return j;
}

BoundCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    BoundCertificate c;
    c.state_descriptor = j.at("state");
    c.r = j.at("r").get<Index>();
    c.epsilon_threshold = j.at("epsilon_threshold").get<Real>();
    c.method = bound_method_from_string(j.at("method").get<std::string>());
    c.N = j.at("parameters").at("N").get<Index>();
    c.b = j.at("parameters").at("b").get<Real>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<Real>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.config.rank_tol = t.value("rank_tol", c.config.rank_tol);
      if (t.contains("b_grid")) {
        c.config.log10_b_min = t.at("b_grid").at(0).get<Real>();
        c.config.log10_b_max = t.at("b_grid").at(1).get<Real>();
        c.config.b_points = t.at("b_grid").at(2).get<Index>();
      }
      c.config.refine_iters = t.value("refine_iters", c.config.refine_iters);
      c.config.N_min = t.value("N_min", c.config.N_min);
      c.config.N_max = t.value("N_max", c.config.N_max);
    }
    if (c.r < 0 || c.epsilon_threshold < 0.0)
      throw InvalidArgument("certificate: r and epsilon_threshold must be >= 0");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("certificate: malformed JSON: ") + e.what());
  }
}

nlohmann::json to_json(const RecurrenceReport& report) {
  nlohmann::json j;
  j["saturated"] = report.saturated;
  j["detected_order"] = report.detected_order ? nlohmann::json(*report.detected_order)
                                              : nlohmann::json(nullptr);
  j["ranks_by_N"] = nlohmann::json::array();
  for (const auto& s : report.ranks_by_N)
    j["ranks_by_N"].push_back(
        {{"N", s.N}, {"rank", s.rank}, {"full_rank_bound", s.full_rank_bound}});
  return j;
}

BoundCertificate certify_rank(const FockVector& psi, Real epsilon,
                              const SearchConfig& cfg) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("certify_rank: epsilon must lie in (0, 1)");
  cfg.validate();
  BoundCertificate cert;
  cert.method = BoundMethod::optimized;
  cert.epsilon = epsilon;
  cert.config = cfg;

  const Index n_hi = cfg.resolved_N_max(psi.cutoff());
  // The tail sum shrinks as r grows, so the first failure ends the search.
  for (Index r = 1; r <= n_hi; ++r) {
    const OptimizedBound ob = optimized_bound(psi, r, cfg);
    if (!(ob.value > epsilon)) break;
    cert.r = r;
    cert.epsilon_threshold = ob.value;
    cert.N = ob.N_star;
    cert.b = ob.b_star;
  }
  return cert;
}

Real fock_analytic_threshold(Index n) { return fock_analytic_threshold(n, n); }

Real fock_analytic_threshold(Index n, Index r) {
  if (n < 0) throw InvalidArgument("fock_analytic_threshold: n must be >= 0");
  if (r < 0 || r > n)
    throw InvalidArgument("fock_analytic_threshold: require 0 <= r <= n");
  const Real log_v = std::log(static_cast<Real>(n + 1 - r)) + detail::log_factorial(n) -
                     std::log(2.0) - std::log(static_cast<Real>(n + 1)) -
                     detail::log_factorial(2 * n);
  return std::exp(log_v);
}

RecurrenceReport recurrence_order(const FockVector& psi, Index N_max, Real rel_tol) {
  if (N_max < 1) throw InvalidArgument("recurrence_order: N_max must be >= 1");
  if (psi.cutoff() < 2 * N_max)
    throw InvalidArgument("recurrence_order: state cutoff must be at least 2 N_max");
  RecurrenceReport report;
  for (Index N = 1; N <= N_max; ++N) {
    const HankelBundle h = hankel_matrix(psi, N, 1.0);
    const Real log_den =
        std::log(static_cast<Real>(N + 1)) + detail::log_factorial(2 * N);
    report.ranks_by_N.push_back(
        {N, numerical_rank(h, rel_tol),
         detail::assemble_bound(h.tail_energy(N), h.scale_exponent, log_den)});
  }
  const auto& steps = report.ranks_by_N;
  if (static_cast<Index>(steps.size()) >= kSaturationWindow) {
    const Index last = steps.back().rank;
    bool constant = true;
    for (Index k = 0; k < kSaturationWindow; ++k)
      constant = constant && steps[steps.size() - 1 - k].rank == last;
    if (constant && last < steps.back().N + 1) {
      report.saturated = true;
      report.detected_order = last;
    }
  }
  return report;
}

Real recompute_threshold(const BoundCertificate& cert) {
  if (cert.r == 0 && cert.epsilon_threshold == 0.0) return 0.0;
  switch (cert.method) {
    case BoundMethod::plain:
      return plain_bound(state_from_json(cert.state_descriptor), cert.r, cert.N);
    case BoundMethod::optimized:
      return rescaled_bound(state_from_json(cert.state_descriptor), cert.r, cert.N, cert.b);
    case BoundMethod::analytic_fock: {
      const auto& d = cert.state_descriptor;
      if (!d.is_object() || d.value("type", "") != "fock")
        throw InvalidArgument("analytic_fock certificates require a Fock descriptor");
      return fock_analytic_threshold(d.at("n").get<Index>(), cert.r);
    }
  }
  return 0.0;
}

bool check_certificate(const BoundCertificate& cert, Real rel_tol) {
  const Real v = recompute_threshold(cert);
  return std::abs(v - cert.epsilon_threshold) <=
         rel_tol * std::max(std::abs(cert.epsilon_threshold), 1e-300);
}

}  // namespace csrank
