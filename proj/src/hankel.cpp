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

#include "csrank/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "csrank/parallel.hpp"

namespace csrank {

namespace detail {

Real log_rescaled_denominator(Index N, Real b) {
  const Real log_b = std::log(b);
  Real best = -INFINITY;
  for (Index n = 0; n <= 2 * N; ++n) {
    const Real v = std::log(static_cast<Real>(antidiagonal_multiplicity(n, N))) +
                   2.0 * static_cast<Real>(n) * log_b + log_factorial(n);
    best = std::max(best, v);
  }
  return best;
}

Real assemble_bound(Real tail, Real scale_exponent, Real log_denominator) {
  if (!(tail > 0.0)) return 0.0;
  return std::exp(std::log(tail) + 2.0 * scale_exponent - std::log(2.0) -
                  log_denominator);
}

}  // namespace detail

Real HankelBundle::tail_energy(Index r) const {
  Real tail = 0.0;
  for (Index l = std::max<Index>(r, 0); l < singular_values.size(); ++l)
    tail += singular_values(l) * singular_values(l);
  return tail;
}

void SearchConfig::validate() const {
  if (N_min < 0) throw InvalidArgument("SearchConfig: N_min must be >= 0");
  if (N_max >= 0 && N_max < N_min)
    throw InvalidArgument("SearchConfig: N_min must not exceed N_max");
  if (!(log10_b_min < log10_b_max) || !std::isfinite(log10_b_min) ||
      !std::isfinite(log10_b_max))
    throw InvalidArgument("SearchConfig: invalid b range");
  if (b_points < 2) throw InvalidArgument("SearchConfig: need at least 2 grid points");
  if (refine_iters < 0) throw InvalidArgument("SearchConfig: refine_iters must be >= 0");
  if (!(rank_tol > 0.0 && rank_tol < 1.0))
    throw InvalidArgument("SearchConfig: rank_tol must lie in (0, 1)");
}

Index SearchConfig::resolved_N_max(Index cutoff) const {
  return N_max >= 0 ? N_max : std::min<Index>(20, cutoff / 2);
}

HankelBundle hankel_matrix(const FockVector& psi, Index N, Real b) {
  if (N < 0) throw InvalidArgument("hankel_matrix: N must be >= 0");
  if (!(b > 0.0) || !std::isfinite(b))
    throw InvalidArgument("hankel_matrix: b must be positive and finite");
  if (psi.cutoff() < 2 * N)
    throw InvalidArgument("hankel_matrix: state cutoff must be at least 2N");

  const Index len = 2 * N + 1;
  const Real log_b = std::log(b);
  std::vector<Real> log_mag(len, -INFINITY);
  Real scale = -INFINITY;
  for (Index n = 0; n < len; ++n) {
    const Real a = std::abs(psi[n]);
    if (a == 0.0) continue;
    log_mag[n] = static_cast<Real>(n) * log_b + 0.5 * detail::log_factorial(n) +
                 std::log(a);
    scale = std::max(scale, log_mag[n]);
  }
  if (!std::isfinite(scale)) scale = 0.0;

  VectorXc seq = VectorXc::Zero(len);
  for (Index n = 0; n < len; ++n)
    if (std::isfinite(log_mag[n]))
      seq(n) = std::polar(std::exp(log_mag[n] - scale), std::arg(psi[n]));

  HankelBundle out;
  out.matrix = hankel_from_sequence(seq);
  out.N = N;
  out.b = b;
  out.scale_exponent = scale;
  Eigen::JacobiSVD<MatrixXc> svd(out.matrix);
  out.singular_values = svd.singularValues();
  return out;
}

Index numerical_rank(const HankelBundle& bundle, Real rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw InvalidArgument("numerical_rank: rel_tol must lie in (0, 1)");
  const auto& sv = bundle.singular_values;
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return (sv.array() > rel_tol * sv(0)).count();
}

Real plain_bound(const FockVector& psi, Index r, Index N) {
  if (r < 0 || r > N) throw InvalidArgument("plain_bound: require 0 <= r <= N");
  const HankelBundle h = hankel_matrix(psi, N, 1.0);
  const Real log_den =
      std::log(static_cast<Real>(N + 1)) + detail::log_factorial(2 * N);
  return detail::assemble_bound(h.tail_energy(r), h.scale_exponent, log_den);
}

Real rescaled_bound(const HankelBundle& bundle, Index r) {
  if (r < 0) throw InvalidArgument("rescaled_bound: r must be >= 0");
  return detail::assemble_bound(bundle.tail_energy(r), bundle.scale_exponent,
                                detail::log_rescaled_denominator(bundle.N, bundle.b));
}

Real rescaled_bound(const FockVector& psi, Index r, Index N, Real b) {
  return rescaled_bound(hankel_matrix(psi, N, b), r);
}

namespace {

struct Candidate {
  Real value = -1.0;
  Real b = 1.0;
};

Candidate search_b(const FockVector& psi, Index r, Index N, const SearchConfig& cfg) {
  std::vector<Real> log_b(cfg.b_points);
  const Real step = (cfg.log10_b_max - cfg.log10_b_min) / static_cast<Real>(cfg.b_points - 1);
  for (Index k = 0; k < cfg.b_points; ++k)
    log_b[k] = std::log(10.0) * (cfg.log10_b_min + step * static_cast<Real>(k));
  if (std::find(log_b.begin(), log_b.end(), 0.0) == log_b.end()) {
    log_b.push_back(0.0);
    std::sort(log_b.begin(), log_b.end());
  }

  auto eval = [&](Real lb) { return rescaled_bound(psi, r, N, std::exp(lb)); };

  std::size_t best = 0;
  Candidate top;
  for (std::size_t k = 0; k < log_b.size(); ++k) {
    const Real v = eval(log_b[k]);
    if (v > top.value) {
      top = {v, std::exp(log_b[k])};
      best = k;
    }
  }
  if (cfg.refine_iters == 0 || top.value <= 0.0) return top;

  // Golden-section search on the bracketing grid cells.
  Real lo = log_b[best == 0 ? 0 : best - 1];
  Real hi = log_b[std::min(best + 1, log_b.size() - 1)];
  const Real g = (std::sqrt(5.0) - 1.0) / 2.0;
  Real x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  Real f1 = eval(x1), f2 = eval(x2);
  for (Index it = 0; it < cfg.refine_iters; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = eval(x2);
    }
  }
  const Real x = f1 >= f2 ? x1 : x2;
  const Real fx = std::max(f1, f2);
  if (fx > top.value) top = {fx, std::exp(x)};
  return top;
}

}  // namespace

OptimizedBound optimized_bound(const FockVector& psi, Index r, const SearchConfig& cfg) {
  cfg.validate();
  if (r < 0) throw InvalidArgument("optimized_bound: r must be >= 0");
  const Index n_hi = cfg.resolved_N_max(psi.cutoff());
  const Index n_lo = std::max(r, cfg.N_min);
  if (n_lo > n_hi) throw InvalidArgument("optimized_bound: r exceeds N_max");
  if (psi.cutoff() < 2 * n_hi)
    throw InvalidArgument("optimized_bound: state cutoff must be at least 2 N_max");

  const auto per_n = parallel_map(static_cast<std::size_t>(n_hi - n_lo + 1),
                                  [&](std::size_t k) {
                                    return search_b(psi, r, n_lo + static_cast<Index>(k), cfg);
                                  });
  OptimizedBound out{0.0, 1.0, n_lo};
  Real best = -1.0;
  for (std::size_t k = 0; k < per_n.size(); ++k) {
    if (per_n[k].value > best) {
      best = per_n[k].value;
      out = {per_n[k].value, per_n[k].b, n_lo + static_cast<Index>(k)};
    }
  }
  return out;
}

}  // namespace csrank
