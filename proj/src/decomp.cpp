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

#include "csrank/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "csrank/parallel.hpp"

namespace csrank {

CircleDecomposition circle_decomposition(const FockVector& core, Real delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("circle_decomposition: delta must be positive");
  const Index n = core.highest_occupied();
  if (n < 0) throw InvalidArgument("circle_decomposition: zero target");

  CircleDecomposition out;
  out.ill_conditioned = delta < 1e-3;
  if (n == 0) {
    out.superposition = CoherentSuperposition({{core[0], Complex{}}});
    return out;
  }

  const Index k = n + 1;
  std::vector<Complex> alphas(k);
  for (Index j = 0; j < k; ++j)
    alphas[j] = std::polar(delta, 2.0 * std::numbers::pi * static_cast<Real>(j) /
                                      static_cast<Real>(k));
  MatrixXc a(k, k);
  for (Index row = 0; row < k; ++row)
    for (Index j = 0; j < k; ++j) a(row, j) = detail::coherent_amplitude(alphas[j], row);
  VectorXc rhs = core.amplitudes().head(k);

  // Row m carries a common factor delta^m / sqrt(m!); dividing it out leaves
  // a scaled DFT matrix.
  VectorXr row_scale(k);
  for (Index row = 0; row < k; ++row) row_scale(row) = 1.0 / a.row(row).cwiseAbs().maxCoeff();
  const MatrixXc scaled = row_scale.asDiagonal() * a;
  Eigen::FullPivLU<MatrixXc> lu(scaled);
  if (!lu.isInvertible())
    throw NumericalFailure("circle_decomposition: singular linear system");
  const VectorXc c = lu.solve(row_scale.asDiagonal() * rhs);
  if (!c.allFinite()) throw NumericalFailure("circle_decomposition: non-finite coefficients");

  Eigen::JacobiSVD<MatrixXc> svd(a);
  const auto& sv = svd.singularValues();
  out.condition = sv(k - 1) > 0.0 ? sv(0) / sv(k - 1) : INFINITY;

  std::vector<CoherentTerm> terms(k);
  for (Index j = 0; j < k; ++j) terms[j] = {c(j), alphas[j]};
  out.superposition = CoherentSuperposition(std::move(terms));
  return out;
}

namespace {

// Largest radius whose coherent state keeps tail weight <= 1e-12 above cutoff.
Real safe_radius(Index cutoff) {
  Real lo = 0.0, hi = std::sqrt(static_cast<Real>(cutoff) + 1.0);
  for (int it = 0; it < 60; ++it) {
    const Real mid = 0.5 * (lo + hi);
    if (coherent_tail_weight(mid, cutoff) <= 1e-12)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

Complex clamp_radius(Complex z, Real radius) {
  const Real a = std::abs(z);
  return a > radius ? z * (radius / a) : z;
}

struct ProjectionFit {
  Real fidelity = 0.0;
  VectorXc coefficients;
};

// Best coefficients for fixed displacements: least squares against the
// normalized target.
ProjectionFit project(const VectorXc& target, const std::vector<Complex>& alphas) {
  const Index w = target.size();
  MatrixXc basis(w, static_cast<Index>(alphas.size()));
  for (Index j = 0; j < basis.cols(); ++j)
    for (Index n = 0; n < w; ++n) basis(n, j) = detail::coherent_amplitude(alphas[j], n);
  Eigen::ColPivHouseholderQR<MatrixXc> qr(basis);
  ProjectionFit out;
  out.coefficients = qr.solve(target);
  const VectorXc approx = basis * out.coefficients;
  const Real n2 = approx.squaredNorm();
  if (n2 > 0.0 && out.coefficients.allFinite())
    out.fidelity = std::clamp(std::norm(target.dot(approx)) / n2, 0.0, 1.0);
  else
    out.coefficients.setZero();
  return out;
}

std::vector<Complex> unpack(const std::vector<Real>& x, Real radius) {
  std::vector<Complex> alphas(x.size() / 2);
  for (std::size_t j = 0; j < alphas.size(); ++j)
    alphas[j] = clamp_radius({x[2 * j], x[2 * j + 1]}, radius);
  return alphas;
}

std::vector<Real> pack(const std::vector<Complex>& alphas) {
  std::vector<Real> x;
  for (auto a : alphas) {
    x.push_back(a.real());
    x.push_back(a.imag());
  }
  return x;
}

bool lexicographically_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](Complex u, Complex v) {
                                        return u.real() != v.real() ? u.real() < v.real()
                                                                    : u.imag() < v.imag();
                                      });
}

struct RestartOutcome {
  std::vector<Complex> alphas;
  Real fidelity = 0.0;
  int iterations = 0;
  bool converged = false;
};

Real overlap_fidelity(const VectorXc& t, Complex alpha) {
  Complex s{};
  for (Index n = 0; n < t.size(); ++n) s += std::conj(t(n)) * detail::coherent_amplitude(alpha, n);
  return std::norm(s);
}

}  // namespace

FitResult fit_superposition(const FockVector& target, Index r, const FitOptions& opts) {
  if (r < 1) throw InvalidArgument("fit_superposition: r must be >= 1");
  if (target.norm() == 0.0) throw InvalidArgument("fit_superposition: zero target");
  if (opts.restarts < 1) throw InvalidArgument("fit_superposition: need at least one restart");
  if (opts.initial_alphas && static_cast<Index>(opts.initial_alphas->size()) != r)
    throw InvalidArgument("fit_superposition: initial_alphas must have r entries");

  const Index w = std::max(opts.working_cutoff, target.cutoff());
  const VectorXc t = target.padded(w).normalized_copy().amplitudes();
  const Real radius = safe_radius(w);
  const Complex center = clamp_radius(best_single_coherent(target, false).alpha, radius);

  auto circle = [&](Complex c0, Real rad) {
    std::vector<Complex> a(r);
    for (Index j = 0; j < r; ++j)
      a[j] = c0 + std::polar(rad, 2.0 * std::numbers::pi * static_cast<Real>(j) /
                                      static_cast<Real>(r));
    return a;
  };

  auto objective = [&](const std::vector<Real>& x) {
    return 1.0 - project(t, unpack(x, radius)).fidelity;
  };

  auto run = [&](std::size_t k) {
    std::vector<Complex> start;
    if (k == 0) {
      start = opts.initial_alphas ? *opts.initial_alphas : circle(Complex{}, 0.3);
    } else if (k == 1) {
      start = circle(center, 0.3);
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed & 0xffffffffu),
                        static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<Real> gauss;
      std::uniform_real_distribution<Real> unif;
      const Real disk = std::min(radius, std::max(2.0, 1.5 * std::abs(center) + 1.0));
      start = circle(k % 2 == 0 ? center : Complex{}, 0.3);
      for (auto& a : start) {
        if (k % 2 == 0)
          a += Complex(gauss(rng), gauss(rng)) * 0.5;
        else
          a = std::polar(disk * std::sqrt(unif(rng)), 2.0 * std::numbers::pi * unif(rng));
      }
    }
    RestartOutcome out;
    std::vector<Real> x = pack(start);
    Real prev = objective(x);
    for (Real step : {0.25, 0.05, 0.01}) {
      auto nm = detail::nelder_mead(objective, x, step, opts.max_iters, opts.tol * 1e-2);
      out.iterations += nm.iterations;
      const bool small_gain = prev - nm.value < opts.tol;
      x = nm.x;
      prev = std::min(prev, nm.value);
      out.converged = nm.converged && small_gain;
      if (out.converged) break;
    }
    out.alphas = unpack(x, radius);
    out.fidelity = project(t, out.alphas).fidelity;
    return out;
  };

  const auto outcomes = parallel_map(static_cast<std::size_t>(opts.restarts), run);
  std::size_t best = 0;
  for (std::size_t k = 1; k < outcomes.size(); ++k) {
    const auto& a = outcomes[k];
    const auto& b = outcomes[best];
    if (a.fidelity > b.fidelity ||
        (a.fidelity == b.fidelity && lexicographically_less(a.alphas, b.alphas)))
      best = k;
  }

  const auto& win = outcomes[best];
  const ProjectionFit proj = project(t, win.alphas);
  std::vector<CoherentTerm> terms;
  for (std::size_t j = 0; j < win.alphas.size(); ++j)
    terms.push_back({proj.coefficients(static_cast<Index>(j)), win.alphas[j]});

  FitResult res;
  res.superposition = CoherentSuperposition(std::move(terms));
  res.working_cutoff = w;
  res.max_radius = radius;
  const FockVector approx = superposition_to_fock(res.superposition, w);
  res.fidelity_achieved = approx.norm() > 0.0 ? fidelity(FockVector(t), approx) : 0.0;
  res.iterations = win.iterations;
  res.converged = win.converged;
  res.restarts_used = opts.restarts;
  return res;
}

SingleCoherentFit best_single_coherent(const FockVector& target, bool real_symmetry) {
  const Real nrm = target.norm();
  if (nrm == 0.0) throw InvalidArgument("best_single_coherent: zero target");
  const VectorXc t = target.amplitudes() / nrm;
  Real mean_n = 0.0;
  for (Index n = 0; n < t.size(); ++n) mean_n += static_cast<Real>(n) * std::norm(t(n));
  const Real radius = std::max(4.0, 2.0 * std::sqrt(mean_n));
  const bool real_only = real_symmetry && t.imag().isZero(0.0);

  Complex best{};
  Real best_f = overlap_fidelity(t, best);
  if (real_only) {
    const int points = 2001;
    const Real h = 2.0 * radius / (points - 1);
    for (int k = 0; k < points; ++k) {
      const Real x = -radius + h * k;
      const Real f = overlap_fidelity(t, x);
      if (f > best_f) {
        best_f = f;
        best = x;
      }
    }
    Real lo = best.real() - h, hi = best.real() + h;
    const Real g = (std::sqrt(5.0) - 1.0) / 2.0;
    Real x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    Real f1 = overlap_fidelity(t, x1), f2 = overlap_fidelity(t, x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 >= f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = overlap_fidelity(t, x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = overlap_fidelity(t, x2);
      }
    }
    const Real x = f1 >= f2 ? x1 : x2;
    if (const Real f = overlap_fidelity(t, x); f > best_f) {
      best_f = f;
      best = x;
    }
  } else {
    const int points = 201;
    const Real h = 2.0 * radius / (points - 1);
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < points; ++j) {
        const Complex z(-radius + h * i, -radius + h * j);
        if (std::abs(z) > radius) continue;
        const Real f = overlap_fidelity(t, z);
        if (f > best_f) {
          best_f = f;
          best = z;
        }
      }
    }
    auto neg = [&](const std::vector<Real>& x) {
      return -overlap_fidelity(t, Complex(x[0], x[1]));
    };
    auto nm = detail::nelder_mead(neg, {best.real(), best.imag()}, 0.5 * h, 2000, 1e-15);
    if (-nm.value > best_f) {
      best_f = -nm.value;
      best = Complex(nm.x[0], nm.x[1]);
    }
  }
  return {best, std::max(0.0, 1.0 - best_f)};
}

}  // namespace csrank
