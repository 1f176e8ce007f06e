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

#include "csrank/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csrank {

namespace detail {

Real log_factorial(Index n) { return std::lgamma(static_cast<Real>(n) + 1.0); }

Complex coherent_amplitude(Complex alpha, Index n) {
  const Real mag2 = std::norm(alpha);
  if (n == 0) return {std::exp(-0.5 * mag2), 0.0};
  if (mag2 == 0.0) return {0.0, 0.0};
  const Real log_mag =
      -0.5 * mag2 + static_cast<Real>(n) * std::log(std::abs(alpha)) -
      0.5 * log_factorial(n);
  return std::polar(std::exp(log_mag), static_cast<Real>(n) * std::arg(alpha));
}

namespace {

// Sum of exp(log_term(n)) for n > first - 1 until the terms are negligible
// and decreasing.
template <typename LogTerm>
Real tail_sum(Index first, LogTerm log_term) {
  Real sum = 0.0;
  Real prev = -INFINITY;
  for (Index n = first; n < first + 100000; ++n) {
    const Real lt = log_term(n);
    const Real t = std::exp(lt);
    sum += t;
    if (lt < prev && (t <= 1e-20 * sum || t < 1e-300)) break;
    prev = lt;
  }
  return sum;
}

}  // namespace
}  // namespace detail

FockVector::FockVector(VectorXc amplitudes, bool normalized, Real tail_weight)
    : amps_(std::move(amplitudes)),
      normalized_(normalized),
      tail_weight_(tail_weight) {
  if (amps_.size() == 0)
    throw InvalidArgument("FockVector: at least one amplitude is required");
  if (!amps_.allFinite())
    throw InvalidArgument("FockVector: amplitudes must be finite");
  if (!std::isfinite(tail_weight_) || tail_weight_ < 0.0)
    throw InvalidArgument("FockVector: tail weight must be finite and >= 0");
  if (normalized_ && std::abs(amps_.squaredNorm() - 1.0) > 1e-12)
    throw InvalidArgument("FockVector: vector flagged normalized has norm != 1");
}

FockVector FockVector::padded(Index cutoff) const {
  if (cutoff < this->cutoff()) {
    if (amps_.tail(this->cutoff() - cutoff).isZero(0.0))
      return FockVector(amps_.head(cutoff + 1), normalized_, tail_weight_);
    throw InvalidArgument("FockVector::padded: would drop non-zero amplitudes");
  }
  VectorXc out = VectorXc::Zero(cutoff + 1);
  out.head(amps_.size()) = amps_;
  return FockVector(std::move(out), normalized_, tail_weight_);
}

FockVector FockVector::normalized_copy() const {
  const Real nrm = norm();
  if (nrm == 0.0) throw InvalidArgument("FockVector: cannot normalize zero vector");
  return FockVector(amps_ / nrm, true, tail_weight_);
}

Index FockVector::highest_occupied() const {
  const Real peak = amps_.cwiseAbs().maxCoeff();
  if (peak == 0.0) return -1;
  for (Index n = cutoff(); n >= 0; --n)
    if (std::abs(amps_(n)) > 1e-15 * peak) return n;
  return -1;
}

CoherentSuperposition::CoherentSuperposition(std::vector<CoherentTerm> terms) {
  for (const auto& t : terms) {
    if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag()) ||
        !std::isfinite(t.alpha.real()) || !std::isfinite(t.alpha.imag()))
      throw InvalidArgument("CoherentSuperposition: non-finite term");
    auto same = std::find_if(terms_.begin(), terms_.end(), [&](const CoherentTerm& u) {
      return std::abs(u.alpha - t.alpha) <= kMergeTolerance;
    });
    if (same != terms_.end())
      same->c += t.c;
    else
      terms_.push_back(t);
  }
}

SqueezedParams::SqueezedParams(Real r, Real phi) : r_(r), phi_(phi) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw InvalidArgument("SqueezedParams: r must be finite and >= 0");
  if (!std::isfinite(phi)) throw InvalidArgument("SqueezedParams: phi must be finite");
  const Real two_pi = 2.0 * std::numbers::pi;
  phi_ = std::fmod(phi, two_pi);
  if (phi_ < 0.0) phi_ += two_pi;
  if (std::tanh(r_) >= 1.0)
    throw InvalidArgument("SqueezedParams: squeezing too large (|lambda| = 1)");
}

Complex SqueezedParams::lambda() const {
  return -std::polar(1.0, phi_) * std::tanh(r_);
}

FockVector fock_state(Index n, Index cutoff) {
  if (n < 0 || n > cutoff)
    throw InvalidArgument("fock_state: require 0 <= n <= cutoff");
  VectorXc amps = VectorXc::Zero(cutoff + 1);
  amps(n) = 1.0;
  return FockVector(std::move(amps), true);
}

Real coherent_tail_weight(Complex alpha, Index cutoff) {
  const Real x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  const Real lx = std::log(x);
  return detail::tail_sum(cutoff + 1, [&](Index n) {
    return -x + static_cast<Real>(n) * lx - detail::log_factorial(n);
  });
}

Index coherent_cutoff(Complex alpha, Real tol) {
  Index c = 0;
  while (coherent_tail_weight(alpha, c) > tol) ++c;
  return c;
}

FockVector coherent_state(Complex alpha, Index cutoff) {
  if (cutoff < 0) throw InvalidArgument("coherent_state: cutoff must be >= 0");
  VectorXc amps(cutoff + 1);
  for (Index n = 0; n <= cutoff; ++n) amps(n) = detail::coherent_amplitude(alpha, n);
  const Real tail = coherent_tail_weight(alpha, cutoff);
  return FockVector(std::move(amps), tail == 0.0, tail);
}

namespace {

Real squeezed_log_weight(Real log_tanh2, Real log_cosh, Index k) {
  // |amplitude_{2k}|^2 = tanh^{2k} (2k)! / (4^k k!^2 cosh r)
  return static_cast<Real>(k) * log_tanh2 + detail::log_factorial(2 * k) -
         static_cast<Real>(k) * std::log(4.0) - 2.0 * detail::log_factorial(k) -
         log_cosh;
}

}  // namespace

Real squeezed_tail_weight(const SqueezedParams& params, Index cutoff) {
  if (params.r() == 0.0) return 0.0;
  const Real t = std::tanh(params.r());
  const Real log_tanh2 = 2.0 * std::log(t);
  const Real log_cosh = std::log(std::cosh(params.r()));
  return detail::tail_sum(cutoff / 2 + 1, [&](Index k) {
    return squeezed_log_weight(log_tanh2, log_cosh, k);
  });
}

Index squeezed_cutoff(const SqueezedParams& params, Real tol) {
  Index c = 0;
  while (squeezed_tail_weight(params, c) > tol) c += 2;
  return c;
}

FockVector squeezed_state(const SqueezedParams& params, Index cutoff) {
  if (cutoff < 0) throw InvalidArgument("squeezed_state: cutoff must be >= 0");
  VectorXc amps = VectorXc::Zero(cutoff + 1);
  const Complex lambda = params.lambda();
  const Real log_cosh = std::log(std::cosh(params.r()));
  amps(0) = std::exp(-0.5 * log_cosh);
  if (params.r() > 0.0) {
    const Real log_abs = std::log(std::abs(lambda));
    const Real phase = std::arg(lambda);
    for (Index k = 1; 2 * k <= cutoff; ++k) {
      const Real kk = static_cast<Real>(k);
      const Real log_mag = -0.5 * log_cosh + kk * log_abs +
                           0.5 * detail::log_factorial(2 * k) - kk * std::log(2.0) -
                           detail::log_factorial(k);
      amps(2 * k) = std::polar(std::exp(log_mag), kk * phase);
    }
  }
  const Real tail = squeezed_tail_weight(params, cutoff);
  return FockVector(std::move(amps), tail == 0.0, tail);
}

FockVector superposition_to_fock(const CoherentSuperposition& sup, Index cutoff) {
  if (cutoff < 0) throw InvalidArgument("superposition_to_fock: cutoff must be >= 0");
  VectorXc amps = VectorXc::Zero(cutoff + 1);
  for (const auto& t : sup.terms())
    for (Index n = 0; n <= cutoff; ++n)
      amps(n) += t.c * detail::coherent_amplitude(t.alpha, n);
  return FockVector(std::move(amps), false);
}

namespace {

std::pair<VectorXc, VectorXc> aligned(const FockVector& a, const FockVector& b) {
  const Index c = std::max(a.cutoff(), b.cutoff());
  VectorXc va = VectorXc::Zero(c + 1), vb = VectorXc::Zero(c + 1);
  va.head(a.cutoff() + 1) = a.amplitudes();
  vb.head(b.cutoff() + 1) = b.amplitudes();
  return {std::move(va), std::move(vb)};
}

}  // namespace

Real fidelity(const FockVector& a, const FockVector& b) {
  auto [va, vb] = aligned(a, b);
  const Real na = va.squaredNorm(), nb = vb.squaredNorm();
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("fidelity: zero-norm input");
  const Real f = std::norm(va.dot(vb)) / (na * nb);
  return std::clamp(f, 0.0, 1.0);
}

Real distance(const FockVector& a, const FockVector& b) {
  auto [va, vb] = aligned(a, b);
  return (va - vb).norm();
}

}  // namespace csrank
