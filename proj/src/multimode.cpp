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

#include "csrank/multimode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

namespace csrank {

namespace {

Real log_occupation_factorial(const Occupation& occ) {
  Real s = 0.0;
  for (int n : occ) s += detail::log_factorial(n);
  return s;
}

// Visits every occupation of `modes` modes with total <= max_total.
void for_each_occupation(int modes, int max_total,
                         const std::function<void(const Occupation&)>& visit) {
  Occupation occ(modes, 0);
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (j == modes) {
      visit(occ);
      return;
    }
    for (int n = 0; n <= left; ++n) {
      occ[j] = n;
      rec(j + 1, left - n);
    }
    occ[j] = 0;
  };
  rec(0, max_total);
}

Complex coherent_product_amplitude(const VectorXc& alpha, const Occupation& occ) {
  Complex a{1.0, 0.0};
  for (Index j = 0; j < alpha.size(); ++j) a *= detail::coherent_amplitude(alpha(j), occ[j]);
  return a;
}

Complex coherent_overlap(const VectorXc& a, const VectorXc& b) {
  // <a|b> = exp(-|a|^2/2 - |b|^2/2 + a^* . b)
  return std::exp(Complex(-0.5 * a.squaredNorm() - 0.5 * b.squaredNorm(), 0.0) + a.dot(b));
}

}  // namespace

int total(const Occupation& occ) { return std::accumulate(occ.begin(), occ.end(), 0); }

MultimodeFockState::MultimodeFockState(int modes, AmplitudeMap amplitudes) : modes_(modes) {
  if (modes < 1) throw InvalidArgument("MultimodeFockState: need at least one mode");
  for (auto& [occ, c] : amplitudes) {
    if (static_cast<int>(occ.size()) != modes)
      throw InvalidArgument("MultimodeFockState: occupation length differs from mode count");
    if (std::any_of(occ.begin(), occ.end(), [](int n) { return n < 0; }))
      throw InvalidArgument("MultimodeFockState: negative occupation");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvalidArgument("MultimodeFockState: non-finite amplitude");
    if (c == Complex{}) continue;
    amps_[occ] += c;
  }
  for (const auto& [occ, c] : amps_) max_total_ = std::max(max_total_, total(occ));
  if (squared_norm() > 1.0 + 1e-12)
    throw InvalidArgument("MultimodeFockState: total weight exceeds 1");
}

Real MultimodeFockState::squared_norm() const {
  Real s = 0.0;
  for (const auto& [occ, c] : amps_) s += std::norm(c);
  return s;
}

Complex MultimodeFockState::operator[](const Occupation& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{} : it->second;
}

MultimodeFockState::AmplitudeMap MultimodeFockState::sector(int k) const {
  AmplitudeMap out;
  for (const auto& [occ, c] : amps_)
    if (total(occ) == k) out.emplace(occ, c);
  return out;
}

Complex MultimodeFockState::top_polynomial(const VectorXc& z) const {
  if (z.size() != modes_) throw InvalidArgument("top_polynomial: dimension mismatch");
  Complex p{};
  for (const auto& [occ, c] : amps_) {
    if (total(occ) != max_total_) continue;
    Complex mono = c * std::exp(-0.5 * log_occupation_factorial(occ));
    for (int j = 0; j < modes_; ++j)
      for (int k = 0; k < occ[j]; ++k) mono *= z(j);
    p += mono;
  }
  return p;
}

MultimodeFockState MultimodeFockState::ones(int m) {
  return basis(Occupation(m, 1));
}

MultimodeFockState MultimodeFockState::basis(const Occupation& occ) {
  return MultimodeFockState(static_cast<int>(occ.size()), {{occ, Complex{1.0, 0.0}}});
}

UnitaryMatrix::UnitaryMatrix(MatrixXc u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0)
    throw InvalidArgument("UnitaryMatrix: matrix must be square and non-empty");
  const MatrixXc defect = u_.adjoint() * u_ - MatrixXc::Identity(u_.rows(), u_.cols());
  if (!u_.allFinite() || defect.cwiseAbs().maxCoeff() > kTolerance)
    throw InvalidArgument("UnitaryMatrix: matrix is not unitary");
}

UnitaryMatrix UnitaryMatrix::identity(Index m) {
  return UnitaryMatrix(MatrixXc::Identity(m, m));
}

MultimodeSuperposition::MultimodeSuperposition(std::vector<MultimodeTerm> terms) {
  for (auto& t : terms) {
    if (!terms_.empty() && t.alpha.size() != terms_.front().alpha.size())
      throw InvalidArgument("MultimodeSuperposition: inconsistent mode counts");
    if (t.alpha.size() == 0) throw InvalidArgument("MultimodeSuperposition: empty displacement");
    if (!t.alpha.allFinite() || !std::isfinite(std::abs(t.c)))
      throw InvalidArgument("MultimodeSuperposition: non-finite term");
    auto same = std::find_if(terms_.begin(), terms_.end(), [&](const MultimodeTerm& u) {
      return (u.alpha - t.alpha).cwiseAbs().maxCoeff() <= CoherentSuperposition::kMergeTolerance;
    });
    if (same != terms_.end())
      same->c += t.c;
    else
      terms_.push_back(std::move(t));
  }
}

Real MultimodeSuperposition::squared_norm() const {
  Complex s{};
  for (const auto& a : terms_)
    for (const auto& b : terms_) s += std::conj(a.c) * b.c * coherent_overlap(a.alpha, b.alpha);
  return s.real();
}

MultimodeSuperposition tensor_power(const CoherentSuperposition& single, int n) {
  if (n < 1) throw InvalidArgument("tensor_power: n must be >= 1");
  const std::size_t k = single.size();
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= k;
  std::vector<MultimodeTerm> terms;
  terms.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    MultimodeTerm t{Complex{1.0, 0.0}, VectorXc(n)};
    std::size_t rest = idx;
    for (int j = 0; j < n; ++j) {
      const auto& s = single.terms()[rest % k];
      rest /= k;
      t.c *= s.c;
      t.alpha(j) = s.alpha;
    }
    terms.push_back(std::move(t));
  }
  return MultimodeSuperposition(std::move(terms));
}

UnitaryMatrix fourier_matrix(Index m) {
  if (m < 1) throw InvalidArgument("fourier_matrix: m must be >= 1");
  MatrixXc f(m, m);
  const Real scale = 1.0 / std::sqrt(static_cast<Real>(m));
  for (Index k = 0; k < m; ++k)
    for (Index l = 0; l < m; ++l)
      f(k, l) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<Real>((k * l) % m) /
                                      static_cast<Real>(m));
  return UnitaryMatrix(std::move(f));
}

MultimodeSuperposition apply_unitary_to_superposition(const UnitaryMatrix& u,
                                                      const MultimodeSuperposition& sup) {
  std::vector<MultimodeTerm> out;
  out.reserve(sup.size());
  for (const auto& t : sup.terms()) {
    if (t.alpha.size() != u.dimension())
      throw InvalidArgument("apply_unitary_to_superposition: dimension mismatch");
    out.push_back({t.c, u.matrix() * t.alpha});
  }
  return MultimodeSuperposition(std::move(out));
}

CoherentSuperposition project_vacuum_tail(const MultimodeSuperposition& sup) {
  std::vector<CoherentTerm> out;
  out.reserve(sup.size());
  for (const auto& t : sup.terms()) {
    const Real rest = t.alpha.tail(t.alpha.size() - 1).squaredNorm();
    out.push_back({t.c * std::exp(-0.5 * rest), t.alpha(0)});
  }
  return CoherentSuperposition(std::move(out));
}

MultimodeFockState::AmplitudeMap fock_expansion(const MultimodeSuperposition& sup,
                                                int max_total) {
  MultimodeFockState::AmplitudeMap out;
  if (sup.size() == 0) return out;
  for_each_occupation(static_cast<int>(sup.modes()), max_total, [&](const Occupation& occ) {
    Complex a{};
    for (const auto& t : sup.terms()) a += t.c * coherent_product_amplitude(t.alpha, occ);
    out.emplace(occ, a);
  });
  return out;
}

MultimodeFockState::AmplitudeMap fock_expansion_per_mode(const MultimodeSuperposition& sup,
                                                         int per_mode_cutoff) {
  MultimodeFockState::AmplitudeMap out;
  if (sup.size() == 0) return out;
  const int m = static_cast<int>(sup.modes());
  Occupation occ(m, 0);
  while (true) {
    Complex a{};
    for (const auto& t : sup.terms()) a += t.c * coherent_product_amplitude(t.alpha, occ);
    out.emplace(occ, a);
    int j = 0;
    while (j < m && occ[j] == per_mode_cutoff) occ[j++] = 0;
    if (j == m) break;
    ++occ[j];
  }
  return out;
}

UnitaryMatrix bunching_unitary(const MultimodeFockState& core, int trials, std::uint64_t seed) {
  const int m = core.modes();
  if (trials < 0) throw InvalidArgument("bunching_unitary: trials must be >= 0");

  std::vector<VectorXc> candidates;
  candidates.push_back(VectorXc::Constant(m, Complex(1.0 / std::sqrt(static_cast<Real>(m)), 0.0)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss;
  for (int t = 0; t < trials; ++t) {
    VectorXc u(m);
    for (int j = 0; j < m; ++j) u(j) = Complex(gauss(rng), gauss(rng));
    candidates.push_back(u / u.norm());
  }

  std::size_t best = 0;
  Real best_abs = -1.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Real a = std::abs(core.top_polynomial(candidates[k]));
    if (a > best_abs) {
      best_abs = a;
      best = k;
    }
  }
  if (best_abs < 1e-14)
    throw NumericalFailure("bunching_unitary: no candidate direction bunches the top sector; "
                           "retry with another seed");

  // Rows: u, then standard basis vectors least aligned with u, orthonormalized.
  const VectorXc& u = candidates[best];
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(u(a)) < std::abs(u(b)); });
  std::vector<VectorXc> rows{u};
  for (int idx : order) {
    if (static_cast<int>(rows.size()) == m) break;
    VectorXc v = VectorXc::Unit(m, idx);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : rows) v -= q.dot(v) * q;
    const Real nrm = v.norm();
    if (nrm < 1e-8) continue;
    rows.push_back(v / nrm);
  }
  if (static_cast<int>(rows.size()) != m)
    throw NumericalFailure("bunching_unitary: basis completion failed");
  MatrixXc mat(m, m);
  for (int i = 0; i < m; ++i) mat.row(i) = rows[i].transpose();
  return UnitaryMatrix(std::move(mat));
}

Complex bunched_amplitude(const MultimodeFockState& core, const UnitaryMatrix& u) {
  if (u.dimension() != core.modes())
    throw InvalidArgument("bunched_amplitude: dimension mismatch");
  const VectorXc first_row = u.matrix().row(0).transpose();
  return std::exp(0.5 * detail::log_factorial(core.max_total())) * core.top_polynomial(first_row);
}

MultimodeFockState evolve(const MultimodeFockState& core, const UnitaryMatrix& u) {
  const int m = core.modes();
  if (u.dimension() != m) throw InvalidArgument("evolve: dimension mismatch");
  if (m > kMaxReductionModes || core.max_total() > kMaxReductionBosons)
    throw ResourceLimit("evolve: exact expansion limited to 12 bosons on 6 modes");

  using Poly = std::map<Occupation, Complex>;
  Poly output;
  for (const auto& [occ, c] : core.amplitudes()) {
    Poly poly{{Occupation(m, 0), c * std::exp(-0.5 * log_occupation_factorial(occ))}};
    for (int j = 0; j < m; ++j) {
      for (int rep = 0; rep < occ[j]; ++rep) {
        Poly next;
        for (const auto& [mono, coeff] : poly) {
          for (int i = 0; i < m; ++i) {
            if (u(i, j) == Complex{}) continue;
            Occupation e = mono;
            ++e[i];
            next[e] += coeff * u(i, j);
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, coeff] : poly)
      output[mono] += coeff * std::exp(0.5 * log_occupation_factorial(mono));
  }
  // U is unitary only to rounding; rescale if that pushes the norm past 1.
  Real norm2 = 0.0;
  for (const auto& [occ, c] : output) norm2 += std::norm(c);
  if (norm2 > 1.0 + 1e-12) {
    const Real s = 1.0 / std::sqrt(norm2);
    for (auto& [occ, c] : output) c *= s;
  }
  return MultimodeFockState(m, std::move(output));
}

FockVector reduce_to_single_mode(const MultimodeFockState& core, const UnitaryMatrix& u) {
  const MultimodeFockState out = evolve(core, u);
  const int n = core.max_total();
  VectorXc amps = VectorXc::Zero(n + 1);
  Occupation occ(core.modes(), 0);
  for (int k = 0; k <= n; ++k) {
    occ[0] = k;
    amps(k) = out[occ];
  }
  return FockVector(std::move(amps), false);
}

MultimodeLowerBound multimode_lower_bound(const MultimodeFockState& core, int trials,
                                          std::uint64_t seed) {
  if (core.amplitudes().empty())
    throw InvalidArgument("multimode_lower_bound: state has no support");
  MultimodeLowerBound out;
  const int n = core.max_total();
  out.lower_bound = n + 1;
  out.unitary = bunching_unitary(core, trials, seed);
  out.bunched_amplitude = bunched_amplitude(core, out.unitary);
  out.reduced = reduce_to_single_mode(core, out.unitary);

  SearchConfig cfg;
  cfg.N_min = n;
  cfg.N_max = n;
  out.reduced_bound = optimized_bound(out.reduced.normalized_copy().padded(2 * n), n, cfg);
  return out;
}

}  // namespace csrank
