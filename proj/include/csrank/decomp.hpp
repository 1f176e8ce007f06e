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
/// \file decomp.hpp
///
/// Explicit coherent state decompositions (upper bounds on the rank) and
/// best-fit superpositions (achievable fidelities).
///
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csrank/fock.hpp"

namespace csrank {

struct CircleDecomposition {
  CoherentSuperposition superposition;
  /// 2-norm condition number of the (unequilibrated) linear system.
  Real condition = 1.0;
  /// Set when delta < 1e-3, where the solve is badly conditioned.
  bool ill_conditioned = false;
};

///
/// n + 1 coherent states at delta * omega^j (omega = e^{2 pi i / (n+1)}) whose
/// coefficients reproduce the first n + 1 Fock amplitudes of `core` exactly,
/// n being its highest occupied Fock number. The vacuum maps to the single
/// term |0>.
///
/// \throws InvalidArgument for the zero vector or delta <= 0;
/// NumericalFailure if the linear solve breaks down.
CircleDecomposition circle_decomposition(const FockVector& core, Real delta);

struct FitOptions {
  int restarts = 16;
  std::uint64_t seed = 0;
  int max_iters = 4000;
  Real tol = 1e-12;
  /// Fock cutoff used for the overlaps; raised to at least the target's.
  Index working_cutoff = 60;
  /// Optional starting displacements for the first restart (size r).
  std::optional<std::vector<Complex>> initial_alphas;
};

struct FitResult {
  CoherentSuperposition superposition;
  Real fidelity_achieved = 0.0;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  Index working_cutoff = 0;
  /// Displacements are confined to |alpha| <= this radius, where a coherent
  /// state loses at most 1e-12 of weight above working_cutoff.
  Real max_radius = 0.0;
};

///
/// Maximizes fidelity over r-term coherent superpositions by variable
/// projection: for fixed displacements the optimal coefficients solve a
/// linear least-squares problem, and the 2r real displacement parameters are
/// searched by multi-start Nelder-Mead.
///
/// \throws InvalidArgument if r < 1 or the target is zero.
FitResult fit_superposition(const FockVector& target, Index r, const FitOptions& opts = {});

struct SingleCoherentFit {
  Complex alpha;
  Real infidelity = 1.0;
};

///
/// Global maximum of |<target|alpha>|^2 via a dense grid over a disk of
/// radius max(4, 2 sqrt(<n>)) and local refinement. The overlap is exact
/// (no truncation of |alpha>). Real targets search the real axis only
/// unless `real_symmetry` is false.
///
SingleCoherentFit best_single_coherent(const FockVector& target, bool real_symmetry = true);

namespace detail {

struct NelderMeadResult {
  std::vector<Real> x;
  Real value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f from x0 with initial simplex edge `step`. Converged when the
/// spread of simplex values drops below `ftol`.
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<Real> x0, Real step, int max_iters, Real ftol);

}  // namespace detail

}  // namespace csrank

#include "csrank/detail/nelder_mead.hpp"
