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
/// \file multimode.hpp
///
/// Multimode core states, passive linear unitaries and the reduction of a
/// multimode core state to a single-mode one by a bunching unitary followed
/// by vacuum projection of modes 2..m.
///
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "csrank/fock.hpp"
#include "csrank/hankel.hpp"

namespace csrank {

using Occupation = std::vector<int>;

///
/// Finite superposition of m-mode Fock states, keyed by occupation tuple.
///
class MultimodeFockState {
 public:
  using AmplitudeMap = std::map<Occupation, Complex>;

  /// Exact zeros are dropped.
  /// \throws InvalidArgument on wrong key lengths, negative occupations,
  /// non-finite amplitudes or total weight above 1 + 1e-12.
  MultimodeFockState(int modes, AmplitudeMap amplitudes);

  int modes() const noexcept { return modes_; }
  const AmplitudeMap& amplitudes() const noexcept { return amps_; }
  /// Largest total boson number with support (0 for the empty state).
  int max_total() const noexcept { return max_total_; }
  Real squared_norm() const;

  /// Amplitude of the given occupation (0 if absent).
  Complex operator[](const Occupation& occ) const;

  /// Terms with total boson number k.
  AmplitudeMap sector(int k) const;

  /// P(z) = sum_{|n| = max_total} c_n prod_j z_j^{n_j} / sqrt(prod_j n_j!)
  Complex top_polynomial(const VectorXc& z) const;

  /// |1>^{(x) m}
  static MultimodeFockState ones(int m);
  /// |n_1, ..., n_m>
  static MultimodeFockState basis(const Occupation& occ);

 private:
  int modes_;
  AmplitudeMap amps_;
  int max_total_ = 0;
};

int total(const Occupation& occ);

///
/// m x m matrix U, unitary to 1e-10. U acts on creation operators as
/// a_j^dag -> sum_i U(i, j) b_i^dag, and on displacements as alpha -> U alpha.
///
class UnitaryMatrix {
 public:
  static constexpr Real kTolerance = 1e-10;

  /// \throws InvalidArgument if the matrix is not square or not unitary.
  explicit UnitaryMatrix(MatrixXc u);

  const MatrixXc& matrix() const noexcept { return u_; }
  Index dimension() const noexcept { return u_.rows(); }
  Complex operator()(Index i, Index j) const { return u_(i, j); }

  static UnitaryMatrix identity(Index m);

 private:
  MatrixXc u_;
};

struct MultimodeTerm {
  Complex c;
  VectorXc alpha;
};

/// sum_k c_k |alpha_k> with alpha_k in C^m, pairwise distinct.
class MultimodeSuperposition {
 public:
  MultimodeSuperposition() = default;
  /// Terms whose displacements agree within 1e-12 (max norm) are merged.
  /// \throws InvalidArgument on inconsistent dimensions.
  explicit MultimodeSuperposition(std::vector<MultimodeTerm> terms);

  const std::vector<MultimodeTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  Index modes() const noexcept { return terms_.empty() ? 0 : terms_.front().alpha.size(); }

  /// <this|this> from coherent overlaps (no truncation).
  Real squared_norm() const;

 private:
  std::vector<MultimodeTerm> terms_;
};

/// n-fold tensor power of a single-mode superposition (|terms|^n terms).
MultimodeSuperposition tensor_power(const CoherentSuperposition& single, int n);

/// Entries omega^{(k-1)(l-1)} / sqrt(m).
UnitaryMatrix fourier_matrix(Index m);

/// Each alpha_k replaced by U alpha_k.
MultimodeSuperposition apply_unitary_to_superposition(const UnitaryMatrix& u,
                                                      const MultimodeSuperposition& sup);

/// (I (x) <0|^{m-1}) applied termwise:
/// (c, alpha) -> (c exp(-sum_{j>=2} |alpha_j|^2 / 2), alpha_1).
CoherentSuperposition project_vacuum_tail(const MultimodeSuperposition& sup);

/// Fock amplitudes of `sup` for all occupations with total <= max_total.
MultimodeFockState::AmplitudeMap fock_expansion(const MultimodeSuperposition& sup,
                                                int max_total);

/// Fock amplitudes of `sup` on occupations with every n_j <= per_mode_cutoff.
MultimodeFockState::AmplitudeMap fock_expansion_per_mode(const MultimodeSuperposition& sup,
                                                         int per_mode_cutoff);

///
/// Picks the first row u of a passive unitary maximizing |P(u)| over the
/// uniform direction and `trials` Gaussian samples, then completes u to a
/// unitary by Gram-Schmidt over the standard basis.
///
/// \throws NumericalFailure when every candidate has |P(u)| < 1e-14.
UnitaryMatrix bunching_unitary(const MultimodeFockState& core, int trials = 64,
                               std::uint64_t seed = 0);

/// d_n = sqrt(n!) P(U(0, 0), ..., U(0, m-1)) with n = max_total.
Complex bunched_amplitude(const MultimodeFockState& core, const UnitaryMatrix& u);

/// Limits of the exact polynomial expansion.
inline constexpr int kMaxReductionBosons = 12;
inline constexpr int kMaxReductionModes = 6;

///
/// Full output state U|core> by substituting a_j^dag -> sum_i U(i, j) b_i^dag
/// into each sector's creation polynomial and expanding.
///
/// \throws ResourceLimit above kMaxReductionBosons or kMaxReductionModes.
MultimodeFockState evolve(const MultimodeFockState& core, const UnitaryMatrix& u);

/// (I (x) <0|^{m-1}) U |core> as a single-mode vector with cutoff max_total.
FockVector reduce_to_single_mode(const MultimodeFockState& core, const UnitaryMatrix& u);

struct MultimodeLowerBound {
  /// kappa(core) >= lower_bound = max_total + 1
  Index lower_bound = 1;
  UnitaryMatrix unitary = UnitaryMatrix::identity(1);
  Complex bunched_amplitude{};
  FockVector reduced;
  /// Hankel bound of the reduced state at r = max_total.
  OptimizedBound reduced_bound;
};

MultimodeLowerBound multimode_lower_bound(const MultimodeFockState& core, int trials = 64,
                                          std::uint64_t seed = 0);

}  // namespace csrank
