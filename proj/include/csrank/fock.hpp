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
/// \file fock.hpp
///
/// Single-mode pure states in a truncated Fock basis.
///
#pragma once

#include <vector>

#include "csrank/common.hpp"

namespace csrank {

///
/// Finite list of Fock amplitudes psi_0 .. psi_cutoff.
///
/// States with infinite support (coherent, squeezed) are stored truncated and
/// flagged `normalized() == false`; `tail_weight()` reports the probability
/// mass that was cut away, so truncation error stays auditable.
///
class FockVector {
 public:
  FockVector() : FockVector(VectorXc::Ones(1), true) {}

  /// \throws InvalidArgument on empty or non-finite input, or when
  /// `normalized` is claimed but | ||a||^2 - 1 | > 1e-12.
  explicit FockVector(VectorXc amplitudes, bool normalized = false,
                      Real tail_weight = 0.0);

  const VectorXc& amplitudes() const noexcept { return amps_; }
  Complex operator[](Index n) const { return amps_(n); }
  Index cutoff() const noexcept { return amps_.size() - 1; }
  bool normalized() const noexcept { return normalized_; }
  Real tail_weight() const noexcept { return tail_weight_; }

  Real norm() const { return amps_.norm(); }

  /// Zero-padded (or identical) copy with the given cutoff.
  /// \throws InvalidArgument if `cutoff` would drop stored amplitudes.
  FockVector padded(Index cutoff) const;

  /// Copy rescaled to unit norm (tail weight is kept as a diagnostic).
  FockVector normalized_copy() const;

  /// Largest index with a non-negligible amplitude (relative 1e-15 of the
  /// largest magnitude), or -1 for the zero vector.
  Index highest_occupied() const;

 private:
  VectorXc amps_;
  bool normalized_ = false;
  Real tail_weight_ = 0.0;
};

struct CoherentTerm {
  Complex c;
  Complex alpha;
};

/// Superposition sum_j c_j |alpha_j> with pairwise distinct displacements.
class CoherentSuperposition {
 public:
  static constexpr Real kMergeTolerance = 1e-12;

  CoherentSuperposition() = default;
  /// Terms whose displacements agree within kMergeTolerance are merged by
  /// summing their coefficients (the first displacement is kept).
  explicit CoherentSuperposition(std::vector<CoherentTerm> terms);

  const std::vector<CoherentTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

 private:
  std::vector<CoherentTerm> terms_;
};

/// Squeezing xi = r e^{i phi}.
struct SqueezedParams {
  SqueezedParams(Real r, Real phi);

  Real r() const noexcept { return r_; }
  Real phi() const noexcept { return phi_; }
  /// lambda = -e^{i phi} tanh(r)
  Complex lambda() const;

 private:
  Real r_;
  Real phi_;
};

inline constexpr Real kDefaultTailTolerance = 1e-12;

FockVector fock_state(Index n, Index cutoff);

FockVector coherent_state(Complex alpha, Index cutoff);

/// Probability weight of |alpha> above `cutoff`.
Real coherent_tail_weight(Complex alpha, Index cutoff);

/// Smallest cutoff whose coherent tail weight is at most `tol`.
Index coherent_cutoff(Complex alpha, Real tol = kDefaultTailTolerance);

/// Squeezed vacuum with amplitudes (cosh r)^{-1/2} lambda^n sqrt((2n)!)/(2^n n!)
/// at index 2n. Odd amplitudes are exactly zero.
FockVector squeezed_state(const SqueezedParams& params, Index cutoff);

Real squeezed_tail_weight(const SqueezedParams& params, Index cutoff);
Index squeezed_cutoff(const SqueezedParams& params,
                      Real tol = kDefaultTailTolerance);

/// amplitude_n = sum_k c_k e^{-|alpha_k|^2/2} alpha_k^n / sqrt(n!)
FockVector superposition_to_fock(const CoherentSuperposition& sup, Index cutoff);

/// |<a|b>|^2 of the normalized vectors. Shorter inputs are zero-padded.
/// \throws InvalidArgument if either vector has zero norm.
Real fidelity(const FockVector& a, const FockVector& b);

/// Raw two-norm ||a - b||_2 (no normalization, zero-padded).
Real distance(const FockVector& a, const FockVector& b);

namespace detail {
/// log(n!) via lgamma.
Real log_factorial(Index n);
/// e^{-|alpha|^2/2} alpha^n / sqrt(n!) assembled in log space.
Complex coherent_amplitude(Complex alpha, Index n);
}  // namespace detail

}  // namespace csrank
