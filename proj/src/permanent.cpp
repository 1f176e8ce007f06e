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

#include "csrank/permanent.hpp"

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "csrank/decomp.hpp"

namespace csrank {

UnitaryMatrix haar_unitary(Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("haar_unitary: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, std::sqrt(0.5));
  MatrixXc z(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) z(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<MatrixXc> qr(z);
  MatrixXc q = qr.householderQ();
  const MatrixXc& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const Real a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return UnitaryMatrix(std::move(q));
}

MultilinearFormula formula_from_decomposition(const MultimodeSuperposition& sup) {
  MultilinearFormula f;
  f.n = sup.modes();
  const auto r = static_cast<Index>(sup.size());
  f.gammas.resize(r);
  f.alphas.resize(r, f.n);
  for (Index j = 0; j < r; ++j) {
    const auto& t = sup.terms()[static_cast<std::size_t>(j)];
    f.gammas(j) = t.c * std::exp(-0.5 * t.alpha.squaredNorm());
    f.alphas.row(j) = t.alpha.transpose();
  }
  return f;
}

Complex evaluate_formula(const MultilinearFormula& f, const MatrixXc& x) {
  if (x.rows() != f.n || x.cols() != f.n)
    throw InvalidArgument("evaluate_formula: X must be n x n");
  // Column j of (X alphas^T) is X alpha_j.
  const MatrixXc images = x * f.alphas.transpose();
  Complex sum{};
  for (Index j = 0; j < f.terms(); ++j) sum += f.gammas(j) * images.col(j).prod();
  return sum;
}

MultimodeSuperposition ones_cat_decomposition(int n, Real delta) {
  if (n < 1) throw InvalidArgument("ones_cat_decomposition: n must be >= 1");
  return tensor_power(circle_decomposition(fock_state(1, 1), delta).superposition, n);
}

PermanentBoundReport verify_permanent_bound(const MultimodeSuperposition& sup, int trials,
                                            std::uint64_t seed) {
  const Index n = sup.modes();
  if (n < 1) throw InvalidArgument("verify_permanent_bound: empty superposition");
  if (n > kMaxNaivePermanent) throw ResourceLimit("verify_permanent_bound: n > 8");
  if (trials < 0) throw InvalidArgument("verify_permanent_bound: trials must be >= 0");

  const Real n2 = sup.squared_norm();
  if (!(n2 > 0.0)) throw InvalidArgument("verify_permanent_bound: zero superposition");

  // <1...1|phi> for the normalized superposition.
  Complex overlap{};
  for (const auto& t : sup.terms())
    overlap += t.c * std::exp(-0.5 * t.alpha.squaredNorm()) * t.alpha.prod();
  overlap /= std::sqrt(n2);
  const Real mag = std::abs(overlap);
  // ||1 - phi||^2 = 2 (1 - |<1|phi>|) <= 2 (1 - |<1|phi>|^2) after phase alignment.
  const Real delta_inf = 1.0 - mag * mag;
  if (delta_inf > 0.5)
    throw InvalidArgument("verify_permanent_bound: superposition too far from |1...1>");

  const Complex phase = std::conj(overlap) / mag / std::sqrt(n2);
  std::vector<MultimodeTerm> aligned;
  for (const auto& t : sup.terms()) aligned.push_back({t.c * phase, t.alpha});
  const MultimodeSuperposition phi(std::move(aligned));

  PermanentBoundReport rep;
  rep.n = n;
  rep.delta_inf = delta_inf;
  rep.bound = std::sqrt(2.0 * delta_inf);
  Real inside = 0.0;
  for (const auto& [occ, amp] : fock_expansion_per_mode(phi, 2)) inside += std::norm(amp);
  rep.tail_weight = std::max(0.0, 1.0 - inside);

  const MultilinearFormula f = formula_from_decomposition(phi);
  rep.formula_size = f.size();
  for (int t = 0; t < trials; ++t) {
    PermanentTrial tr;
    tr.trial = t;
    tr.seed = seed + static_cast<std::uint64_t>(t);
    const UnitaryMatrix u = haar_unitary(n, tr.seed);
    const Complex per = permanent_ryser(u.matrix());
    const Complex val = evaluate_formula(f, u.matrix());
    tr.abs_permanent = std::abs(per);
    tr.abs_formula = std::abs(val);
    tr.error = std::abs(per - val);
    rep.max_error = std::max(rep.max_error, tr.error);
    rep.trials.push_back(tr);
  }
  rep.passed = rep.max_error <= rep.bound + 1e-9;
  return rep;
}

}  // namespace csrank
