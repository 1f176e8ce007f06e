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

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace csrank::detail {

template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<Real> x0, Real step, int max_iters, Real ftol) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<Real>> simplex(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
  std::vector<Real> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  NelderMeadResult res;
  auto point = [&](const std::vector<Real>& base, const std::vector<Real>& dir, Real t) {
    std::vector<Real> p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = base[k] + t * (dir[k] - base[k]);
    return p;
  };

  int it = 0;
  for (; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(),
                      second = order[dim == 0 ? 0 : dim - 1];
    if (values[worst] - values[best] <= ftol) {
      res.converged = true;
      break;
    }
    std::vector<Real> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<Real>(dim);

    const auto reflected = point(centroid, simplex[worst], -1.0);
    const Real fr = f(reflected);
    if (fr < values[best]) {
      const auto expanded = point(centroid, simplex[worst], -2.0);
      const Real fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const auto contracted = point(centroid, outside ? reflected : simplex[worst], 0.5);
    const Real fc = f(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    // shrink towards the best vertex
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      simplex[i] = point(simplex[best], simplex[i], 0.5);
      values[i] = f(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  res.x = simplex[best];
  res.value = values[best];
  res.iterations = it;
  return res;
}

}  // namespace csrank::detail
