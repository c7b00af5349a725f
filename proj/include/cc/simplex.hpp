// Copyright 2026 The ccorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cc/errors.hpp"

namespace cc::lp {

template <class T>
struct PhaseOneResult {
  /// Sum of the artificial variables at the optimum; zero iff Ax = b, x >= 0
  /// is feasible.
  T infeasibility{};
  std::vector<T> x;
  std::size_t pivots = 0;
};

/// Phase-1 simplex for {x >= 0 : A x = b} on a dense tableau.
///
/// The entering column is the most negative reduced cost; after a run of
/// degenerate pivots the solver falls back to Bland's rule until the
/// objective moves again, which rules out cycling. `eps` is the reduced-cost
/// threshold and `pivot_eps` the smallest usable pivot (both 0 for exact
/// scalar types).
template <class T>
PhaseOneResult<T> phase_one(const std::vector<std::vector<T>>& a, const std::vector<T>& b, const T& eps,
                            const T& pivot_eps) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a.front().size() : 0;
  const std::size_t width = n + m + 1;
  check_limit(saturating_mul(m + 1, width), std::size_t{1} << 25, "simplex tableau");

  // Row i: [A_i | e_i | b_i] with rows flipped so that b >= 0.
  std::vector<T> tab((m + 1) * width, T(0));
  auto at = [&](std::size_t i, std::size_t j) -> T& { return tab[i * width + j]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < T(0);
    for (std::size_t j = 0; j < n; ++j) at(i, j) = flip ? T(-a[i][j]) : a[i][j];
    at(i, n + i) = T(1);
    at(i, n + m) = flip ? T(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // Cost row: reduced costs of the artificial objective, rhs = -objective.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) at(m, j) -= at(i, j);
  for (std::size_t i = 0; i < m; ++i) at(m, n + m) -= at(i, n + m);

  PhaseOneResult<T> result;
  const std::size_t max_pivots = 50 * (n + m) + 1000;
  const std::size_t degenerate_limit = m + 10;
  std::size_t degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run >= degenerate_limit;
    std::size_t enter = width;
    T most{};
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (!(at(m, j) < -eps)) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (enter == width || at(m, j) < most) {
        enter = j;
        most = at(m, j);
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    T best{};
    for (std::size_t i = 0; i < m; ++i) {
      if (!(at(i, enter) > pivot_eps)) continue;
      T ratio = at(i, n + m) / at(i, enter);
      bool take = leave == m || ratio < best;
      if (!take && !(best < ratio))
        take = bland ? basis[i] < basis[leave] : at(leave, enter) < at(i, enter);
      if (take) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot occur for phase 1
    degenerate_run = best > T(0) ? 0 : degenerate_run + 1;

    const T piv = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const T f = at(i, enter);
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
    if (++result.pivots > max_pivots) throw Error("simplex did not terminate");
  }

  result.infeasibility = -at(m, n + m);
  result.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = at(i, n + m);
  return result;
}

}  // namespace cc::lp
