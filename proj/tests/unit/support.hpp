// Copyright 2026 The hmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hmk/scalar.hpp"
#include "hmk/sequence.hpp"

namespace hmk::testing {

using Q = Rational;

inline GeneratingVector<Q> qv(std::vector<Q> v) { return GeneratingVector<Q>(std::move(v)); }
inline GeneratingVector<double> dv(std::vector<double> v) { return GeneratingVector<double>(std::move(v)); }

inline GeneratingVector<Q> hilbert(int top) {
  std::vector<Q> v;
  for (int k = 0; k <= top; ++k) v.emplace_back(1, k + 1);
  return qv(std::move(v));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Q small_rational(std::mt19937_64& rng) {
  const long num = std::uniform_int_distribution<long>(-9, 9)(rng);
  const long den = std::uniform_int_distribution<long>(1, 7)(rng);
  Q q(num, den);
  q.canonicalize();
  return q;
}

// Determinant by cofactor expansion along the first row.
inline Q cofactor_det(const std::vector<std::vector<Q>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return Q(1);
  if (n == 1) return a[0][0];
  Q total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Q>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Q> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    const Q term = a[0][c] * cofactor_det(minor);
    total += (c % 2 == 0) ? term : Q(-term);
  }
  return total;
}

}  // namespace hmk::testing
