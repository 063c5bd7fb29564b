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

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace hmk {

using Rational = mpq_class;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

enum class ScalarMode { Float, Exact };

std::string_view to_string(ScalarMode mode) noexcept;

// Relative tolerance for comparing input data (sequence tables, tensors).
inline constexpr double kDataEqualityTol = 1e-12;

inline double to_double(double x) noexcept { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

inline double abs_value(double x) noexcept { return std::abs(x); }
inline Rational abs_value(const Rational& x) { return abs(x); }

inline bool is_finite(double x) noexcept { return std::isfinite(x); }
inline bool is_finite(const Rational&) noexcept { return true; }

// |a-b| <= tol * max(1, |a|, |b|) for floats; exact equality for rationals.
inline bool values_equal(double a, double b, double tol) noexcept {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool values_equal(const Rational& a, const Rational& b, double) {
  return a == b;
}

template <Scalar T>
T scalar_from(double x) {
  if constexpr (is_exact_v<T>) {
    return Rational(x);  // exact binary expansion
  } else {
    return x;
  }
}

template <Scalar T>
T scalar_from(const Rational& x) {
  if constexpr (is_exact_v<T>) {
    return x;
  } else {
    return x.get_d();
  }
}

template <Scalar T>
T scalar_from_count(std::uint64_t count) {
  if constexpr (is_exact_v<T>) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(count), 0, 0, &count);
    return Rational(z);
  } else {
    return static_cast<double>(count);
  }
}

template <Scalar T>
T ipow(const T& base, int exponent) {
  T result(1);
  T b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent > 0) b *= b;
  }
  return result;
}

// Accepts "p/q", "p", optional sign; throws ParseError otherwise.
Rational parse_rational(std::string_view text);

// Canonical "p/q" (or "p" when q = 1).
std::string format_rational(const Rational& x);

}  // namespace hmk
