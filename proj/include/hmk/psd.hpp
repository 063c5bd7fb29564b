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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmk/errors.hpp"
#include "hmk/scalar.hpp"
#include "hmk/sequence.hpp"

namespace hmk {

inline constexpr double kPsdTol = 1e-10;

enum class Verdict { Psd, NotPsd, Indeterminate };

std::string_view to_string(Verdict v) noexcept;

/// Row-major dense square matrix; only used at desk scale.
template <Scalar T>
class SquareMatrix {
 public:
  explicit SquareMatrix(int size) : size_(size), data_(static_cast<std::size_t>(size) * size, T(0)) {}
  int size() const noexcept { return size_; }
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(j);
  }
  int size_;
  std::vector<T> data_;
};

/// H_p with h_ij = v_{i+j}, 0 <= i, j < p.
template <Scalar T>
class HankelMatrix {
 public:
  HankelMatrix(GeneratingVector<T> v, int p) : v_(std::move(v)), p_(p) {
    if (p < 1) throw DomainError("Hankel matrix size must be >= 1");
    if (v_.top_index() < 2 * p - 2) {
      throw LengthError("H_" + std::to_string(p) + " needs v_0..v_" + std::to_string(2 * p - 2) +
                        " but the generating vector stops at v_" + std::to_string(v_.top_index()));
    }
  }

  int size() const noexcept { return p_; }
  const T& operator()(int i, int j) const { return v_[static_cast<std::size_t>(i + j)]; }
  const GeneratingVector<T>& generator() const noexcept { return v_; }

  SquareMatrix<T> dense() const {
    SquareMatrix<T> out(p_);
    for (int i = 0; i < p_; ++i)
      for (int j = 0; j < p_; ++j) out(i, j) = (*this)(i, j);
    return out;
  }

 private:
  GeneratingVector<T> v_;
  int p_;
};

template <Scalar T>
HankelMatrix<T> hankel_matrix(GeneratingVector<T> v, int p) {
  return HankelMatrix<T>(std::move(v), p);
}

/// Outcome of a semidefiniteness test together with its evidence.
///
/// Exact mode fills pivot_order / pivots / leading_minors (LDL^T diagonal in
/// pivot order and the leading principal minors of the permuted matrix) and,
/// for NOT_PSD, exact_witness with x^T H x = exact_witness_value < 0.
/// Float mode fills the eigenvalue extremes and, for NOT_PSD, the eigenvector
/// of the smallest eigenvalue as witness.
struct PsdReport {
  Verdict verdict = Verdict::Psd;
  ScalarMode mode = ScalarMode::Float;
  int p = 0;
  int rank = 0;

  std::vector<int> pivot_order;
  std::vector<Rational> pivots;
  std::vector<Rational> leading_minors;
  std::vector<Rational> exact_witness;
  Rational exact_witness_value;

  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double tolerance = 0.0;

  /// Float view of the witness in both modes (empty when none).
  std::vector<double> witness;
  double witness_value = 0.0;

  bool is_psd() const noexcept { return verdict == Verdict::Psd; }
};

/// Fraction-free symmetric elimination with diagonal pivoting over the
/// integers (after clearing denominators). PSD iff every pivot is positive
/// until the remaining Schur complement vanishes; a negative diagonal or a
/// zero diagonal with a nonzero off-diagonal yields an exact witness.
PsdReport psd_check_exact(const SquareMatrix<Rational>& a);

/// Symmetric eigensolve. With s = max(1, lambda_max):
///   lambda_min >= -tol * s                    -> PSD
///   lambda_min <  -tol * s, witness confirmed -> NOT_PSD
///   otherwise                                 -> INDETERMINATE
/// "Confirmed" means x^T H x < 0 when re-evaluated in extended precision.
PsdReport psd_check_float(const SquareMatrix<double>& a, double tol = kPsdTol);

template <Scalar T>
PsdReport psd_check(const HankelMatrix<T>& h, ScalarMode mode, double tol = kPsdTol) {
  const int p = h.size();
  if (mode == ScalarMode::Exact) {
    SquareMatrix<Rational> a(p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) a(i, j) = scalar_from<Rational>(h(i, j));
    return psd_check_exact(a);
  }
  SquareMatrix<double> a(p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = to_double(h(i, j));
  return psd_check_float(a, tol);
}

struct StrongHankelCertificate {
  int m = 0;
  int n = 0;
  int top_index = 0;
  std::vector<int> checked_p;
  PsdReport report;
  bool valid = false;
  std::string note;
};

/// Factors only the maximal H_p with 2p - 2 <= L; every smaller H_q is a
/// leading principal submatrix and inherits the verdict.
template <Scalar T>
StrongHankelCertificate strong_hankel_check(const GeneratingVector<T>& v, int n, int m,
                                            ScalarMode mode, double tol = kPsdTol) {
  if (n < 2) throw DomainError("tensor dimension must be >= 2");
  if (m < 1) throw DomainError("tensor order must be >= 1");
  const int degree = m * (n - 1);
  if (v.top_index() < degree) {
    throw LengthError("order " + std::to_string(m) + ", dimension " + std::to_string(n) +
                      " needs v_0..v_" + std::to_string(degree) + " but the generating vector stops at v_" +
                      std::to_string(v.top_index()));
  }
  StrongHankelCertificate cert;
  cert.m = m;
  cert.n = n;
  cert.top_index = v.top_index();
  const int p = v.top_index() / 2 + 1;
  cert.checked_p = {p};
  cert.report = psd_check(hankel_matrix(v, p), mode, tol);
  cert.valid = cert.report.is_psd();
  cert.note = "H_q for q < " + std::to_string(p) + " are leading principal submatrices of H_" +
              std::to_string(p) + "; a PSD verdict for H_" + std::to_string(p) + " covers them";
  return cert;
}

struct MomentSequenceReport {
  int p_max = 0;
  PsdReport report;
  bool consistent = false;
  /// Highest moment degree covered when consistent: 2 p_max - 2.
  int consistent_up_to_degree = -1;
};

template <Scalar T>
MomentSequenceReport moment_sequence_check(const GeneratingVector<T>& v, int p_max, ScalarMode mode,
                                           double tol = kPsdTol) {
  if (p_max < 1) throw DomainError("P_max must be >= 1");
  MomentSequenceReport out;
  out.p_max = p_max;
  out.report = psd_check(hankel_matrix(v, p_max), mode, tol);
  out.consistent = out.report.is_psd();
  if (out.consistent) out.consistent_up_to_degree = 2 * p_max - 2;
  return out;
}

/// floor(L / 2) + 1: the largest P_max the data supports.
template <Scalar T>
int default_p_max(const GeneratingVector<T>& v) noexcept {
  return v.top_index() / 2 + 1;
}

}  // namespace hmk
