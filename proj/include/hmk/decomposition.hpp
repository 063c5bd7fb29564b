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
#include <vector>

#include "hmk/errors.hpp"
#include "hmk/psd.hpp"
#include "hmk/scalar.hpp"
#include "hmk/sequence.hpp"
#include "hmk/tensor.hpp"

namespace hmk {

/// A pivot below this fraction of its own diagonal entry v_{2j} is cancellation
/// noise and counts as zero (float mode).
inline constexpr double kDeflationThreshold = 1e-12;
inline constexpr double kDecompositionTol = 1e-10;

/// Symmetric tridiagonal recurrence matrix of the orthonormal polynomials of
/// a measure with total mass `mass`.
struct JacobiMatrix {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // size diagonal.size() - 1, entries > 0
  double mass = 0.0;

  std::size_t size() const noexcept { return diagonal.size(); }
};

/// Builds the q-point recurrence from v through the LDL^T factorization of
/// the moment matrix: a_j = l_{j+1,j} - l_{j,j-1}, b_j = sqrt(d_j / d_{j-1}).
/// Needs v_0..v_{2q-1} when H_q is positive definite; when H_q is singular
/// the recurrence is truncated at the first vanishing pivot r and only
/// v_0..v_{2r-1} are read. Exact mode factors over the rationals and
/// converts only the final coefficients.
template <Scalar T>
JacobiMatrix jacobi_from_moments(const GeneratingVector<T>& v, int q, ScalarMode mode);

struct TridiagonalEigen {
  std::vector<double> eigenvalues;        // ascending
  std::vector<double> first_components;   // first row of the eigenvector matrix
};

/// Implicit-shift QL on a symmetric tridiagonal matrix, tracking only the
/// first component of each eigenvector. Throws NumericalFailure after
/// max_sweeps total iterations.
TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> diagonal,
                                             std::vector<double> off_diagonal, int max_sweeps);

/// Nodes are the eigenvalues of J, weights mass * (first component)^2.
AtomicMeasure gauss_quadrature(const JacobiMatrix& j);

/// atoms on the moment curve plus c e^{(x)m}, e = (0, ..., 0, 1)
struct VandermondeDecomposition {
  AtomicMeasure atoms;
  double augmented_c = 0.0;
  int m = 0;
  int n = 0;

  std::vector<RankOneTerm<double>> terms() const;
};

/// Sum-of-powers witness for a strong Hankel tensor. With D = m (n - 1), the
/// quadrature is built from the longest moment prefix whose Hankel matrix is
/// certified PSD (the tensor's own v_0..v_D at minimum) and c = v_D -
/// sum w t^D absorbs the top-degree surplus.
template <Scalar T>
VandermondeDecomposition strong_hankel_decompose(const HankelTensor<T>& h, ScalarMode mode,
                                                 double tol = kDecompositionTol);

struct ResidualReport {
  double max_abs = 0.0;
  double max_rel = 0.0;  // max_abs / max |A| (max_abs when A = 0)
  std::vector<int> worst_index;
  bool pass = false;
};

template <Scalar T>
ResidualReport verify_decomposition(const SymmetricTensor<T>& a, const VandermondeDecomposition& d,
                                    double tol);

template <Scalar T>
ResidualReport verify_decomposition(const HankelTensor<T>& h, const VandermondeDecomposition& d,
                                    double tol) {
  return verify_decomposition(densify(h), d, tol);
}

/// v_k = sum w t^k, k = 0..K
GeneratingVector<double> moments_of_measure(const AtomicMeasure& mu, int top_index);

}  // namespace hmk
