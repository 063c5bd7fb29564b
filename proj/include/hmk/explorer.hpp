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
#include <optional>
#include <span>
#include <vector>

#include "hmk/psd.hpp"
#include "hmk/sequence.hpp"
#include "hmk/tensor.hpp"

namespace hmk {

/// Generating vectors of length m_max (n - 1) + 1 that vanish outside
/// `pattern`. Values on the pattern come either from per-index grids
/// (cartesian product, last pattern index varying fastest) or from a seeded
/// uniform sampler.
struct TruncatedFamily {
  struct Sampler {
    int count = 0;
    double low = -1.0;
    double high = 1.0;
    std::uint64_t seed = 0;
  };

  int n = 3;
  int m_max = 6;
  std::vector<int> pattern;
  std::vector<std::vector<double>> grids;
  std::optional<Sampler> sampler;

  int top_index() const noexcept { return m_max * (n - 1); }
  void validate() const;

  /// Pattern {0, L/2, L} with the middle value on a small grid.
  static TruncatedFamily preset(int n, int m_max);
};

std::vector<GeneratingVector<double>> truncated_vectors(const TruncatedFamily& family);

struct FitOptions {
  double tol = 1e-8;
  int restarts = 20;
  int max_iterations = 500;
  std::uint64_t seed = 0;
};

struct FitResult {
  int rank = 0;
  std::vector<RankOneTerm<double>> terms;
  /// max_i |A_i - sum_k u_k^{(x)m}_i| / max_i |A_i|
  double residual = 0.0;
  bool converged = false;
  int restarts_used = 0;
  int iterations = 0;
  /// Objective after each accepted step of the returned restart.
  std::vector<double> objective_history;
};

double fit_relative_residual(const SymmetricTensor<double>& a, std::span<const RankOneTerm<double>> terms);

/// ||A - sum_k u_k^{(x)m}||_F^2 over the full (unsymmetrized) tensor.
double cd_objective(const SymmetricTensor<double>& a, std::span<const std::vector<double>> vectors);

/// d objective / d u_k = -2 m (A - sum u^m) u_k^{m-1}, concatenated over k.
std::vector<double> cd_gradient(const SymmetricTensor<double>& a, std::span<const std::vector<double>> vectors);

/// Multi-start damped Gauss-Newton fit of r symmetric rank-one terms. A
/// non-converged result is inconclusive, never a certificate.
FitResult cd_fit(const SymmetricTensor<double>& a, int r, const FitOptions& options);

struct FitRecord {
  int m = 0;
  int r = 0;
  double residual = 0.0;
  bool converged = false;
};

struct CandidateReport {
  int id = 0;
  std::vector<double> vector;
  PsdReport strong_check;
  std::vector<FitRecord> fits;
  bool all_converged = false;
  double worst_residual = 0.0;
};

struct ExplorerReport {
  int enumerated = 0;
  std::vector<CandidateReport> candidates;  // qualifying only, ranked
};

/// Keeps candidates whose Hankel matrix is not PSD and fits every order in
/// m_list with r increasing from the Hankel rank to C(n+m-1, m). Ranked by
/// (all orders converged first, worst residual, id).
ExplorerReport search_counterexample(const TruncatedFamily& family, std::span<const int> m_list,
                                     const FitOptions& options);

/// splitmix64 of (seed, a, b, c)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

}  // namespace hmk
