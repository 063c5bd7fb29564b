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

#include "hmk/explorer.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace hmk {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

namespace {

// Portable uniform draw in [0, 1) from the engine's raw bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void TruncatedFamily::validate() const {
  if (n < 2) throw DomainError("family dimension n must be >= 2");
  if (m_max < 1) throw DomainError("family m_max must be >= 1");
  const int top = top_index();
  std::set<int> seen;
  for (int k : pattern) {
    if (k < 0 || k > top) {
      throw DomainError("pattern index " + std::to_string(k) + " outside [0, " + std::to_string(top) + "]");
    }
    if (!seen.insert(k).second) throw DomainError("pattern index " + std::to_string(k) + " repeated");
  }
  if (sampler) {
    if (sampler->count < 0) throw DomainError("sampler count must be >= 0");
    if (!(sampler->low <= sampler->high)) throw DomainError("sampler range must satisfy low <= high");
    return;
  }
  if (grids.size() != pattern.size()) throw DomainError("need one value grid per pattern index");
  for (const auto& g : grids) {
    if (g.empty()) throw DomainError("value grids must be nonempty");
    for (double x : g)
      if (!std::isfinite(x)) throw DomainError("grid values must be finite");
  }
}

TruncatedFamily TruncatedFamily::preset(int n, int m_max) {
  TruncatedFamily family;
  family.n = n;
  family.m_max = m_max;
  const int top = family.top_index();
  family.pattern = {0};
  family.grids = {{1.0}};
  if (top / 2 > 0) {
    family.pattern.push_back(top / 2);
    family.grids.push_back({-1.0, -0.5, 0.0, 0.5, 1.0});
  }
  if (top > top / 2) {
    family.pattern.push_back(top);
    family.grids.push_back({1.0});
  }
  return family;
}

std::vector<GeneratingVector<double>> truncated_vectors(const TruncatedFamily& family) {
  family.validate();
  const auto length = static_cast<std::size_t>(family.top_index()) + 1;
  std::vector<GeneratingVector<double>> out;

  if (family.sampler) {
    std::mt19937_64 rng(family.sampler->seed);
    const double span = family.sampler->high - family.sampler->low;
    for (int c = 0; c < family.sampler->count; ++c) {
      std::vector<double> v(length, 0.0);
      for (int k : family.pattern) v[static_cast<std::size_t>(k)] = family.sampler->low + span * unit_uniform(rng);
      out.emplace_back(std::move(v));
    }
    return out;
  }

  std::vector<std::size_t> odometer(family.pattern.size(), 0);
  while (true) {
    std::vector<double> v(length, 0.0);
    for (std::size_t p = 0; p < family.pattern.size(); ++p) {
      v[static_cast<std::size_t>(family.pattern[p])] = family.grids[p][odometer[p]];
    }
    out.emplace_back(std::move(v));
    std::size_t p = odometer.size();
    while (p > 0) {
      --p;
      if (++odometer[p] < family.grids[p].size()) break;
      odometer[p] = 0;
      if (p == 0) return out;
    }
    if (odometer.empty()) return out;
  }
}

namespace {

// Residual r_e = sqrt(mult_e) (A_e - sum_k prod_{i in e} u_k[i]) over sorted
// entries e, so that ||r||^2 is the full Frobenius objective.
class FitProblem {
 public:
  FitProblem(const SymmetricTensor<double>& a, int rank)
      : a_(a), m_(a.order()), n_(a.dimension()), r_(rank), entries_(a.size()) {
    const auto& layout = a.layout();
    sqrt_mult_.resize(entries_);
    counts_.assign(entries_ * static_cast<std::size_t>(n_), 0);
    for (std::size_t e = 0; e < entries_; ++e) {
      sqrt_mult_[e] = std::sqrt(static_cast<double>(layout.multiplicity(e)));
      for (int i : layout.tuple(e)) ++counts_[e * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)];
    }
    norm_ = 0.0;
    for (double x : a.values()) norm_ = std::max(norm_, std::abs(x));
  }

  int parameters() const noexcept { return r_ * n_; }
  double norm() const noexcept { return norm_; }

  double monomial(const double* u, std::size_t e) const {
    double value = 1.0;
    const int* c = &counts_[e * static_cast<std::size_t>(n_)];
    for (int i = 0; i < n_; ++i) value *= ipow(u[i], c[i]);
    return value;
  }

  // Unweighted residual tensor A - model.
  Eigen::VectorXd raw_residual(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(entries_));
    for (std::size_t e = 0; e < entries_; ++e) {
      double model = 0.0;
      for (int k = 0; k < r_; ++k) model += monomial(theta.data() + k * n_, e);
      out(static_cast<Eigen::Index>(e)) = a_[e] - model;
    }
    return out;
  }

  Eigen::VectorXd weighted(const Eigen::VectorXd& raw) const {
    Eigen::VectorXd out = raw;
    for (std::size_t e = 0; e < entries_; ++e) out(static_cast<Eigen::Index>(e)) *= sqrt_mult_[e];
    return out;
  }

  double relative_residual(const Eigen::VectorXd& raw) const {
    const double max_dev = raw.size() ? raw.cwiseAbs().maxCoeff() : 0.0;
    return norm_ > 0.0 ? max_dev / norm_ : max_dev;
  }

  // d r_e / d u_k[j] = -sqrt(mult_e) c_j u_k[j]^{c_j - 1} prod_{l != j} u_k[l]^{c_l}
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(entries_), parameters());
    for (std::size_t e = 0; e < entries_; ++e) {
      const int* c = &counts_[e * static_cast<std::size_t>(n_)];
      for (int k = 0; k < r_; ++k) {
        const double* u = theta.data() + k * n_;
        for (int j = 0; j < n_; ++j) {
          if (c[j] == 0) continue;
          double d = static_cast<double>(c[j]) * ipow(u[j], c[j] - 1);
          for (int l = 0; l < n_; ++l)
            if (l != j) d *= ipow(u[l], c[l]);
          jac(static_cast<Eigen::Index>(e), k * n_ + j) = -sqrt_mult_[e] * d;
        }
      }
    }
    return jac;
  }

 private:
  const SymmetricTensor<double>& a_;
  int m_;
  int n_;
  int r_;
  std::size_t entries_;
  std::vector<double> sqrt_mult_;
  std::vector<int> counts_;
  double norm_ = 0.0;
};

struct RestartOutcome {
  Eigen::VectorXd theta;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

RestartOutcome levenberg_marquardt(const FitProblem& problem, Eigen::VectorXd theta, const FitOptions& options) {
  constexpr int kStallWindow = 10;
  constexpr double kStallDecrease = 1e-10;

  RestartOutcome out;
  Eigen::VectorXd raw = problem.raw_residual(theta);
  Eigen::VectorXd res = problem.weighted(raw);
  double objective = res.squaredNorm();
  out.history.push_back(objective);
  double damping = -1.0;
  int stalled = 0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (problem.relative_residual(raw) <= options.tol) break;
    const Eigen::MatrixXd jac = problem.jacobian(theta);
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * res;
    if (damping < 0.0) damping = 1e-3 * std::max(1e-12, normal.diagonal().maxCoeff());
    const double damping_cap = 1e16 * std::max(1.0, normal.diagonal().maxCoeff());

    bool accepted = false;
    while (damping <= damping_cap) {
      Eigen::MatrixXd system = normal;
      system.diagonal().array() += damping;
      const Eigen::VectorXd step = system.ldlt().solve(-gradient);
      const Eigen::VectorXd candidate = theta + step;
      const Eigen::VectorXd candidate_raw = problem.raw_residual(candidate);
      const Eigen::VectorXd candidate_res = problem.weighted(candidate_raw);
      const double candidate_objective = candidate_res.squaredNorm();
      if (std::isfinite(candidate_objective) && candidate_objective < objective) {
        const double decrease = (objective - candidate_objective) / std::max(objective, 1e-300);
        stalled = decrease < kStallDecrease ? stalled + 1 : 0;
        theta = candidate;
        raw = candidate_raw;
        res = candidate_res;
        objective = candidate_objective;
        out.history.push_back(objective);
        damping = std::max(damping / 3.0, 1e-15);
        accepted = true;
        break;
      }
      damping *= 4.0;
    }
    if (!accepted || stalled >= kStallWindow) {
      ++it;
      break;
    }
  }
  out.theta = std::move(theta);
  out.residual = problem.relative_residual(raw);
  out.iterations = it;
  return out;
}

std::vector<RankOneTerm<double>> terms_from(const Eigen::VectorXd& theta, int r, int n) {
  std::vector<RankOneTerm<double>> terms;
  terms.reserve(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    RankOneTerm<double> t{std::vector<double>(theta.data() + k * n, theta.data() + (k + 1) * n), 1.0};
    terms.push_back(std::move(t));
  }
  return terms;
}

SymmetricTensor<double> residual_tensor(const SymmetricTensor<double>& a, std::span<const std::vector<double>> vectors) {
  SymmetricTensor<double> out = a;
  const auto& layout = a.layout();
  for (const auto& u : vectors) {
    if (static_cast<int>(u.size()) != a.dimension()) throw DomainError("vector length does not match dimension");
    for (std::size_t e = 0; e < layout.size(); ++e) {
      double product = 1.0;
      for (int i : layout.tuple(e)) product *= u[static_cast<std::size_t>(i)];
      out[e] -= product;
    }
  }
  return out;
}

}  // namespace

double fit_relative_residual(const SymmetricTensor<double>& a, std::span<const RankOneTerm<double>> terms) {
  const auto model = rank_one_sum<double>(terms, a.order(), a.dimension());
  double norm = 0.0;
  double deviation = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e) {
    norm = std::max(norm, std::abs(a[e]));
    deviation = std::max(deviation, std::abs(a[e] - model[e]));
  }
  return norm > 0.0 ? deviation / norm : deviation;
}

double cd_objective(const SymmetricTensor<double>& a, std::span<const std::vector<double>> vectors) {
  const auto residual = residual_tensor(a, vectors);
  const auto& layout = a.layout();
  double total = 0.0;
  for (std::size_t e = 0; e < layout.size(); ++e) {
    total += static_cast<double>(layout.multiplicity(e)) * residual[e] * residual[e];
  }
  return total;
}

std::vector<double> cd_gradient(const SymmetricTensor<double>& a, std::span<const std::vector<double>> vectors) {
  const auto residual = residual_tensor(a, vectors);
  const double factor = -2.0 * static_cast<double>(a.order());
  std::vector<double> out;
  out.reserve(vectors.size() * static_cast<std::size_t>(a.dimension()));
  for (const auto& u : vectors) {
    for (double g : contract_gradient<double>(residual, u)) out.push_back(factor * g);
  }
  return out;
}

FitResult cd_fit(const SymmetricTensor<double>& a, int r, const FitOptions& options) {
  if (r < 1) throw DomainError("fit rank must be >= 1");
  if (options.restarts < 1) throw DomainError("fit needs at least one restart");
  const int n = a.dimension();
  const int m = a.order();
  const FitProblem problem(a, r);
  const double scale = std::pow(problem.norm(), 1.0 / static_cast<double>(m));

  FitResult best;
  best.rank = r;
  best.residual = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  for (int s = 0; s < options.restarts; ++s) {
    std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(s)));
    Eigen::VectorXd theta(problem.parameters());
    for (int k = 0; k < r; ++k) {
      double norm2 = 0.0;
      while (norm2 == 0.0) {
        norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double x = 2.0 * unit_uniform(rng) - 1.0;
          theta(k * n + i) = x;
          norm2 += x * x;
        }
      }
      theta.segment(k * n, n) *= scale / std::sqrt(norm2);
    }
    RestartOutcome outcome = levenberg_marquardt(problem, std::move(theta), options);
    total_iterations += outcome.iterations;
    best.restarts_used = s + 1;
    if (outcome.residual < best.residual) {
      best.terms = terms_from(outcome.theta, r, n);
      best.residual = fit_relative_residual(a, best.terms);
      best.objective_history = std::move(outcome.history);
      best.iterations = outcome.iterations;
    }
    if (best.residual <= options.tol) break;
  }
  best.converged = best.residual <= options.tol;
  (void)total_iterations;
  return best;
}

ExplorerReport search_counterexample(const TruncatedFamily& family, std::span<const int> m_list,
                                     const FitOptions& options) {
  family.validate();
  for (int m : m_list) {
    if (m < 1 || m > family.m_max) {
      throw DomainError("order " + std::to_string(m) + " outside [1, m_max = " + std::to_string(family.m_max) + "]");
    }
  }
  const int n = family.n;
  ExplorerReport report;
  const auto vectors = truncated_vectors(family);
  report.enumerated = static_cast<int>(vectors.size());
  for (std::size_t id = 0; id < vectors.size(); ++id) {
    const auto& v = vectors[id];
    const auto cert = strong_hankel_check(v, n, family.m_max, ScalarMode::Float);
    if (cert.valid) continue;

    CandidateReport candidate;
    candidate.id = static_cast<int>(id);
    candidate.vector.assign(v.values().begin(), v.values().end());
    candidate.strong_check = cert.report;
    candidate.all_converged = true;
    for (int m : m_list) {
      const auto prefix = v.prefix(static_cast<std::size_t>(m * (n - 1)) + 1);
      const auto tensor = densify(hankel_tensor(prefix, n, m));
      const int max_rank = static_cast<int>(binomial(n + m - 1, m));
      const int hankel_rank = psd_check(hankel_matrix(prefix, prefix.top_index() / 2 + 1), ScalarMode::Float).rank;
      FitRecord record{m, 0, std::numeric_limits<double>::infinity(), false};
      for (int r = std::clamp(hankel_rank, 1, max_rank); r <= max_rank; ++r) {
        FitOptions fit_options = options;
        fit_options.seed = derive_seed(options.seed, id, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(r));
        const FitResult fit = cd_fit(tensor, r, fit_options);
        if (fit.residual < record.residual || fit.converged) record = {m, r, fit.residual, fit.converged};
        if (fit.converged) break;
      }
      candidate.all_converged = candidate.all_converged && record.converged;
      candidate.worst_residual = std::max(candidate.worst_residual, record.residual);
      candidate.fits.push_back(record);
    }
    report.candidates.push_back(std::move(candidate));
  }
  std::stable_sort(report.candidates.begin(), report.candidates.end(),
                   [](const CandidateReport& a, const CandidateReport& b) {
                     if (a.all_converged != b.all_converged) return a.all_converged;
                     if (a.worst_residual != b.worst_residual) return a.worst_residual < b.worst_residual;
                     return a.id < b.id;
                   });
  return report;
}

}  // namespace hmk
