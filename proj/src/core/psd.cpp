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

#include "hmk/psd.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>
#include <stdexcept>

namespace hmk {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Psd:
      return "PSD";
    case Verdict::NotPsd:
      return "NOT_PSD";
    case Verdict::Indeterminate:
      return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

namespace {

Rational quadratic_form(const SquareMatrix<Rational>& a, const std::vector<Rational>& x) {
  Rational total = 0;
  for (int i = 0; i < a.size(); ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    Rational row = 0;
    for (int j = 0; j < a.size(); ++j) row += a(i, j) * x[static_cast<std::size_t>(j)];
    total += x[static_cast<std::size_t>(i)] * row;
  }
  return total;
}

// Solves a x = b for a small nonsingular rational system.
std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("singular leading block during witness lift");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Positive rescaling to a primitive integer vector; the sign of x^T A x is kept.
void make_primitive(std::vector<Rational>& x) {
  mpz_class den_lcm = 1;
  for (const auto& xi : x) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), xi.get_den_mpz_t());
  mpz_class num_gcd = 0;
  for (auto& xi : x) {
    xi *= den_lcm;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), xi.get_num_mpz_t());
  }
  if (num_gcd > 1) {
    for (auto& xi : x) xi /= num_gcd;
  }
}

}  // namespace

PsdReport psd_check_exact(const SquareMatrix<Rational>& a) {
  const int p = a.size();
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (a(i, j) != a(j, i)) throw DomainError("psd_check requires a symmetric matrix");

  PsdReport report;
  report.mode = ScalarMode::Exact;
  report.p = p;

  // Clear denominators; a positive scale keeps inertia.
  mpz_class scale = 1;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(i, j).get_den_mpz_t());

  const auto at = [p](int i, int j) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(p) + static_cast<std::size_t>(j);
  };
  std::vector<mpz_class> m(static_cast<std::size_t>(p) * static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const Rational scaled = a(i, j) * scale;
      m[at(i, j)] = scaled.get_num();
    }

  std::vector<int> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), 0);
  const auto swap_symmetric = [&](int k, int i) {
    if (k == i) return;
    for (int c = 0; c < p; ++c) std::swap(m[at(k, c)], m[at(i, c)]);
    for (int r = 0; r < p; ++r) std::swap(m[at(r, k)], m[at(r, i)]);
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(i)]);
  };

  // After step k-1 the trailing block holds prev * (Schur complement) * scale^k
  // entries, all integers, with prev > 0, so signs are those of the Schur
  // complement.
  mpz_class prev = 1;
  mpz_class scale_power = 1;
  Rational previous_minor = 1;
  std::vector<Rational> trailing_witness;  // indexed by permuted position - k
  int k = 0;
  for (; k < p; ++k) {
    int negative = -1;
    int positive = -1;
    for (int i = k; i < p; ++i) {
      const int s = sgn(m[at(i, i)]);
      if (s < 0) {
        negative = i;
        break;
      }
      if (s > 0 && positive < 0) positive = i;
    }
    if (negative >= 0) {
      trailing_witness.assign(static_cast<std::size_t>(p - k), Rational(0));
      trailing_witness[static_cast<std::size_t>(negative - k)] = 1;
      break;
    }
    if (positive < 0) {
      // Zero diagonal: PSD only if the whole trailing block is zero.
      for (int i = k; i < p && trailing_witness.empty(); ++i) {
        for (int j = i + 1; j < p; ++j) {
          if (m[at(i, j)] != 0) {
            // y = t e_i + e_j with t = -1 / (2 m_ij) gives y^T M y = -1.
            trailing_witness.assign(static_cast<std::size_t>(p - k), Rational(0));
            trailing_witness[static_cast<std::size_t>(i - k)] = Rational(-1) / (2 * Rational(m[at(i, j)]));
            trailing_witness[static_cast<std::size_t>(j - k)] = 1;
            break;
          }
        }
      }
      break;
    }

    swap_symmetric(k, positive);
    const mpz_class pivot = m[at(k, k)];
    for (int i = k + 1; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        mpz_class value = pivot * m[at(i, j)] - m[at(i, k)] * m[at(k, j)];
        mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), prev.get_mpz_t());
        m[at(i, j)] = value;
        m[at(j, i)] = value;
      }
    }
    scale_power *= scale;
    Rational minor(pivot, scale_power);
    minor.canonicalize();
    report.pivot_order.push_back(perm[static_cast<std::size_t>(k)]);
    report.leading_minors.push_back(minor);
    report.pivots.push_back(minor / previous_minor);
    previous_minor = minor;
    prev = pivot;
  }
  report.rank = static_cast<int>(report.pivots.size());

  if (trailing_witness.empty()) {
    report.verdict = Verdict::Psd;
    return report;
  }

  // Lift y on the trailing coordinates to x with x_L = -A_LL^{-1} A_LT y so
  // that x^T A x equals y^T S y for the Schur complement S.
  report.verdict = Verdict::NotPsd;
  std::vector<Rational> permuted(static_cast<std::size_t>(p), Rational(0));
  for (int i = k; i < p; ++i) permuted[static_cast<std::size_t>(i)] = trailing_witness[static_cast<std::size_t>(i - k)];
  if (k > 0) {
    std::vector<std::vector<Rational>> lead(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
    std::vector<Rational> rhs(static_cast<std::size_t>(k), Rational(0));
    for (int i = 0; i < k; ++i) {
      const int oi = perm[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j) lead[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(oi, perm[static_cast<std::size_t>(j)]);
      for (int j = k; j < p; ++j) rhs[static_cast<std::size_t>(i)] -= a(oi, perm[static_cast<std::size_t>(j)]) * permuted[static_cast<std::size_t>(j)];
    }
    const auto x_lead = solve_rational(std::move(lead), std::move(rhs));
    for (int i = 0; i < k; ++i) permuted[static_cast<std::size_t>(i)] = x_lead[static_cast<std::size_t>(i)];
  }
  std::vector<Rational> x(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) x[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = permuted[static_cast<std::size_t>(i)];
  make_primitive(x);
  report.exact_witness_value = quadratic_form(a, x);
  if (report.exact_witness_value >= 0) {
    throw std::logic_error("exact NOT_PSD witness failed to re-verify");
  }
  report.witness.reserve(x.size());
  for (const auto& xi : x) report.witness.push_back(xi.get_d());
  report.witness_value = report.exact_witness_value.get_d();
  report.exact_witness = std::move(x);
  return report;
}

PsdReport psd_check_float(const SquareMatrix<double>& a, double tol) {
  const int p = a.size();
  Eigen::MatrixXd dense(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (!std::isfinite(a(i, j))) throw DomainError("matrix entries must be finite");
      dense(i, j) = a(i, j);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolve did not converge");

  PsdReport report;
  report.mode = ScalarMode::Float;
  report.p = p;
  report.tolerance = tol;
  const auto& eigenvalues = solver.eigenvalues();
  report.lambda_min = eigenvalues(0);
  report.lambda_max = eigenvalues(p - 1);
  const double scale = std::max(1.0, report.lambda_max);
  const double threshold = tol * scale;
  for (int i = 0; i < p; ++i)
    if (std::abs(eigenvalues(i)) > threshold) ++report.rank;

  if (report.lambda_min >= -threshold) {
    report.verdict = Verdict::Psd;
    return report;
  }
  const Eigen::VectorXd x = solver.eigenvectors().col(0);
  long double value = 0.0L;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      value += static_cast<long double>(x(i)) * static_cast<long double>(a(i, j)) * static_cast<long double>(x(j));
  report.witness.assign(x.data(), x.data() + p);
  report.witness_value = static_cast<double>(value);
  report.verdict = value < 0.0L ? Verdict::NotPsd : Verdict::Indeterminate;
  return report;
}

}  // namespace hmk
