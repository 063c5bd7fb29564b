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

#include "hmk/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace hmk {

namespace {

// Relative agreement demanded of the quadrature on v_0..v_{D-1} before a
// decomposition is returned; verify_decomposition applies the caller's
// tolerance afterwards.
constexpr double kMomentReproductionTol = 1e-6;

template <Scalar W>
bool pivot_vanishes(const W& pivot, const W& diagonal) {
  if constexpr (is_exact_v<W>) {
    (void)diagonal;
    return pivot <= 0;
  } else {
    return pivot <= kDeflationThreshold * diagonal;
  }
}

template <Scalar W>
JacobiMatrix recurrence_from_moments(const GeneratingVector<W>& w, int q) {
  const int top = w.top_index();
  JacobiMatrix out;
  out.mass = to_double(w[0]);
  if (!(w[0] > 0)) return out;

  const auto qs = static_cast<std::size_t>(q);
  std::vector<std::vector<W>> l(qs + 1, std::vector<W>(qs, W(0)));
  std::vector<W> d;
  bool last_row_complete = true;
  for (int j = 0; j < q; ++j) {
    const auto js = static_cast<std::size_t>(j);
    W pivot = w[2 * js];
    for (std::size_t k = 0; k < js; ++k) pivot -= l[js][k] * l[js][k] * d[k];
    if (pivot_vanishes(pivot, w[2 * js])) break;
    d.push_back(pivot);
    for (int i = j + 1; i <= q; ++i) {
      const auto is = static_cast<std::size_t>(i);
      if (i + j > top) {
        last_row_complete = false;
        continue;
      }
      W value = w[is + js];
      for (std::size_t k = 0; k < js; ++k) value -= l[is][k] * l[js][k] * d[k];
      l[is][js] = value / pivot;
    }
  }
  const std::size_t rank = d.size();
  if (rank == qs && !last_row_complete) {
    throw LengthError("H_" + std::to_string(q) + " is positive definite; the " + std::to_string(q) +
                      "-point recurrence needs v_0..v_" + std::to_string(2 * q - 1) +
                      " but the generating vector stops at v_" + std::to_string(top));
  }
  out.diagonal.resize(rank);
  out.off_diagonal.resize(rank > 0 ? rank - 1 : 0);
  for (std::size_t j = 0; j < rank; ++j) {
    W a = l[j + 1][j];
    if (j > 0) a -= l[j][j - 1];
    out.diagonal[j] = to_double(a);
    if (j > 0) {
      const W ratio = d[j] / d[j - 1];
      out.off_diagonal[j - 1] = std::sqrt(to_double(ratio));
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
JacobiMatrix jacobi_from_moments(const GeneratingVector<T>& v, int q, ScalarMode mode) {
  if (q < 1) throw DomainError("quadrature size must be >= 1");
  const PsdReport report = psd_check(hankel_matrix(v, q), mode);
  if (!report.is_psd()) {
    throw PreconditionError("moment matrix H_" + std::to_string(q) + " is " +
                            std::string(to_string(report.verdict)));
  }
  if (mode == ScalarMode::Exact) return recurrence_from_moments(convert<Rational>(v), q);
  return recurrence_from_moments(convert<double>(v), q);
}

TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> d, std::vector<double> off,
                                             int max_sweeps) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw DomainError("off-diagonal must have size n - 1");
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());  // e[i] couples i and i+1
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  int sweeps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t mm = l;
    do {
      for (mm = l; mm + 1 < n; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= eps * dd) break;
      }
      if (mm != l) {
        if (++sweeps > max_sweeps) throw NumericalFailure("tridiagonal eigensolve exceeded its sweep cap");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (std::size_t i = mm; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.eigenvalues.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(d[k]);
    out.first_components.push_back(z[k]);
  }
  return out;
}

AtomicMeasure gauss_quadrature(const JacobiMatrix& j) {
  if (j.size() == 0) return AtomicMeasure{};
  if (j.off_diagonal.size() + 1 != j.size()) throw DomainError("malformed Jacobi matrix");
  const int cap = 200 * static_cast<int>(j.size());
  const auto eig = symmetric_tridiagonal_eigen(j.diagonal, j.off_diagonal, cap);
  std::vector<Atom> atoms;
  atoms.reserve(eig.eigenvalues.size());
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    const double z = eig.first_components[k];
    atoms.push_back({eig.eigenvalues[k], j.mass * z * z});
  }
  return AtomicMeasure(std::move(atoms));
}

std::vector<RankOneTerm<double>> VandermondeDecomposition::terms() const {
  std::vector<RankOneTerm<double>> out;
  out.reserve(atoms.size() + 1);
  for (const Atom& a : atoms.atoms()) {
    RankOneTerm<double> term{std::vector<double>(static_cast<std::size_t>(n)), a.weight};
    double power = 1.0;
    for (auto& x : term.u) {
      x = power;
      power *= a.node;
    }
    out.push_back(std::move(term));
  }
  if (augmented_c != 0.0) {
    RankOneTerm<double> top{std::vector<double>(static_cast<std::size_t>(n), 0.0), augmented_c};
    top.u.back() = 1.0;
    out.push_back(std::move(top));
  }
  return out;
}

template <Scalar T>
VandermondeDecomposition strong_hankel_decompose(const HankelTensor<T>& h, ScalarMode mode, double tol) {
  const int n = h.dimension();
  const int m = h.order();
  const int degree = h.degree();
  const auto& v = h.generator();

  const auto prefix = v.prefix(static_cast<std::size_t>(degree) + 1);
  const auto cert = strong_hankel_check(prefix, n, m, mode);
  if (!cert.valid) {
    throw PreconditionError("not a strong Hankel tensor: H_" + std::to_string(cert.checked_p.front()) +
                            " of v_0..v_" + std::to_string(degree) + " is " +
                            std::string(to_string(cert.report.verdict)));
  }
  // Longer generators sharpen the quadrature when their own Hankel matrix
  // is still PSD; otherwise only the tensor's moments are used.
  std::optional<GeneratingVector<T>> extended;
  if (v.top_index() > degree && strong_hankel_check(v, n, m, mode).valid) extended = v;
  const GeneratingVector<T>& source = extended ? *extended : prefix;

  const int q = (source.top_index() + 1) / 2;
  VandermondeDecomposition out;
  out.m = m;
  out.n = n;
  out.atoms = gauss_quadrature(jacobi_from_moments(source, q, mode));

  const auto reproduced = moments_of_measure(out.atoms, degree);
  std::vector<double> abs_moments(static_cast<std::size_t>(degree) + 1, 0.0);
  for (const Atom& a : out.atoms.atoms()) {
    double power = a.weight;
    for (auto& x : abs_moments) {
      x += std::abs(power);
      power *= a.node;
    }
  }
  for (int k = 0; k < degree; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const double target = to_double(v[ks]);
    const double scale = std::max({1.0, std::abs(target), abs_moments[ks]});
    if (std::abs(target - reproduced[ks]) > kMomentReproductionTol * scale) {
      throw NumericalFailure("quadrature does not reproduce moment v_" + std::to_string(k) +
                             " (the moment prefix admits no curve-supported decomposition at float precision)");
    }
  }
  const auto top = static_cast<std::size_t>(degree);
  const double target = to_double(v[top]);
  const double scale = std::max({1.0, std::abs(target), abs_moments[top]});
  double c = target - reproduced[top];
  if (c < -tol * scale) {
    throw NumericalFailure("augmented coefficient is negative (" + std::to_string(c) +
                           "); rerun in exact mode");
  }
  if (std::abs(c) <= tol * scale) c = 0.0;
  out.augmented_c = c;
  return out;
}

template <Scalar T>
ResidualReport verify_decomposition(const SymmetricTensor<T>& a, const VandermondeDecomposition& d,
                                    double tol) {
  if (a.order() != d.m || a.dimension() != d.n) {
    throw DomainError("decomposition shape does not match tensor shape");
  }
  const auto terms = d.terms();
  const auto reconstruction = rank_one_sum<double>(terms, d.m, d.n);
  ResidualReport report;
  double norm = 0.0;
  std::size_t worst = 0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const double target = to_double(a[r]);
    norm = std::max(norm, std::abs(target));
    const double deviation = std::abs(target - reconstruction[r]);
    if (deviation > report.max_abs) {
      report.max_abs = deviation;
      worst = r;
    }
  }
  const auto tuple = a.layout().tuple(worst);
  report.worst_index.assign(tuple.begin(), tuple.end());
  report.max_rel = norm > 0.0 ? report.max_abs / norm : report.max_abs;
  report.pass = report.max_rel <= tol;
  return report;
}

GeneratingVector<double> moments_of_measure(const AtomicMeasure& mu, int top_index) {
  return moments_of_atoms<double>(mu.atoms(), top_index);
}

template JacobiMatrix jacobi_from_moments(const GeneratingVector<double>&, int, ScalarMode);
template JacobiMatrix jacobi_from_moments(const GeneratingVector<Rational>&, int, ScalarMode);
template VandermondeDecomposition strong_hankel_decompose(const HankelTensor<double>&, ScalarMode, double);
template VandermondeDecomposition strong_hankel_decompose(const HankelTensor<Rational>&, ScalarMode, double);
template ResidualReport verify_decomposition(const SymmetricTensor<double>&, const VandermondeDecomposition&, double);
template ResidualReport verify_decomposition(const SymmetricTensor<Rational>&, const VandermondeDecomposition&, double);

}  // namespace hmk
