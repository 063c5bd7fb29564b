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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hmk/commands.hpp"
#include "hmk/decomposition.hpp"
#include "hmk/errors.hpp"
#include "hmk/explorer.hpp"
#include "hmk/json_io.hpp"
#include "hmk/psd.hpp"
#include "hmk/tensor.hpp"

using namespace hmk;

namespace {

using Q = Rational;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Q small_rational(std::mt19937_64& rng) {
  Q q(uniform_int(rng, -9, 9), uniform_int(rng, 1, 7));
  q.canonicalize();
  return q;
}

Q cofactor_det(const std::vector<std::vector<Q>>& a) {
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

GeneratingVector<Q> hilbert(int top) {
  std::vector<Q> v;
  for (int k = 0; k <= top; ++k) v.emplace_back(1, k + 1);
  return GeneratingVector<Q>(std::move(v));
}

Outcome hilbert_certification() {
  for (int p = 1; p <= 10; ++p) {
    const auto r = psd_check(hankel_matrix(hilbert(2 * p - 2), p), ScalarMode::Exact);
    if (r.verdict != Verdict::Psd || r.rank != p) {
      return {false, "p=" + std::to_string(p) + " verdict " + std::string(to_string(r.verdict)) + " rank " +
                         std::to_string(r.rank)};
    }
  }
  const auto r3 = psd_check(hankel_matrix(hilbert(4), 3), ScalarMode::Exact);
  const std::vector<Q> expected{Q(1), Q(1, 12), Q(1, 2160)};
  if (r3.leading_minors != expected) return {false, "p=3 minors differ from 1, 1/12, 1/2160"};
  for (int k = 1; k <= 3; ++k) {
    std::vector<std::vector<Q>> block(static_cast<std::size_t>(k), std::vector<Q>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) block[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Q(1, i + j + 1);
    if (cofactor_det(block) != r3.leading_minors[static_cast<std::size_t>(k - 1)]) {
      return {false, "p=3 minor " + std::to_string(k) + " disagrees with cofactor expansion"};
    }
  }
  return {true, "p=1..10 PSD with full rank, p=3 minors 1, 1/12, 1/2160"};
}

Outcome path_equality() {
  std::mt19937_64 rng(20260101);
  double worst = 0;
  int exact_count = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = uniform_int(rng, 2, 4);
    const int m = uniform_int(rng, 1, 6);
    if (trial % 2 == 0) {
      MultidimensionalSequence<Q>::Table t;
      for (const auto& j : multi_indices_up_to(n, m)) t[j] = small_rational(rng);
      std::vector<Q> x(static_cast<std::size_t>(n));
      for (auto& z : x) z = small_rational(rng);
      const auto p = polynomial_eval(MultidimensionalSequence<Q>::table(n, m, t), m, std::span<const Q>(x));
      if (p.direct != p.contracted) return {false, "rational instance " + std::to_string(trial) + " differs"};
      ++exact_count;
    } else {
      MultidimensionalSequence<double>::Table t;
      for (const auto& j : multi_indices_up_to(n, m)) t[j] = uniform(rng, -1, 1);
      std::vector<double> x(static_cast<std::size_t>(n));
      for (auto& z : x) z = uniform(rng, -1, 1);
      const auto p = polynomial_eval(MultidimensionalSequence<double>::table(n, m, t), m, std::span<const double>(x));
      const double rel = std::abs(p.direct - p.contracted) / std::max(std::abs(p.direct), 1e-300);
      worst = std::max(worst, rel);
      if (rel > 1e-12) return {false, "float instance " + std::to_string(trial) + " relative gap " + std::to_string(rel)};
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "500 instances, %d exact, worst float relative gap %.3g", exact_count, worst);
  return {true, buf};
}

// Rational nodes on a 1/40 grid and rational weights so the moments are exact.
std::vector<BasicAtom<Q>> random_rational_measure(std::mt19937_64& rng, int r) {
  std::vector<int> ticks;
  while (static_cast<int>(ticks.size()) < r) {
    const int t = uniform_int(rng, -80, 80);
    if (std::all_of(ticks.begin(), ticks.end(), [&](int s) { return std::abs(s - t) >= 4; })) ticks.push_back(t);
  }
  std::sort(ticks.begin(), ticks.end());
  std::vector<BasicAtom<Q>> atoms;
  for (int t : ticks) {
    Q node(t, 40);
    Q weight(uniform_int(rng, 10, 200), 100);
    node.canonicalize();
    weight.canonicalize();
    atoms.push_back({node, weight});
  }
  return atoms;
}

Outcome decomposition_round_trip() {
  std::mt19937_64 rng(20260102);
  const std::vector<std::pair<int, int>> shapes{{3, 4}, {3, 6}, {4, 4}};
  double worst_residual = 0, worst_atom = 0;
  int runs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int r = uniform_int(rng, 1, 5);
    const auto atoms = random_rational_measure(rng, r);
    for (const auto& [n, m] : shapes) {
      const int top = std::max(m * (n - 1), 2 * r - 1);
      const auto v = moments_of_atoms<Q>(std::span<const BasicAtom<Q>>(atoms), top);
      const auto h = hankel_tensor(v, n, m);
      const auto d = strong_hankel_decompose(h, ScalarMode::Exact);
      const auto res = verify_decomposition(h, d, 1e-8);
      worst_residual = std::max(worst_residual, res.max_rel);
      ++runs;
      const std::string where = "measure " + std::to_string(trial) + " (n,m)=(" + std::to_string(n) + "," +
                                std::to_string(m) + ")";
      if (res.max_rel > 1e-8) return {false, where + " residual " + std::to_string(res.max_rel)};
      if (d.atoms.size() != atoms.size()) {
        return {false, where + " recovered " + std::to_string(d.atoms.size()) + " of " + std::to_string(r) + " atoms"};
      }
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double dn = std::abs(d.atoms.atoms()[k].node - to_double(atoms[k].node));
        const double dw = std::abs(d.atoms.atoms()[k].weight - to_double(atoms[k].weight));
        worst_atom = std::max({worst_atom, dn, dw});
        if (dn > 1e-6 || dw > 1e-6) return {false, where + " atom " + std::to_string(k) + " off by " + std::to_string(std::max(dn, dw))};
      }
    }
  }
  // Same sizes with continuous nodes and float moments.
  for (int trial = 0; trial < 200; ++trial) {
    const int r = uniform_int(rng, 1, 5);
    std::vector<Atom> atoms;
    while (static_cast<int>(atoms.size()) < r) {
      const double t = uniform(rng, -2, 2);
      if (std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return std::abs(a.node - t) >= 0.1; })) {
        atoms.push_back({t, uniform(rng, 0.1, 2)});
      }
    }
    const AtomicMeasure mu(atoms);
    for (const auto& [n, m] : shapes) {
      const int top = std::max(m * (n - 1), 2 * r - 1);
      const auto h = hankel_tensor(moments_of_measure(mu, top), n, m);
      const auto d = strong_hankel_decompose(h, ScalarMode::Float);
      const auto res = verify_decomposition(h, d, 1e-8);
      worst_residual = std::max(worst_residual, res.max_rel);
      ++runs;
      const std::string where = "float measure " + std::to_string(trial) + " (n,m)=(" + std::to_string(n) + "," +
                                std::to_string(m) + ")";
      if (res.max_rel > 1e-8) return {false, where + " residual " + std::to_string(res.max_rel)};
      if (d.atoms.size() != mu.size()) return {false, where + " recovered " + std::to_string(d.atoms.size()) + " atoms"};
      for (std::size_t k = 0; k < mu.size(); ++k) {
        const double dn = std::abs(d.atoms.atoms()[k].node - mu.atoms()[k].node);
        const double dw = std::abs(d.atoms.atoms()[k].weight - mu.atoms()[k].weight);
        worst_atom = std::max({worst_atom, dn, dw});
        if (dn > 1e-6 || dw > 1e-6) return {false, where + " atom " + std::to_string(k) + " off by " + std::to_string(std::max(dn, dw))};
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d decompositions (exact and float), worst relative residual %.3g, worst atom error %.3g",
                runs, worst_residual, worst_atom);
  return {true, buf};
}

Outcome negative_path() {
  const GeneratingVector<Q> v(std::vector<Q>{1, 0, -1, 0, 1});
  const auto r = psd_check(hankel_matrix(v, 3), ScalarMode::Exact);
  if (r.verdict != Verdict::NotPsd) return {false, "verdict " + std::string(to_string(r.verdict))};
  if (r.exact_witness.size() != 3) return {false, "missing exact witness"};
  Q form = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) form += r.exact_witness[i] * v[i + j] * r.exact_witness[j];
  if (form != r.exact_witness_value || form >= 0) return {false, "witness does not re-verify"};
  try {
    (void)strong_hankel_decompose(hankel_tensor(v, 3, 2), ScalarMode::Exact);
    return {false, "decomposition did not refuse"};
  } catch (const PreconditionError&) {
  }
  return {true, "NOT_PSD, x^T H x = " + format_rational(form) + ", decomposition refused"};
}

Outcome augmented_atom() {
  const std::vector<std::pair<int, int>> shapes{{2, 2}, {3, 4}, {4, 3}, {3, 6}, {4, 4}};
  for (const auto& [n, m] : shapes) {
    const int top = m * (n - 1);
    std::vector<Q> v(static_cast<std::size_t>(top + 1), Q(0));
    v.back() = 1;
    const auto h = hankel_tensor(GeneratingVector<Q>(v), n, m);
    const auto d = strong_hankel_decompose(h, ScalarMode::Exact);
    const std::string where = "(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")";
    if (!d.atoms.empty() || d.augmented_c != 1.0) return {false, where + " not a pure augmented atom"};
    const auto dense = densify(h);
    const auto rebuilt = rank_one_sum<double>(d.terms(), m, n);
    for (std::size_t k = 0; k < dense.values().size(); ++k) {
      if (rebuilt.values()[k] != to_double(dense.values()[k])) return {false, where + " reconstruction differs"};
    }
  }
  return {true, "zero atoms and c = 1 for 5 shapes, exact reconstruction"};
}

Outcome matrix_cross_validation() {
  std::mt19937_64 rng(20260106);
  int psd_count = 0, disagreements = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(5);
    if (trial % 2 == 0) {
      std::vector<Atom> atoms;
      const int r = uniform_int(rng, 1, 3);
      for (int k = 0; k < r; ++k) atoms.push_back({uniform(rng, -1.5, 1.5), uniform(rng, 0.1, 2)});
      const auto mv = moments_of_atoms<double>(std::span<const Atom>(atoms), 4);
      v.assign(mv.values().begin(), mv.values().end());
    } else {
      for (auto& x : v) x = uniform(rng, -1, 1);
    }
    const GeneratingVector<double> g(v);
    const auto psd = psd_check(hankel_matrix(g, 3), ScalarMode::Float, 1e-10);
    FitOptions o;
    o.tol = 1e-8;
    o.seed = static_cast<std::uint64_t>(trial);
    const auto fit = cd_fit(densify(hankel_tensor(g, 3, 2)), 3, o);
    psd_count += psd.is_psd() ? 1 : 0;
    disagreements += fit.converged != psd.is_psd() ? 1 : 0;
  }
  const std::string detail = "100 matrices, " + std::to_string(psd_count) + " PSD, " + std::to_string(disagreements) +
                             " disagreements";
  return {disagreements == 0, detail};
}

Outcome gradient_check() {
  std::mt19937_64 rng(20260107);
  const int ms[] = {3, 4, 6};
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = ms[trial % 3];
    std::vector<double> v(static_cast<std::size_t>(2 * m + 1));
    for (auto& x : v) x = uniform(rng, -1, 1);
    const auto a = densify(hankel_tensor(GeneratingVector<double>(v), 3, m));
    std::vector<std::vector<double>> us(static_cast<std::size_t>(uniform_int(rng, 1, 3)), std::vector<double>(3));
    for (auto& u : us)
      for (auto& x : u) x = uniform(rng, -1, 1);
    const auto grad = cd_gradient(a, us);
    const double h = 1e-5;
    double diff = 0, scale = 0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < us.size(); ++k) {
      for (std::size_t i = 0; i < 3; ++i, ++flat) {
        auto plus = us;
        auto minus = us;
        plus[k][i] += h;
        minus[k][i] -= h;
        const double fd = (cd_objective(a, plus) - cd_objective(a, minus)) / (2 * h);
        diff = std::max(diff, std::abs(fd - grad[flat]));
        scale = std::max(scale, std::abs(grad[flat]));
      }
    }
    const double rel = diff / std::max(scale, 1e-300);
    worst = std::max(worst, rel);
    if (rel > 1e-6) return {false, "instance " + std::to_string(trial) + " relative gap " + std::to_string(rel)};
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "20 instances, worst relative gap %.3g", worst);
  return {true, buf};
}

Outcome determinism() {
  RunConfig config;
  config.command = "explore";
  config.seed = 7;
  const auto first = run_command(config);
  const auto second = run_command(config);
  const std::string a = json_io::dump(first.json);
  const std::string b = json_io::dump(second.json);
  if (a != b) return {false, "reports differ"};
  return {true, "preset explore with seed 7, " + std::to_string(a.size()) + " identical bytes"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Hilbert certification", 5, hilbert_certification},
      {2, "polynomial path equality", 30, path_equality},
      {3, "decomposition round trip", 60, decomposition_round_trip},
      {4, "non-strong negative path", 1, negative_path},
      {5, "augmented atom", 1, augmented_atom},
      {6, "matrix-case cross-validation", 120, matrix_cross_validation},
      {7, "gradient check", 30, gradient_check},
      {8, "explore determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
