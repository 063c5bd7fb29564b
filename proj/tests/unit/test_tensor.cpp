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

#include <doctest.h>

#include <cmath>
#include <random>

#include "hmk/errors.hpp"
#include "hmk/tensor.hpp"
#include "support.hpp"

using namespace hmk;
using namespace hmk::testing;

namespace {

// Visits every index tuple in {0..n-1}^m.
template <class F>
void for_each_tuple(int m, int n, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    f(idx);
    int p = m - 1;
    while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == n) idx[static_cast<std::size_t>(p--)] = 0;
    if (p < 0) return;
  }
}

template <Scalar T>
T brute_contract(const SymmetricTensor<T>& a, const std::vector<T>& x) {
  T total(0);
  for_each_tuple(a.order(), a.dimension(), [&](const std::vector<int>& idx) {
    T term = a.at(idx);
    for (int i : idx) term *= x[static_cast<std::size_t>(i)];
    total += term;
  });
  return total;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("binomial and multinomial coefficients") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(60, 30) == 118264581564861424ULL);
  CHECK(binomial(3, 5) == 0);
  CHECK(multinomial_coefficient(2, MultiIndex({1})) == 2);
  CHECK(multinomial_coefficient(3, MultiIndex({1, 1})) == 6);
  CHECK(multinomial_coefficient(4, MultiIndex({2})) == 6);
  CHECK(multinomial_coefficient(6, MultiIndex({1, 2, 3})) == 60);
  CHECK_THROWS_AS(multinomial_coefficient(2, MultiIndex({2, 1})), DomainError);
}

TEST_CASE("symmetric layout") {
  for (int m = 1; m <= 6; ++m) {
    for (int n = 2; n <= 4; ++n) {
      const auto layout = SymmetricLayout::get(m, n);
      CHECK(layout->size() == binomial(n + m - 1, m));
      std::uint64_t total = 0;
      for (std::size_t r = 0; r < layout->size(); ++r) {
        const auto t = layout->tuple(r);
        CHECK(std::is_sorted(t.begin(), t.end()));
        CHECK(layout->rank_of(t) == r);
        total += layout->multiplicity(r);
      }
      CHECK(total == static_cast<std::uint64_t>(std::pow(n, m)));
    }
  }
  const auto l = SymmetricLayout::get(3, 3);
  const std::vector<int> unsorted{2, 0, 1};
  const std::vector<int> sorted{0, 1, 2};
  CHECK(l->rank_of(unsorted) == l->rank_of(sorted));
}

TEST_CASE("moment tensor from a table") {
  MultidimensionalSequence<Q>::Table t;
  t[MultiIndex({0})] = 1;
  t[MultiIndex({1})] = 2;
  t[MultiIndex({2})] = 5;
  const auto a = moment_tensor_from_sequence(MultidimensionalSequence<Q>::table(2, 2, t), 2);
  CHECK(a.at(std::vector<int>{0, 0}) == 1);
  CHECK(a.at(std::vector<int>{0, 1}) == 2);
  CHECK(a.at(std::vector<int>{1, 0}) == 2);
  CHECK(a.at(std::vector<int>{1, 1}) == 5);
}

TEST_CASE("moment tensor from a rule uses the frequency rule") {
  const auto a = moment_tensor_from_sequence(sequence_from_generating_vector(qv({1, 0, 2, 0, 7}), 3), 2);
  CHECK(a.at(std::vector<int>{1, 2}) == 0);
  CHECK(a.at(std::vector<int>{2, 2}) == 7);
  CHECK(a.at(std::vector<int>{0, 2}) == 2);
  const auto ones = moment_tensor_from_sequence(sequence_from_generating_vector(qv(std::vector<Q>(13, 1)), 3), 4);
  for (const auto& x : ones.values()) CHECK(x == 1);
}

TEST_CASE("moment tensor needs coverage") {
  MultidimensionalSequence<Q>::Table t;
  t[MultiIndex({0})] = 1;
  CHECK_THROWS_AS(moment_tensor_from_sequence(MultidimensionalSequence<Q>::table(2, 0, t), 1), CoverageError);
}

TEST_CASE("hankel tensor entries") {
  const auto h = hankel_tensor(dv({0, 1, 2, 3, 4}), 3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(h.at(std::vector<int>{i, j}) == i + j);
  const auto ones = densify(hankel_tensor(dv({1, 1, 1, 1, 1}), 3, 2));
  for (double x : ones.values()) CHECK(x == 1.0);
  CHECK_THROWS_AS(hankel_tensor(dv({1, 1, 1}), 3, 2), LengthError);
  // longer vectors are accepted and the tail is ignored
  CHECK(densify(hankel_tensor(dv({1, 2, 3, 4, 5, 6, 7}), 3, 2)) == densify(hankel_tensor(dv({1, 2, 3, 4, 5}), 3, 2)));
}

TEST_CASE("is_hankel") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(13);
    for (auto& x : v) x = uniform(rng, -1, 1);
    CHECK(is_hankel(densify(hankel_tensor(dv(v), 3, 4))));
  }
  SymmetricTensor<double> a(2, 2);
  a.set(std::vector<int>{0, 1}, 1.0);
  CHECK(is_hankel(a));
  SymmetricTensor<double> b(2, 3);
  b.set(std::vector<int>{0, 2}, 1.0);
  CHECK_FALSE(is_hankel(b));
  SymmetricTensor<Q> c(2, 3);
  c.set(std::vector<int>{0, 2}, Q(1));
  c.set(std::vector<int>{1, 1}, Q(1));
  CHECK(is_hankel(c));
}

TEST_CASE("rank-one sums") {
  const std::vector<RankOneTerm<double>> one{{{1, 1}, 1}};
  const auto ones = rank_one_sum<double>(one, 2, 2);
  for (double x : ones.values()) CHECK(x == 1.0);
  const std::vector<RankOneTerm<double>> two{{{1, 1}, 1}, {{1, -1}, 1}};
  const auto d = rank_one_sum<double>(two, 2, 2);
  CHECK(d.at(std::vector<int>{0, 0}) == 2.0);
  CHECK(d.at(std::vector<int>{0, 1}) == 0.0);
  CHECK(d.at(std::vector<int>{1, 1}) == 2.0);
  const auto zero = rank_one_sum<double>({}, 3, 3);
  for (double x : zero.values()) CHECK(x == 0.0);
}

TEST_CASE("moment-curve rank-one sums are Hankel") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<RankOneTerm<Q>> terms;
    for (int k = 0; k < 3; ++k) {
      const Q t = small_rational(rng);
      terms.push_back({{1, t, t * t, t * t * t}, abs(small_rational(rng))});
    }
    CHECK(is_hankel(rank_one_sum<Q>(terms, 4, 4)));
  }
}

TEST_CASE("tensor contraction") {
  const std::vector<RankOneTerm<double>> one{{{1, 1}, 1}};
  const std::vector<double> x{1, 1};
  CHECK(contract_all(rank_one_sum<double>(one, 2, 2), std::span<const double>(x)) == 4.0);
  const std::vector<RankOneTerm<double>> two{{{1, 1}, 1}, {{1, -1}, 1}};
  const std::vector<double> e0{1, 0};
  const auto g = tensor_contract(rank_one_sum<double>(two, 2, 2), std::span<const double>(e0), 1);
  CHECK(g.order() == 1);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 0.0);
  const auto s = tensor_contract(rank_one_sum<double>(two, 2, 2), std::span<const double>(e0), 2);
  CHECK(s.order() == 0);
  CHECK(s[0] == 2.0);
}

TEST_CASE("contraction of a rank-one term") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    const int m = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<double> u(n), x(n);
    for (auto& z : u) z = uniform(rng, -1, 1);
    for (auto& z : x) z = uniform(rng, -1, 1);
    const double w = uniform(rng, 0, 2);
    const std::vector<RankOneTerm<double>> t{{u, w}};
    const auto a = rank_one_sum<double>(t, m, n);
    double ux = 0;
    for (int i = 0; i < n; ++i) ux += u[i] * x[i];
    CHECK(rel_close(contract_all(a, std::span<const double>(x)), w * std::pow(ux, m), 1e-12));
    for (int times = 0; times <= m; ++times) {
      const auto c = tensor_contract(a, std::span<const double>(x), times);
      const auto& layout = c.layout();
      for (std::size_t r = 0; r < layout.size(); ++r) {
        double expect = w * std::pow(ux, times);
        for (int i : layout.tuple(r)) expect *= u[static_cast<std::size_t>(i)];
        CHECK(std::abs(c[r] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
      }
    }
  }
}

TEST_CASE("contraction linearity over rank-one sums") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<RankOneTerm<double>> terms;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& z : x) z = uniform(rng, -1, 1);
    double expect = 0;
    for (int k = 0; k < 4; ++k) {
      RankOneTerm<double> t{std::vector<double>(static_cast<std::size_t>(n)), uniform(rng, 0, 2)};
      double ux = 0;
      for (int i = 0; i < n; ++i) {
        t.u[static_cast<std::size_t>(i)] = uniform(rng, -1, 1);
        ux += t.u[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      }
      expect += t.weight * std::pow(ux, m);
      terms.push_back(std::move(t));
    }
    const auto a = rank_one_sum<double>(terms, m, n);
    CHECK(rel_close(contract_all(a, std::span<const double>(x)), expect, 1e-12));
    CHECK(rel_close(contract_all(a, std::span<const double>(x)), brute_contract(a, x), 1e-12));
  }
}

TEST_CASE("implicit Hankel contraction matches the dense path") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<Q> v(static_cast<std::size_t>(m * (n - 1) + 1));
    for (auto& z : v) z = small_rational(rng);
    std::vector<Q> x(static_cast<std::size_t>(n));
    for (auto& z : x) z = small_rational(rng);
    const auto h = hankel_tensor(qv(v), n, m);
    const auto a = densify(h);
    CHECK(contract_all(h, std::span<const Q>(x)) == contract_all(a, std::span<const Q>(x)));
    CHECK(contract_all(a, std::span<const Q>(x)) == brute_contract(a, x));
    CHECK(contract_gradient(h, std::span<const Q>(x)) == contract_gradient(a, std::span<const Q>(x)));
    const auto once = tensor_contract(a, std::span<const Q>(x), m - 1);
    CHECK(std::vector<Q>(once.values().begin(), once.values().end()) == contract_gradient(a, std::span<const Q>(x)));
  }
}

TEST_CASE("moment tensor of a rule equals the densified Hankel tensor") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<Q> v(static_cast<std::size_t>(m * (n - 1) + 1 + trial % 3));
    for (auto& z : v) z = small_rational(rng);
    CHECK(moment_tensor_from_sequence(sequence_from_generating_vector(qv(v), n), m) ==
          densify(hankel_tensor(qv(v), n, m)));
  }
}

TEST_CASE("polynomial evaluation examples") {
  const auto s = sequence_from_generating_vector(dv({1, 2, 5}), 2);
  const std::vector<double> x{1, 1};
  const auto v = polynomial_eval(s, 2, std::span<const double>(x));
  CHECK(v.direct == 10.0);
  CHECK(v.contracted == 10.0);

  const auto r = sequence_from_generating_vector(dv({3, 1, 4, 1, 5, 9, 2}), 3);
  const std::vector<double> e0{1, 0, 0};
  CHECK(polynomial_eval(r, 3, std::span<const double>(e0)).direct == 3.0);
  CHECK(polynomial_eval(r, 3, std::span<const double>(e0)).contracted == 3.0);

  for (int n = 2; n <= 4; ++n) {
    for (int m = 1; m <= 5; ++m) {
      const auto c = sequence_from_generating_vector(qv(std::vector<Q>(static_cast<std::size_t>(m * (n - 1) + 1), 1)), n);
      const std::vector<Q> ones(static_cast<std::size_t>(n), Q(1));
      const auto p = polynomial_eval(c, m, std::span<const Q>(ones));
      CHECK(p.direct == ipow(Q(n), m));
      CHECK(p.contracted == ipow(Q(n), m));
    }
  }
}

TEST_CASE("polynomial path equality on random tables") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(1, 6)(rng);
    MultidimensionalSequence<Q>::Table tq;
    MultidimensionalSequence<double>::Table tf;
    for (const auto& j : multi_indices_up_to(n, m)) {
      tq[j] = small_rational(rng);
      tf[j] = uniform(rng, -1, 1);
    }
    std::vector<Q> xq(static_cast<std::size_t>(n));
    std::vector<double> xf(static_cast<std::size_t>(n));
    for (auto& z : xq) z = small_rational(rng);
    for (auto& z : xf) z = uniform(rng, -1, 1);
    const auto pq = polynomial_eval(MultidimensionalSequence<Q>::table(n, m, tq), m, std::span<const Q>(xq));
    CHECK(pq.direct == pq.contracted);
    const auto pf = polynomial_eval(MultidimensionalSequence<double>::table(n, m, tf), m, std::span<const double>(xf));
    CHECK(rel_close(pf.direct, pf.contracted, 1e-12));
  }
}
