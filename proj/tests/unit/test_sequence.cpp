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

#include <algorithm>
#include <random>

#include "hmk/errors.hpp"
#include "hmk/sequence.hpp"
#include "support.hpp"

using namespace hmk;
using namespace hmk::testing;

namespace {

MultidimensionalSequence<Q>::Table consistent_table() {
  MultidimensionalSequence<Q>::Table t;
  // weighted degrees: (0,0)->0 (1,0)->1 (2,0)->2 (0,1)->2 (1,1)->3 (0,2)->4
  t[MultiIndex({0, 0})] = 1;
  t[MultiIndex({1, 0})] = 2;
  t[MultiIndex({2, 0})] = 5;
  t[MultiIndex({0, 1})] = 5;
  t[MultiIndex({1, 1})] = 7;
  t[MultiIndex({0, 2})] = 11;
  return t;
}

}  // namespace

TEST_CASE("weighted degree") {
  CHECK(weighted_degree(MultiIndex({2, 0})) == 2);
  CHECK(weighted_degree(MultiIndex({0, 1})) == 2);
  CHECK(weighted_degree(MultiIndex({1, 1, 1})) == 6);
  CHECK(MultiIndex({1, 1, 1}).dimension() == 4);
}

TEST_CASE("multi-index validation") {
  CHECK_THROWS_AS(MultiIndex({}), DomainError);
  CHECK_THROWS_AS(MultiIndex({1, -1}), DomainError);
}

TEST_CASE("multi-index enumeration covers every index once") {
  const auto all = multi_indices_up_to(4, 3);
  CHECK(all.size() == 20);  // C(3+3, 3)
  auto sorted = all;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  for (const auto& j : multi_indices_of_weight(3, 4, 4)) CHECK(weighted_degree(j) == 4);
  CHECK(multi_indices_of_weight(3, 4, 4).size() == 3);  // (4,0) (2,1) (0,2)
}

TEST_CASE("is_hankel_sequence on a consistent table") {
  const auto s = MultidimensionalSequence<Q>::table(3, 2, consistent_table());
  CHECK(is_hankel_sequence(s, 2).holds);
}

TEST_CASE("is_hankel_sequence reports the first violating pair") {
  auto t = consistent_table();
  t[MultiIndex({0, 1})] = 6;
  const auto r = is_hankel_sequence(MultidimensionalSequence<Q>::table(3, 2, t), 2);
  REQUIRE_FALSE(r.holds);
  CHECK(r.violation->first == MultiIndex({2, 0}));
  CHECK(r.violation->second == MultiIndex({0, 1}));
}

TEST_CASE("is_hankel_sequence on rule-backed sequences") {
  const auto s = sequence_from_generating_vector(qv({1, 2, 3}), 4);
  CHECK(is_hankel_sequence(s, 10).holds);
}

TEST_CASE("is_hankel_sequence needs coverage") {
  auto t = consistent_table();
  t.erase(MultiIndex({1, 1}));
  const auto s = MultidimensionalSequence<Q>::table(3, 2, t);
  CHECK_THROWS_AS(is_hankel_sequence(s, 2), CoverageError);
  CHECK_THROWS_AS(is_hankel_sequence(MultidimensionalSequence<Q>::table(3, 2, consistent_table()), 3),
                  CoverageError);
}

TEST_CASE("is_hankel_sequence is independent of table insertion order") {
  std::mt19937_64 rng(11);
  std::vector<std::pair<MultiIndex, double>> entries;
  for (const auto& j : multi_indices_up_to(4, 3)) entries.emplace_back(j, static_cast<double>(weighted_degree(j)));
  entries[5].second += 1.0;
  std::optional<HankelSequenceCheck> first;
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(entries.begin(), entries.end(), rng);
    MultidimensionalSequence<double>::Table t;
    for (const auto& [j, v] : entries) t.emplace(j, v);
    const auto r = is_hankel_sequence(MultidimensionalSequence<double>::table(4, 3, t), 3);
    CHECK_FALSE(r.holds);
    if (!first) {
      first = r;
    } else {
      CHECK(r.violation == first->violation);
    }
  }
}

TEST_CASE("float equality tolerance for the Hankel condition") {
  MultidimensionalSequence<double>::Table t;
  t[MultiIndex({0})] = 1.0;
  const auto s = MultidimensionalSequence<double>::table(2, 0, t);
  CHECK(is_hankel_sequence(s, 0).holds);
  CHECK(values_equal(1.0, 1.0 + 5e-13, kDataEqualityTol));
  CHECK_FALSE(values_equal(1.0, 1.0 + 5e-12, kDataEqualityTol));
  CHECK(values_equal(1e6, 1e6 * (1 + 5e-13), kDataEqualityTol));
}

TEST_CASE("generating_vector_from_sequence") {
  const auto ones = sequence_from_generating_vector(qv({1, 1, 1, 1, 1, 1, 1}), 3);
  CHECK(generating_vector_from_sequence(ones, 4) == qv({1, 1, 1, 1, 1}));

  MultidimensionalSequence<Q>::Table h;
  for (int k = 0; k <= 3; ++k) h[MultiIndex({k})] = Q(1, k + 1);
  const auto hs = MultidimensionalSequence<Q>::table(2, 3, h);
  CHECK(generating_vector_from_sequence(hs, 3) == hilbert(3));

  const auto table = MultidimensionalSequence<Q>::table(3, 2, consistent_table());
  CHECK(generating_vector_from_sequence(table, 2) == qv({1, 2, 5}));
  CHECK(generating_vector_from_sequence(table, 4) == qv({1, 2, 5, 7, 11}));
}

TEST_CASE("generating_vector_from_sequence rechecks representatives") {
  auto t = consistent_table();
  t[MultiIndex({0, 1})] = 6;
  const auto s = MultidimensionalSequence<Q>::table(3, 2, t);
  CHECK_THROWS_AS(generating_vector_from_sequence(s, 2), InconsistencyError);
  CHECK_THROWS_AS(generating_vector_from_sequence(MultidimensionalSequence<Q>::table(3, 2, consistent_table()), 5),
                  CoverageError);
}

TEST_CASE("sequence_from_generating_vector lookups") {
  CHECK(sequence_from_generating_vector(qv({1, 0, 2}), 3).value(MultiIndex({0, 1})) == 2);
  CHECK(sequence_from_generating_vector(qv({1, 1, 1}), 2).value(MultiIndex({2})) == 1);
  const auto s = sequence_from_generating_vector(qv({1, 2}), 3);
  CHECK_THROWS_AS(s.value(MultiIndex({0, 1})), CoverageError);
  CHECK_THROWS_AS(sequence_from_generating_vector(qv({1}), 1), DomainError);
}

TEST_CASE("round trip through a rule-backed sequence") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Q> values;
    const int top = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int k = 0; k <= top; ++k) values.push_back(small_rational(rng));
    const auto v = qv(values);
    for (int n = 2; n <= 5; ++n) {
      CHECK(generating_vector_from_sequence(sequence_from_generating_vector(v, n), top) == v);
    }
  }
}

TEST_CASE("generating vector invariants") {
  CHECK_THROWS_AS(GeneratingVector<double>({}), LengthError);
  CHECK_THROWS_AS(dv({1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(dv({1.0, 2.0}).at(2), CoverageError);
  CHECK(dv({1, 2, 3}).prefix(2) == dv({1, 2}));
  CHECK_THROWS_AS(dv({1, 2, 3}).prefix(4), LengthError);
}

TEST_CASE("atomic measure normalisation") {
  const AtomicMeasure mu({{1.0, 0.5}, {-1.0, 0.0}, {0.0, 2.0}, {1.0 + 1e-12, 0.5}});
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].node == 0.0);
  CHECK(mu.atoms()[1].weight == doctest::Approx(1.0));
  CHECK(mu.total_mass() == doctest::Approx(3.0));
  CHECK_THROWS_AS(AtomicMeasure({{0.0, -1.0}}), DomainError);
  CHECK_THROWS_AS(AtomicMeasure({{INFINITY, 1.0}}), DomainError);
}

TEST_CASE("pushforward_atoms") {
  auto p = pushforward_atoms(AtomicMeasure({{2.0, 1.0}}), 3);
  REQUIRE(p.size() == 1);
  CHECK(p[0].point == std::vector<double>{2.0, 4.0});
  CHECK(p[0].weight == 1.0);

  p = pushforward_atoms(AtomicMeasure({{0.0, 1.0}}), 4);
  CHECK(p[0].point == std::vector<double>{0.0, 0.0, 0.0});

  p = pushforward_atoms(AtomicMeasure({{1.0, 0.5}, {-1.0, 0.5}}), 3);
  REQUIRE(p.size() == 2);
  CHECK(p[0].point == std::vector<double>{-1.0, 1.0});
  CHECK(p[1].point == std::vector<double>{1.0, 1.0});
  CHECK(p[0].weight == 0.5);
}

TEST_CASE("multidim_moment") {
  const std::vector<PointMass<double>> a{{{2.0, 4.0}, 1.0}};
  CHECK(multidim_moment<double>(a, MultiIndex({1, 1})) == 8.0);
  const std::vector<PointMass<double>> b{{{1.0, 1.0}, 0.5}, {{-1.0, 1.0}, 0.5}};
  CHECK(multidim_moment<double>(b, MultiIndex({2, 0})) == 1.0);
  const std::vector<PointMass<double>> c{{{0.0, 0.0}, 3.0}};
  CHECK(multidim_moment<double>(c, MultiIndex({0, 0})) == 3.0);
}

TEST_CASE("pushforward moments match the generating vector (exact)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BasicAtom<Q>> atoms;
    const int r = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int k = 0; k < r; ++k) atoms.push_back({small_rational(rng), abs(small_rational(rng)) + 1});
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const int top = 8;
    const auto v = moments_of_atoms<Q>(atoms, top);
    const auto masses = pushforward<Q>(atoms, n);
    for (const auto& j : multi_indices_up_to(n, top)) {
      const int w = weighted_degree(j);
      if (w > top) continue;
      CHECK(multidim_moment<Q>(masses, j) == v[static_cast<std::size_t>(w)]);
    }
  }
}

TEST_CASE("pushforward moments match the generating vector (float)") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 3; ++k) atoms.push_back({uniform(rng, -2, 2), uniform(rng, 0.1, 2)});
    const AtomicMeasure mu(atoms);
    const auto v = moments_of_atoms<double>(mu.atoms(), 9);
    const auto masses = pushforward_atoms(mu, 4);
    for (const auto& j : multi_indices_up_to(4, 9)) {
      const int w = weighted_degree(j);
      if (w > 9) continue;
      const double expect = v[static_cast<std::size_t>(w)];
      CHECK(std::abs(multidim_moment<double>(masses, j) - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Q(1, 2));
  CHECK(parse_rational(" -6/4 ") == Q(-3, 2));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("0.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK(format_rational(Q(-3, 2)) == "-3/2");
}
