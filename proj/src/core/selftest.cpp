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

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hmk/commands.hpp"
#include "hmk/decomposition.hpp"
#include "hmk/errors.hpp"
#include "hmk/explorer.hpp"
#include "hmk/json_io.hpp"
#include "hmk/psd.hpp"
#include "hmk/sequence.hpp"
#include "hmk/tensor.hpp"

namespace hmk {

namespace {

struct Case {
  const char* name;
  std::function<bool()> run;
};

using Q = Rational;

GeneratingVector<Q> hilbert(int top) {
  std::vector<Q> v;
  for (int k = 0; k <= top; ++k) v.emplace_back(1, k + 1);
  return GeneratingVector<Q>(std::move(v));
}

GeneratingVector<double> dv(std::vector<double> v) { return GeneratingVector<double>(std::move(v)); }
GeneratingVector<Q> qv(std::vector<Q> v) { return GeneratingVector<Q>(std::move(v)); }

template <class E, class F>
bool throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

bool near(double a, double b, double tol = 1e-10) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::vector<Case> corpus() {
  return {
      {"weighted degree (1,1,1) = 6", [] { return weighted_degree(MultiIndex({1, 1, 1})) == 6; }},
      {"Hilbert generating vector from sequence",
       [] {
         const auto s = sequence_from_generating_vector(hilbert(3), 2);
         return generating_vector_from_sequence(s, 3) == hilbert(3);
       }},
      {"rule query beyond coverage is an error",
       [] {
         const auto s = sequence_from_generating_vector(qv({1, 2}), 3);
         return throws<CoverageError>([&] { (void)s.value(MultiIndex({0, 1})); });
       }},
      {"table Hankel violation reported as ((2,0),(0,1))",
       [] {
         MultidimensionalSequence<Q>::Table t;
         t[MultiIndex({0, 0})] = 1;
         t[MultiIndex({1, 0})] = 2;
         t[MultiIndex({2, 0})] = 5;
         t[MultiIndex({0, 1})] = 6;
         t[MultiIndex({1, 1})] = 0;
         t[MultiIndex({0, 2})] = 0;
         const auto r = is_hankel_sequence(MultidimensionalSequence<Q>::table(3, 2, t), 2);
         return !r.holds && r.violation->first == MultiIndex({2, 0}) && r.violation->second == MultiIndex({0, 1});
       }},
      {"pushforward moment b_(1,1) of atom (2,1) is 8",
       [] {
         const auto pts = pushforward_atoms(AtomicMeasure({{2.0, 1.0}}), 3);
         return multidim_moment<double>(pts, MultiIndex({1, 1})) == 8.0;
       }},
      {"multinomial m=3 j=(1,1) is 6", [] { return multinomial_coefficient(3, MultiIndex({1, 1})) == 6; }},
      {"hankel tensor needs L >= m(n-1)",
       [] { return throws<LengthError>([] { (void)hankel_tensor(dv({1, 1, 1}), 3, 2); }); }},
      {"polynomial b=(1,2,5) at (1,1) is 10 on both paths",
       [] {
         const auto s = sequence_from_generating_vector(qv({1, 2, 5}), 2);
         const std::vector<Q> x{1, 1};
         const auto v = polynomial_eval(s, 2, std::span<const Q>(x));
         return v.direct == 10 && v.contracted == 10;
       }},
      {"constant sequence at all-ones gives n^m",
       [] {
         const auto s = sequence_from_generating_vector(qv(std::vector<Q>(7, Q(1))), 3);
         const std::vector<Q> x{1, 1, 1};
         const auto v = polynomial_eval(s, 3, std::span<const Q>(x));
         return v.direct == 27 && v.contracted == 27;
       }},
      {"rank-one sum (1,1) + (1,-1) is diag(2,2)",
       [] {
         const std::vector<RankOneTerm<Q>> terms{{{1, 1}, 1}, {{1, -1}, 1}};
         const auto a = rank_one_sum<Q>(terms, 2, 2);
         return a[0] == 2 && a[1] == 0 && a[2] == 2;
       }},
      {"H_2 of (1,0,-1) is NOT_PSD with witness value -1",
       [] {
         const auto r = psd_check(hankel_matrix(qv({1, 0, -1}), 2), ScalarMode::Exact);
         return r.verdict == Verdict::NotPsd && r.exact_witness_value == -1;
       }},
      {"Hilbert H_3 leading minors 1, 1/12, 1/2160",
       [] {
         const auto r = psd_check(hankel_matrix(hilbert(4), 3), ScalarMode::Exact);
         return r.verdict == Verdict::Psd && r.rank == 3 && r.leading_minors.size() == 3 && r.leading_minors[0] == 1 &&
                r.leading_minors[1] == Q(1, 12) && r.leading_minors[2] == Q(1, 2160);
       }},
      {"Hilbert L=8, n=3, m=4 is strong Hankel with rank 5",
       [] {
         const auto c = strong_hankel_check(hilbert(8), 3, 4, ScalarMode::Exact);
         return c.valid && c.report.rank == 5 && c.report.p == 5;
       }},
      {"(2,0,2,0,2,0) is consistent at P_max=3",
       [] { return moment_sequence_check(qv({2, 0, 2, 0, 2, 0}), 3, ScalarMode::Exact).consistent; }},
      {"(1,0,0,1) is consistent at P_max=2",
       [] { return moment_sequence_check(qv({1, 0, 0, 1}), 2, ScalarMode::Exact).consistent; }},
      {"Jacobi matrix of (2,0,2,0)",
       [] {
         const auto j = jacobi_from_moments(qv({2, 0, 2, 0}), 2, ScalarMode::Exact);
         return j.size() == 2 && near(j.diagonal[0], 0) && near(j.diagonal[1], 0) && near(j.off_diagonal[0], 1) &&
                j.mass == 2.0;
       }},
      {"Gauss quadrature a=(0,0), b=(1), mass 2",
       [] {
         const auto mu = gauss_quadrature({{0, 0}, {1}, 2});
         return mu.size() == 2 && near(mu.atoms()[0].node, -1) && near(mu.atoms()[1].node, 1) &&
                near(mu.atoms()[0].weight, 1) && near(mu.atoms()[1].weight, 1);
       }},
      {"two-atom decomposition n=3 m=4",
       [] {
         const auto h = hankel_tensor(qv({2, 0, 2, 0, 2, 0, 2, 0, 2}), 3, 4);
         const auto d = strong_hankel_decompose(h, ScalarMode::Exact);
         return d.atoms.size() == 2 && near(d.atoms.atoms()[0].node, -1) && near(d.atoms.atoms()[1].node, 1) &&
                d.augmented_c == 0.0 && verify_decomposition(h, d, 1e-10).pass;
       }},
      {"augmented atom only: v_2 = 1, n=2, m=2",
       [] {
         const auto h = hankel_tensor(qv({0, 0, 1}), 2, 2);
         const auto d = strong_hankel_decompose(h, ScalarMode::Exact);
         return d.atoms.empty() && d.augmented_c == 1.0 && verify_decomposition(h, d, 0.0).max_abs == 0.0;
       }},
      {"decomposition refuses (1,0,-1,0,1)",
       [] {
         return throws<PreconditionError>(
             [] { (void)strong_hankel_decompose(hankel_tensor(qv({1, 0, -1, 0, 1}), 3, 2), ScalarMode::Exact); });
       }},
      {"rank-one fit of (1,1,1)^4",
       [] {
         const std::vector<RankOneTerm<double>> t{{{1, 1, 1}, 1}};
         FitOptions o;
         return cd_fit(rank_one_sum<double>(t, 4, 3), 1, o).residual <= 1e-10;
       }},
      {"truncated family {0,6,12} with 3 middle values",
       [] {
         TruncatedFamily f;
         f.n = 3;
         f.m_max = 6;
         f.pattern = {0, 6, 12};
         f.grids = {{1}, {-1, 0, 1}, {1}};
         return truncated_vectors(f).size() == 3;
       }},
  };
}

}  // namespace

CommandOutcome run_selftest() {
  json_io::Json cases = json_io::Json::array();
  int failed = 0;
  CommandOutcome out;
  for (const auto& c : corpus()) {
    bool pass = false;
    try {
      pass = c.run();
    } catch (const std::exception& e) {
      out.details.push_back(std::string(c.name) + ": threw " + e.what());
    }
    failed += pass ? 0 : 1;
    out.details.push_back(std::string(pass ? "pass  " : "FAIL  ") + c.name);
    cases.push_back({{"name", c.name}, {"pass", pass}});
  }
  json_io::Json doc;
  doc["config"] = {{"command", "selftest"}};
  doc["cases"] = std::move(cases);
  doc["failed"] = failed;
  doc["passed"] = static_cast<int>(doc["cases"].size()) - failed;
  out.exit_code = failed == 0 ? 0 : 1;
  out.summary = std::to_string(doc["passed"].get<int>()) + " passed, " + std::to_string(failed) +
                " failed";
  out.json = json_io::dump(doc);
  return out;
}

}  // namespace hmk
