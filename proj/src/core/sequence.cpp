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

#include "hmk/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace hmk {

std::string_view to_string(ScalarMode mode) noexcept {
  return mode == ScalarMode::Exact ? "exact" : "float";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ParseError("empty rational literal");
  const auto slash = s.find('/');
  auto valid_integer = [](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t start = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) start = 1;
    if (start == part.size()) return false;
    return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(start), part.end(),
                       [](unsigned char c) { return std::isdigit(c); });
  };
  std::string numerator = s.substr(0, slash);
  std::string denominator = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_integer(numerator, true) || !valid_integer(denominator, false)) {
    throw ParseError("malformed rational literal '" + std::string(text) + "'");
  }
  if (numerator[0] == '+') numerator.erase(0, 1);
  mpz_class p(numerator, 10);
  mpz_class q(denominator, 10);
  if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& x) { return x.get_str(10); }

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("multi-index needs at least one entry (n >= 2)");
  for (int e : entries_) {
    if (e < 0) throw DomainError("multi-index entries must be nonnegative");
  }
}

int MultiIndex::total_degree() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), 0);
}

int weighted_degree(const MultiIndex& j) noexcept {
  int w = 0;
  const auto e = j.entries();
  for (std::size_t k = 0; k < e.size(); ++k) w += static_cast<int>(k + 1) * e[k];
  return w;
}

std::string to_string(const MultiIndex& j) {
  std::string out = "(";
  const auto e = j.entries();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(e[k]);
  }
  return out + ")";
}

namespace {

// Depth-first, largest value first at each position => lexicographically
// descending output.
void enumerate(std::vector<int>& current, std::size_t position, int remaining_total,
               int remaining_weight, bool weight_constrained, std::vector<MultiIndex>& out) {
  if (position == current.size()) {
    if (!weight_constrained || remaining_weight == 0) out.emplace_back(current);
    return;
  }
  const int step = static_cast<int>(position) + 1;
  int hi = remaining_total;
  if (weight_constrained) hi = std::min(hi, remaining_weight / step);
  for (int value = hi; value >= 0; --value) {
    current[position] = value;
    enumerate(current, position + 1, remaining_total - value,
              remaining_weight - step * value, weight_constrained, out);
  }
  current[position] = 0;
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(int n, int max_total) {
  if (n < 2) throw DomainError("dimension must be >= 2");
  std::vector<MultiIndex> out;
  if (max_total < 0) return out;
  std::vector<int> current(static_cast<std::size_t>(n - 1), 0);
  enumerate(current, 0, max_total, 0, false, out);
  return out;
}

std::vector<MultiIndex> multi_indices_of_weight(int n, int weight, int max_total) {
  if (n < 2) throw DomainError("dimension must be >= 2");
  std::vector<MultiIndex> out;
  if (max_total < 0 || weight < 0) return out;
  std::vector<int> current(static_cast<std::size_t>(n - 1), 0);
  enumerate(current, 0, max_total, weight, true, out);
  return out;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, double separation) {
  double max_abs_node = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.node) || !std::isfinite(a.weight)) {
      throw DomainError("atom node and weight must be finite");
    }
    if (a.weight < 0.0) throw DomainError("atom weights must be nonnegative");
    max_abs_node = std::max(max_abs_node, std::abs(a.node));
  }
  std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.node < b.node; });
  const double merge_distance = separation * (1.0 + max_abs_node);
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && a.node - atoms_.back().node < merge_distance) {
      Atom& last = atoms_.back();
      const double w = last.weight + a.weight;
      last.node = (last.node * last.weight + a.node * a.weight) / w;
      last.weight = w;
    } else {
      atoms_.push_back(a);
    }
  }
}

double AtomicMeasure::total_mass() const noexcept {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.weight;
  return total;
}

}  // namespace hmk
