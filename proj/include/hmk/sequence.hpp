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

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hmk/errors.hpp"
#include "hmk/scalar.hpp"

namespace hmk {

/// Exponent tuple (j_1, ..., j_{n-1}) addressing one entry of an
/// n-dimensional sequence. The ambient dimension is entries().size() + 1.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> entries);

  int dimension() const noexcept { return static_cast<int>(entries_.size()) + 1; }
  std::span<const int> entries() const noexcept { return entries_; }
  int operator[](std::size_t k) const { return entries_[k]; }
  int total_degree() const noexcept;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// j_1 + 2 j_2 + ... + (n-1) j_{n-1}
int weighted_degree(const MultiIndex& j) noexcept;

std::string to_string(const MultiIndex& j);

/// All multi-indices of dimension n with total degree <= max_total, in
/// lexicographically descending order. Within a weighted-degree class the
/// first element is (k, 0, ..., 0) whenever k <= max_total.
std::vector<MultiIndex> multi_indices_up_to(int n, int max_total);

/// Multi-indices of dimension n with the given weighted degree and total
/// degree <= max_total, lexicographically descending.
std::vector<MultiIndex> multi_indices_of_weight(int n, int weight, int max_total);

/// Finite truncation v_0..v_L of a one-dimensional generating sequence.
template <Scalar T>
class GeneratingVector {
 public:
  explicit GeneratingVector(std::vector<T> values) : values_(std::move(values)) {
    if (values_.empty()) throw LengthError("generating vector must have at least one entry");
    for (const T& x : values_) {
      if (!is_finite(x)) throw DomainError("generating vector entries must be finite");
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  /// L, the largest available index.
  int top_index() const noexcept { return static_cast<int>(values_.size()) - 1; }

  const T& operator[](std::size_t k) const { return values_[k]; }
  const T& at(std::size_t k) const {
    if (k >= values_.size()) {
      throw CoverageError("generating vector index " + std::to_string(k) +
                          " exceeds top index " + std::to_string(top_index()));
    }
    return values_[k];
  }
  std::span<const T> values() const noexcept { return values_; }

  GeneratingVector prefix(std::size_t count) const {
    if (count == 0 || count > values_.size()) {
      throw LengthError("prefix of length " + std::to_string(count) +
                        " requested from generating vector of length " +
                        std::to_string(values_.size()));
    }
    return GeneratingVector(std::vector<T>(values_.begin(), values_.begin() + count));
  }

  friend bool operator==(const GeneratingVector&, const GeneratingVector&) = default;

 private:
  std::vector<T> values_;
};

template <Scalar To, Scalar From>
GeneratingVector<To> convert(const GeneratingVector<From>& v) {
  std::vector<To> out;
  out.reserve(v.size());
  for (const From& x : v.values()) out.push_back(scalar_from<To>(x));
  return GeneratingVector<To>(std::move(out));
}

/// A multidimensional sequence b_j, backed either by an explicit finite
/// table (declared coverage in total degree) or by a generating vector
/// through b_j = v_{weighted_degree(j)}.
template <Scalar T>
class MultidimensionalSequence {
 public:
  using Table = std::map<MultiIndex, T>;

  static MultidimensionalSequence table(int n, int max_degree, Table entries) {
    if (n < 2) throw DomainError("sequence dimension must be >= 2");
    if (max_degree < 0) throw DomainError("table max_degree must be >= 0");
    for (const auto& [j, value] : entries) {
      if (j.dimension() != n) {
        throw DomainError("multi-index " + to_string(j) + " does not have dimension " +
                          std::to_string(n));
      }
      if (j.total_degree() > max_degree) {
        throw DomainError("multi-index " + to_string(j) + " exceeds declared max_degree " +
                          std::to_string(max_degree));
      }
      if (!is_finite(value)) throw DomainError("table values must be finite");
    }
    return MultidimensionalSequence(n, TableBacking{max_degree, std::move(entries)});
  }

  static MultidimensionalSequence hankel_rule(GeneratingVector<T> v, int n) {
    if (n < 2) throw DomainError("sequence dimension must be >= 2");
    return MultidimensionalSequence(n, std::move(v));
  }

  int dimension() const noexcept { return n_; }
  bool is_rule_backed() const noexcept {
    return std::holds_alternative<GeneratingVector<T>>(backing_);
  }

  /// Table: declared max total degree. Rule: every j with |j| <= L is
  /// covered iff weighted_degree(j) <= L, so L is returned for both.
  int coverage_degree() const noexcept {
    if (const auto* t = std::get_if<TableBacking>(&backing_)) return t->max_degree;
    return std::get<GeneratingVector<T>>(backing_).top_index();
  }

  T value(const MultiIndex& j) const {
    if (j.dimension() != n_) {
      throw DomainError("multi-index " + to_string(j) + " does not match dimension " +
                        std::to_string(n_));
    }
    if (const auto* t = std::get_if<TableBacking>(&backing_)) {
      if (j.total_degree() > t->max_degree) {
        throw CoverageError("multi-index " + to_string(j) + " beyond declared max_degree " +
                            std::to_string(t->max_degree));
      }
      auto it = t->entries.find(j);
      if (it == t->entries.end()) {
        throw CoverageError("table lacks entry for multi-index " + to_string(j));
      }
      return it->second;
    }
    const auto& v = std::get<GeneratingVector<T>>(backing_);
    const int w = weighted_degree(j);
    if (w > v.top_index()) {
      throw CoverageError("multi-index " + to_string(j) + " has weighted degree " +
                          std::to_string(w) + " beyond generating vector top index " +
                          std::to_string(v.top_index()));
    }
    return v[static_cast<std::size_t>(w)];
  }

  const GeneratingVector<T>& generator() const {
    if (const auto* v = std::get_if<GeneratingVector<T>>(&backing_)) return *v;
    throw DomainError("table-backed sequence has no generating vector");
  }

  const Table& entries() const {
    if (const auto* t = std::get_if<TableBacking>(&backing_)) return t->entries;
    throw DomainError("rule-backed sequence has no table");
  }

 private:
  struct TableBacking {
    int max_degree;
    Table entries;
  };

  MultidimensionalSequence(int n, std::variant<TableBacking, GeneratingVector<T>> backing)
      : n_(n), backing_(std::move(backing)) {}

  int n_;
  std::variant<TableBacking, GeneratingVector<T>> backing_;
};

struct HankelSequenceCheck {
  bool holds = true;
  /// (class representative, offending multi-index) for the first violation.
  std::optional<std::pair<MultiIndex, MultiIndex>> violation;
};

/// Checks that table values depend only on the weighted degree, over all
/// multi-indices of total degree <= max_total_degree. Enumeration is
/// independent of the table's storage order.
template <Scalar T>
HankelSequenceCheck is_hankel_sequence(const MultidimensionalSequence<T>& s,
                                       int max_total_degree) {
  if (s.is_rule_backed()) return {};
  if (max_total_degree > s.coverage_degree()) {
    throw CoverageError("table declares max_degree " + std::to_string(s.coverage_degree()) +
                        " but degree " + std::to_string(max_total_degree) + " was requested");
  }
  std::map<int, std::pair<MultiIndex, T>> representatives;
  for (const MultiIndex& j : multi_indices_up_to(s.dimension(), max_total_degree)) {
    T value = s.value(j);
    const int w = weighted_degree(j);
    auto it = representatives.find(w);
    if (it == representatives.end()) {
      representatives.emplace(w, std::make_pair(j, std::move(value)));
    } else if (!values_equal(it->second.second, value, kDataEqualityTol)) {
      return {false, std::make_pair(it->second.first, j)};
    }
  }
  return {};
}

/// Reads v_k = b_j off any j of weighted degree k. Every representative that
/// the table covers is compared against the first one.
template <Scalar T>
GeneratingVector<T> generating_vector_from_sequence(const MultidimensionalSequence<T>& s,
                                                    int top_index) {
  if (top_index < 0) throw DomainError("generating vector top index must be >= 0");
  if (s.is_rule_backed()) {
    return s.generator().prefix(static_cast<std::size_t>(top_index) + 1);
  }
  std::vector<T> values;
  values.reserve(static_cast<std::size_t>(top_index) + 1);
  for (int k = 0; k <= top_index; ++k) {
    const auto reps = multi_indices_of_weight(s.dimension(), k, s.coverage_degree());
    if (reps.empty()) {
      throw CoverageError("no multi-index of weighted degree " + std::to_string(k) +
                          " within declared max_degree " +
                          std::to_string(s.coverage_degree()));
    }
    T first = s.value(reps.front());
    for (std::size_t r = 1; r < reps.size(); ++r) {
      if (!values_equal(first, s.value(reps[r]), kDataEqualityTol)) {
        throw InconsistencyError("representatives " + to_string(reps.front()) + " and " +
                                 to_string(reps[r]) + " of weighted degree " +
                                 std::to_string(k) + " disagree");
      }
    }
    values.push_back(std::move(first));
  }
  return GeneratingVector<T>(std::move(values));
}

template <Scalar T>
MultidimensionalSequence<T> sequence_from_generating_vector(GeneratingVector<T> v, int n) {
  return MultidimensionalSequence<T>::hankel_rule(std::move(v), n);
}

template <Scalar T>
struct BasicAtom {
  T node;
  T weight;
};

using Atom = BasicAtom<double>;

/// Finitely supported nonnegative measure on the real line. Zero weights are
/// dropped, nodes are sorted ascending, and nodes closer than
/// separation * (1 + max|t|) are merged (weights add, node becomes the
/// weighted mean).
class AtomicMeasure {
 public:
  static constexpr double kDefaultSeparation = 1e-8;

  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms, double separation = kDefaultSeparation);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_mass() const noexcept;

 private:
  std::vector<Atom> atoms_;
};

template <Scalar T>
struct PointMass {
  std::vector<T> point;
  T weight;
};

/// Moment-curve pushforward t -> (t, t^2, ..., t^{n-1}).
template <Scalar T>
std::vector<PointMass<T>> pushforward(std::span<const BasicAtom<T>> atoms, int n) {
  if (n < 2) throw DomainError("dimension must be >= 2");
  std::vector<PointMass<T>> out;
  out.reserve(atoms.size());
  for (const auto& atom : atoms) {
    PointMass<T> pm{std::vector<T>(static_cast<std::size_t>(n - 1)), atom.weight};
    T power = atom.node;
    for (int k = 0; k < n - 1; ++k) {
      pm.point[static_cast<std::size_t>(k)] = power;
      power *= atom.node;
    }
    out.push_back(std::move(pm));
  }
  return out;
}

inline std::vector<PointMass<double>> pushforward_atoms(const AtomicMeasure& mu, int n) {
  return pushforward<double>(mu.atoms(), n);
}

/// sum over atoms of w * prod_k p_k^{j_k}
template <Scalar T>
T multidim_moment(std::span<const PointMass<T>> masses, const MultiIndex& j) {
  T total(0);
  for (const auto& pm : masses) {
    if (static_cast<int>(pm.point.size()) + 1 != j.dimension()) {
      throw DomainError("multi-index dimension does not match point dimension");
    }
    T term = pm.weight;
    for (std::size_t k = 0; k < pm.point.size(); ++k) term *= ipow(pm.point[k], j[k]);
    total += term;
  }
  return total;
}

/// v_k = sum w t^k for k = 0..K
template <Scalar T>
GeneratingVector<T> moments_of_atoms(std::span<const BasicAtom<T>> atoms, int top_index) {
  if (top_index < 0) throw DomainError("moment count must be >= 0");
  std::vector<T> v(static_cast<std::size_t>(top_index) + 1, T(0));
  for (const auto& atom : atoms) {
    T power = atom.weight;
    for (auto& vk : v) {
      vk += power;
      power *= atom.node;
    }
  }
  return GeneratingVector<T>(std::move(v));
}

}  // namespace hmk
