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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hmk/errors.hpp"
#include "hmk/scalar.hpp"
#include "hmk/sequence.hpp"

namespace hmk {

/// C(n, k) with overflow checking.
std::uint64_t binomial(int n, int k);

/// m! / (j_1! ... j_{n-1}! (m - |j|)!), built from incremental binomials.
std::uint64_t multinomial_coefficient(int m, const MultiIndex& j);

/// Storage layout of an order-m, dimension-n symmetric tensor: one slot per
/// sorted index tuple i_1 <= ... <= i_m, in lexicographic order. Order 0 is
/// allowed and has a single slot (the scalar).
class SymmetricLayout {
 public:
  /// Shared, cached instance.
  static std::shared_ptr<const SymmetricLayout> get(int order, int dimension);

  SymmetricLayout(int order, int dimension);

  int order() const noexcept { return order_; }
  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return count_; }

  std::span<const int> tuple(std::size_t rank) const {
    return {tuples_.data() + rank * static_cast<std::size_t>(order_),
            static_cast<std::size_t>(order_)};
  }
  /// Number of distinct orderings of the tuple at this rank.
  std::uint64_t multiplicity(std::size_t rank) const { return multiplicity_[rank]; }
  int index_sum(std::size_t rank) const { return sums_[rank]; }

  /// Rank of an arbitrary index tuple (sorted internally).
  std::size_t rank_of(std::span<const int> indices) const;

 private:
  int order_;
  int dimension_;
  std::size_t count_;
  std::vector<int> tuples_;
  std::vector<std::uint64_t> multiplicity_;
  std::vector<int> sums_;
  // completions_[k * n + c] = number of sorted k-tuples with entries in [c, n)
  std::vector<std::size_t> completions_;
};

/// Dense symmetric tensor stored on sorted index tuples only.
template <Scalar T>
class SymmetricTensor {
 public:
  SymmetricTensor(int order, int dimension)
      : layout_(SymmetricLayout::get(order, dimension)), values_(layout_->size(), T(0)) {}

  int order() const noexcept { return layout_->order(); }
  int dimension() const noexcept { return layout_->dimension(); }
  std::size_t size() const noexcept { return values_.size(); }
  const SymmetricLayout& layout() const noexcept { return *layout_; }

  const T& operator[](std::size_t rank) const { return values_[rank]; }
  T& operator[](std::size_t rank) { return values_[rank]; }

  const T& at(std::span<const int> indices) const { return values_[layout_->rank_of(indices)]; }
  void set(std::span<const int> indices, T value) {
    values_[layout_->rank_of(indices)] = std::move(value);
  }

  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }

  bool same_shape(const SymmetricTensor& other) const noexcept {
    return order() == other.order() && dimension() == other.dimension();
  }

  friend bool operator==(const SymmetricTensor& a, const SymmetricTensor& b) {
    return a.same_shape(b) && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const SymmetricLayout> layout_;
  std::vector<T> values_;
};

/// Implicit Hankel tensor a_{i_1..i_m} = v_{i_1+...+i_m}; never stored densely.
template <Scalar T>
class HankelTensor {
 public:
  HankelTensor(GeneratingVector<T> generator, int dimension, int order)
      : generator_(std::move(generator)), dimension_(dimension), order_(order) {
    if (dimension < 2) throw DomainError("tensor dimension must be >= 2");
    if (order < 1) throw DomainError("tensor order must be >= 1");
    if (generator_.top_index() < degree()) {
      throw LengthError("order " + std::to_string(order) + ", dimension " +
                        std::to_string(dimension) + " Hankel tensor needs v_0..v_" +
                        std::to_string(degree()) + " but the generating vector stops at v_" +
                        std::to_string(generator_.top_index()));
    }
  }

  int order() const noexcept { return order_; }
  int dimension() const noexcept { return dimension_; }
  /// Largest index sum, m (n - 1).
  int degree() const noexcept { return order_ * (dimension_ - 1); }
  const GeneratingVector<T>& generator() const noexcept { return generator_; }

  const T& at(std::span<const int> indices) const {
    int sum = 0;
    for (int i : indices) {
      if (i < 0 || i >= dimension_) throw DomainError("tensor index out of range");
      sum += i;
    }
    return generator_[static_cast<std::size_t>(sum)];
  }
  const T& at_index_sum(int sum) const { return generator_[static_cast<std::size_t>(sum)]; }

 private:
  GeneratingVector<T> generator_;
  int dimension_;
  int order_;
};

template <Scalar T>
HankelTensor<T> hankel_tensor(GeneratingVector<T> v, int n, int m) {
  return HankelTensor<T>(std::move(v), n, m);
}

template <Scalar T>
struct RankOneTerm {
  std::vector<T> u;
  T weight{1};
};

/// Entry at a sorted tuple is b_j where j_k counts occurrences of index k
/// (k = 1..n-1); index 0 absorbs the remaining slots.
template <Scalar T>
SymmetricTensor<T> moment_tensor_from_sequence(const MultidimensionalSequence<T>& s, int m) {
  if (m < 1) throw DomainError("tensor order must be >= 1");
  const int n = s.dimension();
  SymmetricTensor<T> out(m, n);
  const auto& layout = out.layout();
  std::vector<int> counts(static_cast<std::size_t>(n - 1));
  for (std::size_t r = 0; r < layout.size(); ++r) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i : layout.tuple(r)) {
      if (i > 0) ++counts[static_cast<std::size_t>(i - 1)];
    }
    out[r] = s.value(MultiIndex(counts));
  }
  return out;
}

template <Scalar T>
SymmetricTensor<T> densify(const HankelTensor<T>& h) {
  SymmetricTensor<T> out(h.order(), h.dimension());
  const auto& layout = out.layout();
  for (std::size_t r = 0; r < layout.size(); ++r) out[r] = h.at_index_sum(layout.index_sum(r));
  return out;
}

/// Entries agree on every equal-index-sum class (exactly, or within
/// tol * max(1, |a|, |b|) for floats).
template <Scalar T>
bool is_hankel(const SymmetricTensor<T>& a, double tol = kDataEqualityTol) {
  const auto& layout = a.layout();
  const int max_sum = a.order() * (a.dimension() - 1);
  std::vector<const T*> representative(static_cast<std::size_t>(max_sum) + 1, nullptr);
  for (std::size_t r = 0; r < layout.size(); ++r) {
    auto& rep = representative[static_cast<std::size_t>(layout.index_sum(r))];
    if (rep == nullptr) {
      rep = &a[r];
    } else if (!values_equal(*rep, a[r], tol)) {
      return false;
    }
  }
  return true;
}

/// Entrywise sum_k w_k u_{k,i_1} ... u_{k,i_m}.
template <Scalar T>
SymmetricTensor<T> rank_one_sum(std::span<const RankOneTerm<T>> terms, int m, int n) {
  SymmetricTensor<T> out(m, n);
  const auto& layout = out.layout();
  for (const auto& term : terms) {
    if (static_cast<int>(term.u.size()) != n) {
      throw DomainError("rank-one term vector length does not match dimension");
    }
    for (std::size_t r = 0; r < layout.size(); ++r) {
      T product = term.weight;
      for (int i : layout.tuple(r)) product *= term.u[static_cast<std::size_t>(i)];
      out[r] += product;
    }
  }
  return out;
}

/// Contracts `times` modes of A against x. The result has order
/// m - times; order 0 holds the scalar A x^m in slot 0.
template <Scalar T>
SymmetricTensor<T> tensor_contract(const SymmetricTensor<T>& a, std::span<const T> x, int times) {
  const int m = a.order();
  const int n = a.dimension();
  if (static_cast<int>(x.size()) != n) throw DomainError("contraction vector has wrong length");
  if (times < 0 || times > m) throw DomainError("contraction count must lie in [0, m]");
  SymmetricTensor<T> out(m - times, n);
  const auto& out_layout = out.layout();
  const auto in_layout = SymmetricLayout::get(times, n);

  // Precompute multiplicity * prod x over each sorted tuple of contracted modes.
  std::vector<T> weights(in_layout->size());
  for (std::size_t s = 0; s < in_layout->size(); ++s) {
    T w = scalar_from_count<T>(in_layout->multiplicity(s));
    for (int i : in_layout->tuple(s)) w *= x[static_cast<std::size_t>(i)];
    weights[s] = std::move(w);
  }
  std::vector<int> merged(static_cast<std::size_t>(m));
  for (std::size_t r = 0; r < out_layout.size(); ++r) {
    const auto kept = out_layout.tuple(r);
    T total(0);
    for (std::size_t s = 0; s < in_layout->size(); ++s) {
      const auto contracted = in_layout->tuple(s);
      std::copy(kept.begin(), kept.end(), merged.begin());
      std::copy(contracted.begin(), contracted.end(), merged.begin() + static_cast<std::ptrdiff_t>(kept.size()));
      total += a.at(merged) * weights[s];
    }
    out[r] = std::move(total);
  }
  return out;
}

/// A x^m
template <Scalar T>
T contract_all(const SymmetricTensor<T>& a, std::span<const T> x) {
  if (static_cast<int>(x.size()) != a.dimension()) {
    throw DomainError("contraction vector has wrong length");
  }
  const auto& layout = a.layout();
  T total(0);
  for (std::size_t r = 0; r < layout.size(); ++r) {
    T term = scalar_from_count<T>(layout.multiplicity(r));
    term *= a[r];
    for (int i : layout.tuple(r)) term *= x[static_cast<std::size_t>(i)];
    total += term;
  }
  return total;
}

/// A x^m evaluated entry-on-demand from the generating vector.
template <Scalar T>
T contract_all(const HankelTensor<T>& h, std::span<const T> x) {
  if (static_cast<int>(x.size()) != h.dimension()) {
    throw DomainError("contraction vector has wrong length");
  }
  const auto layout = SymmetricLayout::get(h.order(), h.dimension());
  T total(0);
  for (std::size_t r = 0; r < layout->size(); ++r) {
    T term = scalar_from_count<T>(layout->multiplicity(r));
    term *= h.at_index_sum(layout->index_sum(r));
    for (int i : layout->tuple(r)) term *= x[static_cast<std::size_t>(i)];
    total += term;
  }
  return total;
}

/// A x^{m-1}: g_i = sum over tuples t of length m-1 of A_{i,t} x_t.
template <Scalar T>
std::vector<T> contract_gradient(const SymmetricTensor<T>& a, std::span<const T> x) {
  const auto reduced = tensor_contract(a, x, a.order() - 1);
  return {reduced.values().begin(), reduced.values().end()};
}

template <Scalar T>
std::vector<T> contract_gradient(const HankelTensor<T>& h, std::span<const T> x) {
  const int n = h.dimension();
  if (static_cast<int>(x.size()) != n) throw DomainError("contraction vector has wrong length");
  const auto layout = SymmetricLayout::get(h.order() - 1, n);
  std::vector<T> g(static_cast<std::size_t>(n), T(0));
  for (std::size_t r = 0; r < layout->size(); ++r) {
    T w = scalar_from_count<T>(layout->multiplicity(r));
    for (int i : layout->tuple(r)) w *= x[static_cast<std::size_t>(i)];
    const int base = layout->index_sum(r);
    for (int i = 0; i < n; ++i) {
      g[static_cast<std::size_t>(i)] += h.at_index_sum(base + i) * w;
    }
  }
  return g;
}

/// Homogeneous form of degree m in x = (x_0, ..., x_{n-1}) summed over
/// |j| <= m with multinomial coefficients.
template <Scalar T>
T polynomial_eval_direct(const MultidimensionalSequence<T>& s, int m, std::span<const T> x) {
  const int n = s.dimension();
  if (static_cast<int>(x.size()) != n) throw DomainError("point has wrong length");
  if (m < 1) throw DomainError("degree must be >= 1");
  T total(0);
  for (const MultiIndex& j : multi_indices_up_to(n, m)) {
    T term = scalar_from_count<T>(multinomial_coefficient(m, j));
    term *= s.value(j);
    term *= ipow(x[0], m - j.total_degree());
    for (int k = 1; k < n; ++k) term *= ipow(x[static_cast<std::size_t>(k)], j[static_cast<std::size_t>(k - 1)]);
    total += term;
  }
  return total;
}

/// Same form via the moment tensor contracted m times.
template <Scalar T>
T polynomial_eval_contracted(const MultidimensionalSequence<T>& s, int m, std::span<const T> x) {
  if (static_cast<int>(x.size()) != s.dimension()) throw DomainError("point has wrong length");
  return contract_all(moment_tensor_from_sequence(s, m), x);
}

template <Scalar T>
struct PolynomialValue {
  T direct;
  T contracted;
};

template <Scalar T>
PolynomialValue<T> polynomial_eval(const MultidimensionalSequence<T>& s, int m,
                                   std::span<const T> x) {
  return {polynomial_eval_direct(s, m, x), polynomial_eval_contracted(s, m, x)};
}

}  // namespace hmk
