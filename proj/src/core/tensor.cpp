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

#include "hmk/tensor.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <mutex>
#include <utility>

namespace hmk {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("integer overflow in combinatorial count");
  return out;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    const auto numerator = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    result = checked_mul(result / g, numerator / (static_cast<std::uint64_t>(i) / g));
  }
  return result;
}

std::uint64_t multinomial_coefficient(int m, const MultiIndex& j) {
  if (m < 0) throw DomainError("multinomial order must be >= 0");
  if (j.total_degree() > m) {
    throw DomainError("multi-index " + to_string(j) + " has total degree above " + std::to_string(m));
  }
  std::uint64_t result = 1;
  int remaining = m;
  for (int part : j.entries()) {
    result = checked_mul(result, binomial(remaining, part));
    remaining -= part;
  }
  return result;
}

std::shared_ptr<const SymmetricLayout> SymmetricLayout::get(int order, int dimension) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SymmetricLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{order, dimension}];
  if (!slot) slot = std::make_shared<const SymmetricLayout>(order, dimension);
  return slot;
}

SymmetricLayout::SymmetricLayout(int order, int dimension) : order_(order), dimension_(dimension) {
  if (order < 0) throw DomainError("tensor order must be >= 0");
  if (dimension < 1) throw DomainError("tensor dimension must be >= 1");
  const std::uint64_t count = binomial(dimension + order - 1, order);
  count_ = static_cast<std::size_t>(order == 0 ? 1 : count);
  tuples_.reserve(count_ * static_cast<std::size_t>(order));
  multiplicity_.reserve(count_);
  sums_.reserve(count_);

  completions_.resize(static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(dimension));
  for (int k = 0; k <= order; ++k) {
    for (int c = 0; c < dimension; ++c) {
      completions_[static_cast<std::size_t>(k) * static_cast<std::size_t>(dimension) +
                   static_cast<std::size_t>(c)] =
          static_cast<std::size_t>(binomial(dimension - c + k - 1, k));
    }
  }

  std::vector<int> current(static_cast<std::size_t>(order), 0);
  std::vector<int> counts(static_cast<std::size_t>(dimension));
  for (std::size_t r = 0; r < count_; ++r) {
    tuples_.insert(tuples_.end(), current.begin(), current.end());
    std::fill(counts.begin(), counts.end(), 0);
    int sum = 0;
    for (int i : current) {
      ++counts[static_cast<std::size_t>(i)];
      sum += i;
    }
    // m! / prod c_i! as a product of binomials
    std::uint64_t mult = 1;
    int remaining = order;
    for (int c : counts) {
      mult = checked_mul(mult, binomial(remaining, c));
      remaining -= c;
    }
    multiplicity_.push_back(mult);
    sums_.push_back(sum);

    // odometer step to the next sorted tuple
    int p = order - 1;
    while (p >= 0 && current[static_cast<std::size_t>(p)] == dimension - 1) --p;
    if (p < 0) break;
    const int next = current[static_cast<std::size_t>(p)] + 1;
    for (int q = p; q < order; ++q) current[static_cast<std::size_t>(q)] = next;
  }
}

std::size_t SymmetricLayout::rank_of(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != order_) {
    throw DomainError("index tuple has length " + std::to_string(indices.size()) +
                      ", tensor order is " + std::to_string(order_));
  }
  int sorted_buffer[16];
  std::vector<int> heap_buffer;
  int* sorted = sorted_buffer;
  if (indices.size() > 16) {
    heap_buffer.resize(indices.size());
    sorted = heap_buffer.data();
  }
  std::copy(indices.begin(), indices.end(), sorted);
  std::sort(sorted, sorted + indices.size());
  // Tuples with a smaller value at position p (given equal prefix) precede
  // this one; for each such value c there are C(n - c + k - 1, k) completions
  // of the remaining k positions with entries >= c.
  std::size_t rank = 0;
  int previous = 0;
  for (int p = 0; p < order_; ++p) {
    const int value = sorted[p];
    if (value < 0 || value >= dimension_) throw DomainError("tensor index out of range");
    const int k = order_ - p - 1;
    for (int c = previous; c < value; ++c) {
      rank += completions_[static_cast<std::size_t>(k) * static_cast<std::size_t>(dimension_) +
                           static_cast<std::size_t>(c)];
    }
    previous = value;
  }
  return rank;
}

}  // namespace hmk
