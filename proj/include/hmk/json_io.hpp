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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmk/decomposition.hpp"
#include "hmk/explorer.hpp"
#include "hmk/psd.hpp"
#include "hmk/scalar.hpp"
#include "hmk/sequence.hpp"
#include "hmk/tensor.hpp"

namespace hmk::json_io {

using Json = nlohmann::json;

/// Objects keep sorted keys; floats print with 17 significant digits.
std::string dump(const Json& doc);

Json parse_text(const std::string& text, const std::string& origin = "<input>");
Json read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// A number as it appeared in the input. `exact` is set for JSON integers
/// and "p/q" strings; non-integer JSON numbers are float-only.
struct InputScalar {
  std::optional<Rational> exact;
  double approx = 0.0;
};

InputScalar parse_scalar(const Json& value);
bool all_exact(std::span<const InputScalar> values);

template <Scalar T>
T realize(const InputScalar& value);

template <Scalar T>
std::vector<T> realize(std::span<const InputScalar> values) {
  std::vector<T> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(realize<T>(v));
  return out;
}

/// Either a bare array or {"generating_vector": [...], "n"?: int}.
struct VectorDoc {
  std::optional<int> n;
  std::vector<InputScalar> values;
};

VectorDoc parse_vector_doc(const Json& doc);

struct SequenceDoc {
  int n = 0;
  std::string kind;  // "table" | "hankel-rule"
  int max_degree = 0;
  std::vector<std::pair<MultiIndex, InputScalar>> entries;
  std::vector<InputScalar> generating_vector;

  std::vector<InputScalar> all_values() const;
};

SequenceDoc parse_sequence_doc(const Json& doc);

template <Scalar T>
MultidimensionalSequence<T> realize(const SequenceDoc& doc);

Json scalar_json(double x);
Json scalar_json(const Rational& x);

template <Scalar T>
Json sequence_to_json(const MultidimensionalSequence<T>& s);

Json to_json(const PsdReport& report);
Json to_json(const StrongHankelCertificate& cert);
Json to_json(const MomentSequenceReport& report);

Json to_json(const VandermondeDecomposition& d, const ResidualReport& residual);
VandermondeDecomposition decomposition_from_json(const Json& doc);

template <Scalar T>
Json tensor_to_json(const SymmetricTensor<T>& a);
SymmetricTensor<double> tensor_from_json_float(const Json& doc);
SymmetricTensor<Rational> tensor_from_json_exact(const Json& doc);

TruncatedFamily family_from_json(const Json& doc);
Json to_json(const TruncatedFamily& family);
Json to_json(const ExplorerReport& report);

}  // namespace hmk::json_io
