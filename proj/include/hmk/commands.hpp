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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hmk {

enum class ModeRequest { Auto, Float, Exact };

struct RunConfig {
  std::string command;  // check | decompose | eval | explore | selftest
  std::string vector_path;
  std::string sequence_path;
  std::string family_path;
  std::string tensor_out_path;
  std::string out_path;
  ModeRequest mode = ModeRequest::Auto;
  std::optional<double> tol;
  std::optional<int> p_max;
  std::optional<int> m;
  std::optional<int> n;
  std::vector<int> m_list;
  std::vector<std::string> x;
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_iterations = 500;
  double fit_tol = 1e-8;
  std::optional<int> preset_m_max;
};

struct CommandOutcome {
  int exit_code = 0;
  std::string json;                 // report document (dumped)
  std::string summary;              // one line for humans
  std::vector<std::string> details; // extra lines at debug verbosity
  std::string tensor_json;          // decompose --tensor-out payload
};

/// Runs one command. Malformed input and numerical trouble surface as
/// hmk::Error subclasses; verdicts are reported through exit_code.
CommandOutcome run_command(const RunConfig& config);

CommandOutcome run_selftest();

}  // namespace hmk
