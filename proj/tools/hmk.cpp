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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "hmk/hmk.h"

namespace {

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("HMK_LOG");
  if (!env) return LogLevel::Info;
  const std::string v(env);
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

int exit_code_for(hmk_status status) {
  switch (status) {
    case HMK_OK:
      return 0;
    case HMK_INCONSISTENT:
    case HMK_PRECONDITION:
      return 1;
    case HMK_INVALID_ARGUMENT:
    case HMK_PARSE:
    case HMK_COVERAGE:
    case HMK_LENGTH:
      return 2;
    case HMK_NUMERICAL:
    case HMK_INTERNAL:
      return 3;
  }
  return 3;
}

bool write_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << text;
    out.flush();
    if (!out) return false;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

struct Options {
  std::string vector, sequence, family, tensor_out, out, mode = "auto", tol, pmax, m, n, m_list, seed = "0";
  std::string restarts, max_iter, fit_tol, m_max;
  std::vector<std::string> x;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "float, exact or auto")->check(CLI::IsMember({"float", "exact", "auto"}));
  cmd->add_option("--tol", o.tol, "tolerance");
  cmd->add_option("--pmax", o.pmax, "largest Hankel matrix size");
  cmd->add_option("--m", o.m, "tensor order");
  cmd->add_option("--n", o.n, "tensor dimension");
  cmd->add_option("--seed", o.seed, "root seed");
  cmd->add_option("--out", o.out, "output JSON path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hankel moment toolkit"};
  app.require_subcommand(0, 1);
  bool selftest_flag = false;
  app.add_flag("--selftest", selftest_flag, "run the built-in oracle corpus");
  Options o;

  auto* check = app.add_subcommand("check", "certify PSD Hankel matrices of a vector or sequence");
  check->add_option("--vector", o.vector, "generating vector JSON");
  check->add_option("--sequence", o.sequence, "sequence JSON");
  add_common(check, o);

  auto* decompose = app.add_subcommand("decompose", "sum-of-powers decomposition of a strong Hankel tensor");
  decompose->add_option("--vector", o.vector, "generating vector JSON")->required();
  decompose->add_option("--tensor-out", o.tensor_out, "write the dense tensor JSON here");
  add_common(decompose, o);

  auto* eval = app.add_subcommand("eval", "evaluate the homogeneous form of a sequence");
  eval->add_option("--sequence", o.sequence, "sequence JSON")->required();
  eval->add_option("--x", o.x, "point (x_0 first), comma separated or repeated")->delimiter(',')->required();
  add_common(eval, o);

  auto* explore = app.add_subcommand("explore", "search truncated families for non-strong decomposable tensors");
  explore->add_option("--family", o.family, "family JSON (default: preset)");
  explore->add_option("--m-list", o.m_list, "orders to fit, comma separated");
  explore->add_option("--m-max", o.m_max, "preset family m_max");
  explore->add_option("--restarts", o.restarts, "fit restarts");
  explore->add_option("--max-iter", o.max_iter, "fit iterations per restart");
  explore->add_option("--fit-tol", o.fit_tol, "relative fit tolerance");
  add_common(explore, o);

  auto* selftest = app.add_subcommand("selftest", "run the built-in oracle corpus");
  add_common(selftest, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  if (selftest_flag) {
    command = "selftest";
  } else if (!app.get_subcommands().empty()) {
    command = app.get_subcommands().front()->get_name();
  } else {
    std::cerr << app.help();
    return 2;
  }

  const LogLevel level = log_level();
  hmk_config* config = nullptr;
  if (hmk_config_create(&config) != HMK_OK) {
    std::cerr << "hmk: " << hmk_last_error_message() << "\n";
    return 3;
  }
  std::string x_joined;
  for (const auto& t : o.x) x_joined += (x_joined.empty() ? "" : ",") + t;
  const std::pair<const char*, std::string> settings[] = {
      {"command", command},   {"vector", o.vector},       {"sequence", o.sequence}, {"family", o.family},
      {"tensor-out", o.tensor_out}, {"out", o.out},       {"mode", o.mode},         {"tol", o.tol},
      {"pmax", o.pmax},       {"m", o.m},                 {"n", o.n},               {"m-list", o.m_list},
      {"x", x_joined},        {"seed", o.seed},           {"restarts", o.restarts}, {"max-iter", o.max_iter},
      {"fit-tol", o.fit_tol}, {"m-max", o.m_max},
  };
  for (const auto& [key, value] : settings) {
    if (value.empty()) continue;
    if (hmk_config_set(config, key, value.c_str()) != HMK_OK) {
      std::cerr << "hmk: " << hmk_last_error_message() << "\n";
      hmk_config_destroy(config);
      return 2;
    }
  }

  hmk_result* result = nullptr;
  const hmk_status status = hmk_run(config, &result);
  hmk_config_destroy(config);
  if (status != HMK_OK) {
    if (level != LogLevel::Quiet) {
      std::cerr << "hmk " << command << ": " << hmk_status_string(status) << ": " << hmk_last_error_message() << "\n";
    }
    return exit_code_for(status);
  }

  int code = hmk_result_exit_code(result);
  const std::string json = hmk_result_json(result);
  if (!o.out.empty()) {
    if (!write_atomic(o.out, json)) {
      std::cerr << "hmk: cannot write " << o.out << "\n";
      code = 3;
    }
  } else if (command != "eval") {
    std::cout << json;
  }
  if (!o.tensor_out.empty() && !write_atomic(o.tensor_out, hmk_result_tensor_json(result))) {
    std::cerr << "hmk: cannot write " << o.tensor_out << "\n";
    code = 3;
  }
  if (command == "eval") std::cout << hmk_result_summary(result) << "\n";
  if (level != LogLevel::Quiet && command != "eval") std::cerr << "hmk " << command << ": " << hmk_result_summary(result) << "\n";
  if (level == LogLevel::Debug) {
    for (size_t i = 0; i < hmk_result_detail_count(result); ++i) std::cerr << "  " << hmk_result_detail(result, i) << "\n";
  }
  hmk_result_destroy(result);
  return code;
}
