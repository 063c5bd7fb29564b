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

#include "hmk/hmk.h"

#include <charconv>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "hmk/commands.hpp"
#include "hmk/decomposition.hpp"
#include "hmk/errors.hpp"
#include "hmk/json_io.hpp"
#include "hmk/psd.hpp"
#include "hmk/tensor.hpp"

struct hmk_config {
  hmk::RunConfig config;
};

struct hmk_result {
  hmk::CommandOutcome outcome;
};

struct hmk_vector {
  std::vector<hmk::json_io::InputScalar> values;
};

struct hmk_decomposition {
  hmk::VandermondeDecomposition decomposition;
  double residual = 0.0;
};

namespace {

thread_local std::string g_last_error;

hmk_status fail(hmk_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the in-flight exception onto a status code.
hmk_status translate() {
  try {
    throw;
  } catch (const hmk::ParseError& e) {
    return fail(HMK_PARSE, e.what());
  } catch (const hmk::CoverageError& e) {
    return fail(HMK_COVERAGE, e.what());
  } catch (const hmk::LengthError& e) {
    return fail(HMK_LENGTH, e.what());
  } catch (const hmk::InconsistencyError& e) {
    return fail(HMK_INCONSISTENT, e.what());
  } catch (const hmk::PreconditionError& e) {
    return fail(HMK_PRECONDITION, e.what());
  } catch (const hmk::NumericalFailure& e) {
    return fail(HMK_NUMERICAL, e.what());
  } catch (const hmk::DomainError& e) {
    return fail(HMK_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HMK_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HMK_INTERNAL, e.what());
  } catch (...) {
    return fail(HMK_INTERNAL, "unknown failure");
  }
}

template <class F>
hmk_status guarded(F&& f) {
  try {
    f();
    return HMK_OK;
  } catch (...) {
    return translate();
  }
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw hmk::DomainError("bad value \"" + text + "\" for " + key);
  return value;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw hmk::DomainError("bad value \"" + text + "\" for " + key);
  return value;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

hmk::ScalarMode resolve(hmk_mode mode, const hmk_vector* v) {
  if (mode == HMK_MODE_FLOAT) return hmk::ScalarMode::Float;
  if (mode == HMK_MODE_EXACT) return hmk::ScalarMode::Exact;
  return hmk::json_io::all_exact(v->values) ? hmk::ScalarMode::Exact : hmk::ScalarMode::Float;
}

template <hmk::Scalar T>
hmk::GeneratingVector<T> realize(const hmk_vector* v) {
  return hmk::GeneratingVector<T>(hmk::json_io::realize<T>(std::span(v->values)));
}

void require(bool ok, const char* message) {
  if (!ok) throw hmk::DomainError(message);
}

}  // namespace

extern "C" {

const char* hmk_version(void) { return "0.1.0"; }

const char* hmk_status_string(hmk_status status) {
  switch (status) {
    case HMK_OK:
      return "ok";
    case HMK_INVALID_ARGUMENT:
      return "invalid argument";
    case HMK_PARSE:
      return "parse error";
    case HMK_COVERAGE:
      return "coverage error";
    case HMK_LENGTH:
      return "length error";
    case HMK_INCONSISTENT:
      return "inconsistent input";
    case HMK_PRECONDITION:
      return "precondition failed";
    case HMK_NUMERICAL:
      return "numerical failure";
    case HMK_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* hmk_last_error_message(void) { return g_last_error.c_str(); }

hmk_status hmk_config_create(hmk_config** out) {
  if (!out) return fail(HMK_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new hmk_config(); });
}

void hmk_config_destroy(hmk_config* config) { delete config; }

hmk_status hmk_config_set(hmk_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(HMK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string k(key);
    const std::string v(value);
    hmk::RunConfig& c = config->config;
    if (k == "command") {
      c.command = v;
    } else if (k == "vector") {
      c.vector_path = v;
    } else if (k == "sequence") {
      c.sequence_path = v;
    } else if (k == "family") {
      c.family_path = v;
    } else if (k == "tensor-out") {
      c.tensor_out_path = v;
    } else if (k == "out") {
      c.out_path = v;
    } else if (k == "mode") {
      if (v == "float") {
        c.mode = hmk::ModeRequest::Float;
      } else if (v == "exact") {
        c.mode = hmk::ModeRequest::Exact;
      } else if (v == "auto") {
        c.mode = hmk::ModeRequest::Auto;
      } else {
        throw hmk::DomainError("mode must be float, exact or auto");
      }
    } else if (k == "tol") {
      c.tol = parse_double(k, v);
    } else if (k == "pmax") {
      c.p_max = parse_number<int>(k, v);
    } else if (k == "m") {
      c.m = parse_number<int>(k, v);
    } else if (k == "n") {
      c.n = parse_number<int>(k, v);
    } else if (k == "m-list") {
      c.m_list.clear();
      for (const auto& item : split(v)) c.m_list.push_back(parse_number<int>(k, item));
    } else if (k == "x") {
      c.x = split(v);
    } else if (k == "seed") {
      c.seed = parse_number<std::uint64_t>(k, v);
    } else if (k == "restarts") {
      c.restarts = parse_number<int>(k, v);
    } else if (k == "max-iter") {
      c.max_iterations = parse_number<int>(k, v);
    } else if (k == "fit-tol") {
      c.fit_tol = parse_double(k, v);
    } else if (k == "m-max") {
      c.preset_m_max = parse_number<int>(k, v);
    } else {
      throw hmk::DomainError("unknown configuration key \"" + k + "\"");
    }
  });
}

hmk_status hmk_run(const hmk_config* config, hmk_result** out) {
  if (!config || !out) return fail(HMK_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto result = std::make_unique<hmk_result>();
    result->outcome = hmk::run_command(config->config);
    *out = result.release();
  });
}

void hmk_result_destroy(hmk_result* result) { delete result; }

int hmk_result_exit_code(const hmk_result* result) { return result ? result->outcome.exit_code : -1; }

const char* hmk_result_json(const hmk_result* result) { return result ? result->outcome.json.c_str() : ""; }

const char* hmk_result_summary(const hmk_result* result) { return result ? result->outcome.summary.c_str() : ""; }

size_t hmk_result_detail_count(const hmk_result* result) { return result ? result->outcome.details.size() : 0; }

const char* hmk_result_detail(const hmk_result* result, size_t index) {
  if (!result || index >= result->outcome.details.size()) return "";
  return result->outcome.details[index].c_str();
}

const char* hmk_result_tensor_json(const hmk_result* result) {
  return result ? result->outcome.tensor_json.c_str() : "";
}

hmk_status hmk_vector_from_doubles(const double* values, size_t count, hmk_vector** out) {
  if (!out || (!values && count)) return fail(HMK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(count > 0, "generating vector must be nonempty");
    auto v = std::make_unique<hmk_vector>();
    for (size_t i = 0; i < count; ++i) {
      require(std::isfinite(values[i]), "generating vector entries must be finite");
      v->values.push_back({std::nullopt, values[i]});
    }
    *out = v.release();
  });
}

hmk_status hmk_vector_from_strings(const char* const* values, size_t count, hmk_vector** out) {
  if (!out || (!values && count)) return fail(HMK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(count > 0, "generating vector must be nonempty");
    auto v = std::make_unique<hmk_vector>();
    for (size_t i = 0; i < count; ++i) {
      require(values[i] != nullptr, "null entry");
      const hmk::Rational q = hmk::parse_rational(values[i]);
      v->values.push_back({q, q.get_d()});
    }
    *out = v.release();
  });
}

void hmk_vector_destroy(hmk_vector* v) { delete v; }

size_t hmk_vector_length(const hmk_vector* v) { return v ? v->values.size() : 0; }

int hmk_vector_is_exact(const hmk_vector* v) { return v && hmk::json_io::all_exact(v->values) ? 1 : 0; }

hmk_status hmk_psd_check(const hmk_vector* v, int p, hmk_mode mode, double tol, hmk_verdict* verdict, int* rank) {
  if (!v || !verdict) return fail(HMK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto m = resolve(mode, v);
    const hmk::PsdReport r = m == hmk::ScalarMode::Exact
                                 ? hmk::psd_check(hmk::hankel_matrix(realize<hmk::Rational>(v), p), m, tol)
                                 : hmk::psd_check(hmk::hankel_matrix(realize<double>(v), p), m, tol);
    *verdict = r.verdict == hmk::Verdict::Psd      ? HMK_PSD
               : r.verdict == hmk::Verdict::NotPsd ? HMK_NOT_PSD
                                                   : HMK_INDETERMINATE;
    if (rank) *rank = r.rank;
  });
}

hmk_status hmk_strong_hankel_check(const hmk_vector* v, int n, int m, hmk_mode mode, double tol, int* valid) {
  if (!v || !valid) return fail(HMK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto s = resolve(mode, v);
    const auto cert = s == hmk::ScalarMode::Exact ? hmk::strong_hankel_check(realize<hmk::Rational>(v), n, m, s, tol)
                                                  : hmk::strong_hankel_check(realize<double>(v), n, m, s, tol);
    *valid = cert.valid ? 1 : 0;
  });
}

hmk_status hmk_polynomial_eval(const hmk_vector* v, int n, int m, const double* x, double* direct,
                               double* contracted) {
  if (!v || !x || !direct || !contracted) return fail(HMK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto s = hmk::sequence_from_generating_vector(realize<double>(v), n);
    const std::vector<double> point(x, x + n);
    const auto value = hmk::polynomial_eval(s, m, std::span<const double>(point));
    *direct = value.direct;
    *contracted = value.contracted;
  });
}

hmk_status hmk_decompose(const hmk_vector* v, int n, int m, hmk_mode mode, double tol, hmk_decomposition** out) {
  if (!v || !out) return fail(HMK_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto s = resolve(mode, v);
    auto d = std::make_unique<hmk_decomposition>();
    if (s == hmk::ScalarMode::Exact) {
      const auto h = hmk::hankel_tensor(realize<hmk::Rational>(v), n, m);
      d->decomposition = hmk::strong_hankel_decompose(h, s, tol);
      d->residual = hmk::verify_decomposition(h, d->decomposition, tol).max_rel;
    } else {
      const auto h = hmk::hankel_tensor(realize<double>(v), n, m);
      d->decomposition = hmk::strong_hankel_decompose(h, s, tol);
      d->residual = hmk::verify_decomposition(h, d->decomposition, tol).max_rel;
    }
    *out = d.release();
  });
}

void hmk_decomposition_destroy(hmk_decomposition* d) { delete d; }

size_t hmk_decomposition_atom_count(const hmk_decomposition* d) { return d ? d->decomposition.atoms.size() : 0; }

hmk_status hmk_decomposition_atom(const hmk_decomposition* d, size_t index, double* node, double* weight) {
  if (!d || !node || !weight) return fail(HMK_INVALID_ARGUMENT, "null argument");
  if (index >= d->decomposition.atoms.size()) return fail(HMK_INVALID_ARGUMENT, "atom index out of range");
  const auto& a = d->decomposition.atoms.atoms()[index];
  *node = a.node;
  *weight = a.weight;
  return HMK_OK;
}

double hmk_decomposition_augmented_c(const hmk_decomposition* d) { return d ? d->decomposition.augmented_c : 0.0; }

double hmk_decomposition_residual(const hmk_decomposition* d) { return d ? d->residual : 0.0; }

}  // extern "C"
