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

#include "hmk/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "hmk/decomposition.hpp"
#include "hmk/errors.hpp"
#include "hmk/explorer.hpp"
#include "hmk/json_io.hpp"
#include "hmk/psd.hpp"
#include "hmk/sequence.hpp"
#include "hmk/tensor.hpp"

namespace hmk {

namespace {

using json_io::Json;

std::string_view to_string(ModeRequest m) {
  switch (m) {
    case ModeRequest::Float:
      return "float";
    case ModeRequest::Exact:
      return "exact";
    case ModeRequest::Auto:
      break;
  }
  return "auto";
}

ScalarMode resolve_mode(ModeRequest requested, bool inputs_exact) {
  if (requested == ModeRequest::Float) return ScalarMode::Float;
  if (requested == ModeRequest::Exact) return ScalarMode::Exact;
  return inputs_exact ? ScalarMode::Exact : ScalarMode::Float;
}

Json config_echo(const RunConfig& c, std::optional<ScalarMode> resolved) {
  Json out;
  out["command"] = c.command;
  out["mode_requested"] = std::string(to_string(c.mode));
  if (resolved) out["mode"] = std::string(to_string(*resolved));
  if (!c.vector_path.empty()) out["vector"] = c.vector_path;
  if (!c.sequence_path.empty()) out["sequence"] = c.sequence_path;
  if (!c.family_path.empty()) out["family"] = c.family_path;
  if (c.tol) out["tol"] = *c.tol;
  if (c.p_max) out["pmax"] = *c.p_max;
  if (c.m) out["m"] = *c.m;
  if (c.n) out["n"] = *c.n;
  if (!c.m_list.empty()) out["m_list"] = c.m_list;
  if (!c.x.empty()) out["x"] = c.x;
  out["seed"] = c.seed;
  if (c.command == "explore") {
    out["restarts"] = c.restarts;
    out["max_iterations"] = c.max_iterations;
    out["fit_tol"] = c.fit_tol;
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
std::string fmt(const Rational& x) { return format_rational(x); }

template <Scalar T>
std::string fmt_list(std::span<const T> xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out + ")";
}

template <Scalar T>
Json vector_json(const GeneratingVector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v.values()) out.push_back(json_io::scalar_json(x));
  return out;
}

std::string describe(const PsdReport& r) {
  std::string s = "H_" + std::to_string(r.p) + " " + std::string(to_string(r.verdict)) + ", rank " +
                  std::to_string(r.rank) + " (" + std::string(to_string(r.mode)) + ")";
  if (!r.exact_witness.empty()) {
    s += ", witness " + fmt_list<Rational>(r.exact_witness) + " gives x'Hx = " + fmt(r.exact_witness_value);
  } else if (!r.witness.empty()) {
    s += ", witness " + fmt_list<double>(r.witness) + " gives x'Hx = " + fmt(r.witness_value);
  }
  return s;
}

void require_positive(const std::optional<int>& value, const char* name, int minimum) {
  if (value && *value < minimum) {
    throw DomainError(std::string("--") + name + " must be >= " + std::to_string(minimum));
  }
}

// Verdict step shared by --vector and --sequence inputs.
template <Scalar T>
void certify(const RunConfig& c, const GeneratingVector<T>& v, std::optional<int> n, ScalarMode mode, Json& doc,
             CommandOutcome& out) {
  const double tol = c.tol.value_or(kPsdTol);
  doc["generating_vector"] = vector_json(v);
  if (c.m) {
    if (!n) throw DomainError("a strong Hankel check with --m also needs --n (or \"n\" in the input)");
    const auto cert = strong_hankel_check(v, *n, *c.m, mode, tol);
    doc["certificate"] = json_io::to_json(cert);
    doc["verdict"] = cert.valid;
    out.exit_code = cert.valid ? 0 : 1;
    out.summary = std::string(cert.valid ? "strong Hankel: " : "not strong Hankel: ") + describe(cert.report);
    out.details.push_back(cert.note);
    return;
  }
  const int p_max = c.p_max.value_or(default_p_max(v));
  const auto report = moment_sequence_check(v, p_max, mode, tol);
  doc["certificate"] = json_io::to_json(report);
  doc["verdict"] = report.consistent;
  out.exit_code = report.consistent ? 0 : 1;
  out.summary = describe(report.report);
  if (report.consistent) {
    out.summary += "; consistent with a moment sequence up to degree " + std::to_string(report.consistent_up_to_degree);
  }
}

template <Scalar T>
void check_sequence(const RunConfig& c, const json_io::SequenceDoc& sdoc, ScalarMode mode, Json& doc,
                    CommandOutcome& out) {
  const auto s = json_io::realize<T>(sdoc);
  if (!s.is_rule_backed()) {
    const auto hankel = is_hankel_sequence(s, s.coverage_degree());
    Json h;
    h["holds"] = hankel.holds;
    h["max_degree"] = s.coverage_degree();
    if (!hankel.holds) {
      const auto& [a, b] = *hankel.violation;
      h["violation"] = {std::vector<int>(a.entries().begin(), a.entries().end()),
                        std::vector<int>(b.entries().begin(), b.entries().end())};
      h["values"] = {json_io::scalar_json(s.value(a)), json_io::scalar_json(s.value(b))};
      doc["hankel_sequence"] = std::move(h);
      doc["verdict"] = false;
      out.exit_code = 1;
      out.summary = "not a Hankel sequence: b" + to_string(a) + " = " + fmt(s.value(a)) + " but b" + to_string(b) +
                    " = " + fmt(s.value(b)) + " at weighted degree " + std::to_string(weighted_degree(a));
      return;
    }
    doc["hankel_sequence"] = std::move(h);
  }
  const int top = s.is_rule_backed() ? s.coverage_degree() : (s.dimension() - 1) * s.coverage_degree();
  const auto v = generating_vector_from_sequence(s, top);
  certify(c, v, c.n ? c.n : std::optional<int>(s.dimension()), mode, doc, out);
}

CommandOutcome cmd_check(const RunConfig& c) {
  if (c.vector_path.empty() == c.sequence_path.empty()) {
    throw DomainError("check needs exactly one of --vector or --sequence");
  }
  require_positive(c.p_max, "pmax", 1);
  require_positive(c.m, "m", 1);
  require_positive(c.n, "n", 2);
  CommandOutcome out;
  Json doc;
  if (!c.vector_path.empty()) {
    const auto vdoc = json_io::parse_vector_doc(json_io::read_file(c.vector_path));
    const ScalarMode mode = resolve_mode(c.mode, json_io::all_exact(vdoc.values));
    doc["config"] = config_echo(c, mode);
    const auto n = c.n ? c.n : vdoc.n;
    if (mode == ScalarMode::Exact) {
      certify(c, GeneratingVector<Rational>(json_io::realize<Rational>(std::span(vdoc.values))), n, mode, doc, out);
    } else {
      certify(c, GeneratingVector<double>(json_io::realize<double>(std::span(vdoc.values))), n, mode, doc, out);
    }
  } else {
    const auto sdoc = json_io::parse_sequence_doc(json_io::read_file(c.sequence_path));
    const auto values = sdoc.all_values();
    const ScalarMode mode = resolve_mode(c.mode, json_io::all_exact(values));
    doc["config"] = config_echo(c, mode);
    if (mode == ScalarMode::Exact) {
      check_sequence<Rational>(c, sdoc, mode, doc, out);
    } else {
      check_sequence<double>(c, sdoc, mode, doc, out);
    }
  }
  out.json = json_io::dump(doc);
  return out;
}

template <Scalar T>
void decompose_with(const RunConfig& c, const GeneratingVector<T>& v, int n, int m, ScalarMode mode, Json& doc,
                    CommandOutcome& out) {
  const double tol = c.tol.value_or(kDecompositionTol);
  const auto h = hankel_tensor(v, n, m);
  if (!c.tensor_out_path.empty()) out.tensor_json = json_io::dump(json_io::tensor_to_json(densify(h)));
  VandermondeDecomposition d;
  try {
    d = strong_hankel_decompose(h, mode, tol);
  } catch (const PreconditionError& e) {
    doc["status"] = "precondition_failed";
    doc["message"] = e.what();
    doc["verdict"] = false;
    out.exit_code = 1;
    out.summary = std::string("precondition failed: ") + e.what();
    return;
  }
  const auto residual = verify_decomposition(h, d, tol);
  doc["decomposition"] = json_io::to_json(d, residual);
  doc["status"] = residual.pass ? "verified" : "verification_failed";
  doc["verdict"] = residual.pass;
  out.exit_code = residual.pass ? 0 : 1;
  out.summary = std::to_string(d.atoms.size()) + " atom(s), augmented c = " + fmt(d.augmented_c) +
                ", max relative residual " + fmt(residual.max_rel) + (residual.pass ? " (pass)" : " (FAIL)");
  for (const auto& a : d.atoms.atoms()) out.details.push_back("t = " + fmt(a.node) + ", w = " + fmt(a.weight));
}

CommandOutcome cmd_decompose(const RunConfig& c) {
  if (c.vector_path.empty()) throw DomainError("decompose needs --vector");
  require_positive(c.m, "m", 1);
  require_positive(c.n, "n", 2);
  const auto vdoc = json_io::parse_vector_doc(json_io::read_file(c.vector_path));
  const ScalarMode mode = resolve_mode(c.mode, json_io::all_exact(vdoc.values));
  const auto n_opt = c.n ? c.n : vdoc.n;
  if (!n_opt) throw DomainError("decompose needs --n (or \"n\" in the vector document)");
  const int n = *n_opt;
  const int top = static_cast<int>(vdoc.values.size()) - 1;
  const int m = c.m.value_or(top / (n - 1));
  if (m < 1) throw LengthError("generating vector too short for any order at dimension " + std::to_string(n));
  CommandOutcome out;
  Json doc;
  doc["config"] = config_echo(c, mode);
  doc["m"] = m;
  doc["n"] = n;
  if (mode == ScalarMode::Exact) {
    decompose_with(c, GeneratingVector<Rational>(json_io::realize<Rational>(std::span(vdoc.values))), n, m, mode, doc,
                   out);
  } else {
    decompose_with(c, GeneratingVector<double>(json_io::realize<double>(std::span(vdoc.values))), n, m, mode, doc,
                   out);
  }
  out.json = json_io::dump(doc);
  return out;
}

json_io::InputScalar parse_point_entry(const std::string& text) {
  try {
    return json_io::parse_scalar(Json(text));
  } catch (const ParseError&) {
  }
  json_io::InputScalar s;
  std::size_t used = 0;
  try {
    s.approx = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("cannot read point coordinate \"" + text + "\"");
  }
  if (used != text.size() || !std::isfinite(s.approx)) throw ParseError("cannot read point coordinate \"" + text + "\"");
  return s;
}

template <Scalar T>
void eval_with(const json_io::SequenceDoc& sdoc, int m, std::span<const json_io::InputScalar> point, Json& doc,
               CommandOutcome& out) {
  const auto s = json_io::realize<T>(sdoc);
  const auto x = json_io::realize<T>(point);
  const auto value = polynomial_eval(s, m, std::span<const T>(x));
  const T diff = value.direct - value.contracted;
  doc["direct"] = json_io::scalar_json(value.direct);
  doc["contracted"] = json_io::scalar_json(value.contracted);
  doc["difference"] = json_io::scalar_json(T(diff));
  out.summary = "direct " + fmt(value.direct) + ", contracted " + fmt(value.contracted) + ", difference " +
                fmt(T(diff));
}

CommandOutcome cmd_eval(const RunConfig& c) {
  if (c.sequence_path.empty()) throw DomainError("eval needs --sequence");
  if (!c.m) throw DomainError("eval needs --m");
  require_positive(c.m, "m", 1);
  const auto sdoc = json_io::parse_sequence_doc(json_io::read_file(c.sequence_path));
  if (c.n && *c.n != sdoc.n) throw DomainError("--n disagrees with the sequence dimension");
  std::vector<json_io::InputScalar> point;
  for (const auto& t : c.x) point.push_back(parse_point_entry(t));
  if (static_cast<int>(point.size()) != sdoc.n) {
    throw DomainError("--x needs " + std::to_string(sdoc.n) + " coordinates (x_0 first), got " +
                      std::to_string(point.size()));
  }
  auto values = sdoc.all_values();
  values.insert(values.end(), point.begin(), point.end());
  const ScalarMode mode = resolve_mode(c.mode, json_io::all_exact(values));
  CommandOutcome out;
  Json doc;
  doc["config"] = config_echo(c, mode);
  if (mode == ScalarMode::Exact) {
    eval_with<Rational>(sdoc, *c.m, point, doc, out);
  } else {
    eval_with<double>(sdoc, *c.m, point, doc, out);
  }
  out.exit_code = 0;
  out.json = json_io::dump(doc);
  return out;
}

CommandOutcome cmd_explore(const RunConfig& c) {
  if (c.mode == ModeRequest::Exact) throw DomainError("explore runs in float mode only");
  TruncatedFamily family;
  if (!c.family_path.empty()) {
    family = json_io::family_from_json(json_io::read_file(c.family_path));
  } else {
    require_positive(c.n, "n", 2);
    family = TruncatedFamily::preset(c.n.value_or(3), c.preset_m_max.value_or(6));
  }
  std::vector<int> m_list = c.m_list;
  if (m_list.empty() && c.m) m_list = {*c.m};
  if (m_list.empty()) m_list = {3, 4};
  if (c.restarts < 1) throw DomainError("--restarts must be >= 1");
  if (c.max_iterations < 1) throw DomainError("--max-iter must be >= 1");
  FitOptions options;
  options.tol = c.fit_tol;
  options.restarts = c.restarts;
  options.max_iterations = c.max_iterations;
  options.seed = c.seed;
  const auto report = search_counterexample(family, m_list, options);

  CommandOutcome out;
  Json doc;
  doc["config"] = config_echo(c, ScalarMode::Float);
  doc["family"] = json_io::to_json(family);
  doc["m_list"] = m_list;
  doc["report"] = json_io::to_json(report);
  std::size_t converged = 0;
  for (const auto& cand : report.candidates) converged += cand.all_converged ? 1 : 0;
  out.exit_code = 0;
  out.summary = std::to_string(report.enumerated) + " vector(s) enumerated, " +
                std::to_string(report.candidates.size()) + " not strong Hankel, " + std::to_string(converged) +
                " fitted at every order (numerical evidence only)";
  for (const auto& cand : report.candidates) {
    std::string line = "candidate " + std::to_string(cand.id) + ":";
    for (const auto& f : cand.fits) {
      line += " m=" + std::to_string(f.m) + " r=" + std::to_string(f.r) + " res=" + fmt(f.residual) +
              (f.converged ? " ok" : " --");
    }
    out.details.push_back(line);
  }
  out.json = json_io::dump(doc);
  return out;
}

}  // namespace

CommandOutcome run_command(const RunConfig& config) {
  if (config.command == "check") return cmd_check(config);
  if (config.command == "decompose") return cmd_decompose(config);
  if (config.command == "eval") return cmd_eval(config);
  if (config.command == "explore") return cmd_explore(config);
  if (config.command == "selftest") return run_selftest();
  throw DomainError("unknown command \"" + config.command + "\"");
}

}  // namespace hmk
