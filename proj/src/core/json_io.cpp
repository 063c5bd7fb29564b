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

#include "hmk/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hmk/errors.hpp"

namespace hmk::json_io {

namespace {

bool is_primitive(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump_primitive(const Json& j, std::string& out) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
      out += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
    return;
  }
  out += j.dump();
}

void dump_value(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(key).dump();
      out += ": ";
      dump_value(value, depth + 1, out);
    }
    out += "\n" + close_pad + "}";
    return;
  }
  if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), is_primitive);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump_primitive(j[i], out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      dump_value(j[i], depth + 1, out);
    }
    out += "\n" + close_pad + "]";
    return;
  }
  dump_primitive(j, out);
}

const Json& require(const Json& doc, const char* key, const char* what) {
  if (!doc.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string(what) + " lacks field \"" + key + "\"");
  return *it;
}

int require_int(const Json& doc, const char* key, const char* what) {
  const Json& v = require(doc, key, what);
  if (!v.is_number_integer()) throw ParseError(std::string(what) + " field \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<int> int_list(const Json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ParseError(std::string(what) + " must be an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<InputScalar> scalar_list(const Json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<InputScalar> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(parse_scalar(x));
  return out;
}

double as_double(const Json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

std::string dump(const Json& doc) {
  std::string out;
  dump_value(doc, 0, out);
  out += "\n";
  return out;
}

Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path.string());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

InputScalar parse_scalar(const Json& value) {
  InputScalar out;
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) {
      out.exact = Rational(mpz_class(std::to_string(value.get<std::uint64_t>())));
    } else {
      out.exact = Rational(mpz_class(std::to_string(value.get<std::int64_t>())));
    }
    out.approx = out.exact->get_d();
    return out;
  }
  if (value.is_number_float()) {
    out.approx = value.get<double>();
    if (!std::isfinite(out.approx)) throw ParseError("non-finite number in input");
    return out;
  }
  if (value.is_string()) {
    out.exact = parse_rational(value.get<std::string>());
    out.approx = out.exact->get_d();
    return out;
  }
  throw ParseError("expected a number or a \"p/q\" string, got " + value.dump());
}

bool all_exact(std::span<const InputScalar> values) {
  return std::all_of(values.begin(), values.end(), [](const InputScalar& v) { return v.exact.has_value(); });
}

template <>
double realize<double>(const InputScalar& value) {
  return value.approx;
}

template <>
Rational realize<Rational>(const InputScalar& value) {
  if (!value.exact) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value.approx);
    throw ParseError(std::string("exact mode needs integers or \"p/q\" strings, got ") + buf);
  }
  return *value.exact;
}

VectorDoc parse_vector_doc(const Json& doc) {
  VectorDoc out;
  if (doc.is_array()) {
    out.values = scalar_list(doc, "generating vector");
  } else {
    out.values = scalar_list(require(doc, "generating_vector", "vector document"), "generating_vector");
    if (doc.contains("n")) {
      out.n = require_int(doc, "n", "vector document");
      if (*out.n < 2) throw ParseError("vector document field \"n\" must be >= 2");
    }
  }
  if (out.values.empty()) throw ParseError("generating vector must be nonempty");
  return out;
}

std::vector<InputScalar> SequenceDoc::all_values() const {
  std::vector<InputScalar> out = generating_vector;
  for (const auto& [j, value] : entries) out.push_back(value);
  return out;
}

SequenceDoc parse_sequence_doc(const Json& doc) {
  SequenceDoc out;
  out.n = require_int(doc, "n", "sequence document");
  if (out.n < 2) throw ParseError("sequence document field \"n\" must be >= 2");
  const Json& kind = require(doc, "kind", "sequence document");
  if (!kind.is_string()) throw ParseError("sequence document field \"kind\" must be a string");
  out.kind = kind.get<std::string>();
  if (out.kind == "table") {
    out.max_degree = require_int(doc, "max_degree", "sequence document");
    if (out.max_degree < 0) throw ParseError("max_degree must be >= 0");
    const Json& entries = require(doc, "entries", "sequence document");
    if (!entries.is_array()) throw ParseError("sequence entries must be an array");
    for (const auto& e : entries) {
      std::vector<int> j = int_list(require(e, "j", "sequence entry"), "sequence entry field \"j\"");
      if (static_cast<int>(j.size()) != out.n - 1) {
        throw ParseError("multi-index of length " + std::to_string(j.size()) + " in a sequence with n = " +
                         std::to_string(out.n));
      }
      for (int x : j)
        if (x < 0) throw ParseError("multi-index entries must be >= 0");
      out.entries.emplace_back(MultiIndex(std::move(j)), parse_scalar(require(e, "value", "sequence entry")));
    }
  } else if (out.kind == "hankel-rule") {
    out.generating_vector = scalar_list(require(doc, "generating_vector", "sequence document"), "generating_vector");
    if (out.generating_vector.empty()) throw ParseError("generating vector must be nonempty");
    out.max_degree = static_cast<int>(out.generating_vector.size()) - 1;
  } else {
    throw ParseError("sequence kind must be \"table\" or \"hankel-rule\", got \"" + out.kind + "\"");
  }
  return out;
}

template <Scalar T>
MultidimensionalSequence<T> realize(const SequenceDoc& doc) {
  if (doc.kind == "hankel-rule") {
    return MultidimensionalSequence<T>::hankel_rule(GeneratingVector<T>(realize<T>(std::span(doc.generating_vector))),
                                                    doc.n);
  }
  typename MultidimensionalSequence<T>::Table table;
  for (const auto& [j, value] : doc.entries) {
    if (!table.emplace(j, realize<T>(value)).second) throw ParseError("duplicate table entry " + to_string(j));
  }
  return MultidimensionalSequence<T>::table(doc.n, doc.max_degree, std::move(table));
}

template MultidimensionalSequence<double> realize<double>(const SequenceDoc&);
template MultidimensionalSequence<Rational> realize<Rational>(const SequenceDoc&);

Json scalar_json(double x) { return Json(x); }
Json scalar_json(const Rational& x) { return Json(format_rational(x)); }

template <Scalar T>
Json sequence_to_json(const MultidimensionalSequence<T>& s) {
  Json out;
  out["n"] = s.dimension();
  if (s.is_rule_backed()) {
    out["kind"] = "hankel-rule";
    out["max_degree"] = s.coverage_degree();
    Json v = Json::array();
    for (const auto& x : s.generator().values()) v.push_back(scalar_json(x));
    out["generating_vector"] = std::move(v);
  } else {
    out["kind"] = "table";
    out["max_degree"] = s.coverage_degree();
    Json entries = Json::array();
    for (const auto& [j, value] : s.entries()) {
      entries.push_back({{"j", std::vector<int>(j.entries().begin(), j.entries().end())}, {"value", scalar_json(value)}});
    }
    out["entries"] = std::move(entries);
  }
  return out;
}

template Json sequence_to_json<double>(const MultidimensionalSequence<double>&);
template Json sequence_to_json<Rational>(const MultidimensionalSequence<Rational>&);

Json to_json(const PsdReport& report) {
  Json out;
  out["verdict"] = std::string(to_string(report.verdict));
  out["mode"] = std::string(to_string(report.mode));
  out["p"] = report.p;
  out["rank"] = report.rank;
  if (report.mode == ScalarMode::Exact) {
    Json pivots = Json::array();
    for (const auto& x : report.pivots) pivots.push_back(scalar_json(x));
    out["pivots"] = std::move(pivots);
    out["pivot_order"] = report.pivot_order;
    Json minors = Json::array();
    for (const auto& x : report.leading_minors) minors.push_back(scalar_json(x));
    out["leading_minors"] = std::move(minors);
    if (!report.exact_witness.empty()) {
      Json w = Json::array();
      for (const auto& x : report.exact_witness) w.push_back(scalar_json(x));
      out["witness"] = std::move(w);
      out["witness_value"] = scalar_json(report.exact_witness_value);
    }
  } else {
    out["tolerance"] = report.tolerance;
    out["lambda_min"] = report.lambda_min;
    out["lambda_max"] = report.lambda_max;
    if (!report.witness.empty()) {
      out["witness"] = report.witness;
      out["witness_value"] = report.witness_value;
    }
  }
  return out;
}

Json to_json(const StrongHankelCertificate& cert) {
  Json out = to_json(cert.report);
  out["kind"] = "strong-hankel";
  out["m"] = cert.m;
  out["n"] = cert.n;
  out["top_index"] = cert.top_index;
  out["checked_p"] = cert.checked_p;
  out["valid"] = cert.valid;
  out["note"] = cert.note;
  return out;
}

Json to_json(const MomentSequenceReport& report) {
  Json out = to_json(report.report);
  out["kind"] = "moment-sequence";
  out["p_max"] = report.p_max;
  out["consistent"] = report.consistent;
  if (report.consistent) out["consistent_up_to_degree"] = report.consistent_up_to_degree;
  return out;
}

Json to_json(const VandermondeDecomposition& d, const ResidualReport& residual) {
  Json out;
  out["m"] = d.m;
  out["n"] = d.n;
  Json atoms = Json::array();
  for (const auto& a : d.atoms.atoms()) atoms.push_back({{"t", a.node}, {"w", a.weight}});
  out["atoms"] = std::move(atoms);
  out["augmented_c"] = d.augmented_c;
  out["residual"] = {{"max_abs", residual.max_abs}, {"max_rel", residual.max_rel}, {"pass", residual.pass}};
  return out;
}

VandermondeDecomposition decomposition_from_json(const Json& doc) {
  VandermondeDecomposition d;
  d.m = require_int(doc, "m", "decomposition");
  d.n = require_int(doc, "n", "decomposition");
  if (d.m < 1 || d.n < 2) throw ParseError("decomposition needs m >= 1 and n >= 2");
  const Json& atoms = require(doc, "atoms", "decomposition");
  if (!atoms.is_array()) throw ParseError("decomposition atoms must be an array");
  std::vector<Atom> list;
  for (const auto& a : atoms) {
    list.push_back({as_double(require(a, "t", "atom"), "atom node"), as_double(require(a, "w", "atom"), "atom weight")});
  }
  try {
    d.atoms = AtomicMeasure(std::move(list));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  d.augmented_c = as_double(require(doc, "augmented_c", "decomposition"), "augmented_c");
  return d;
}

template <Scalar T>
Json tensor_to_json(const SymmetricTensor<T>& a) {
  Json out;
  out["m"] = a.order();
  out["n"] = a.dimension();
  out["mode"] = is_exact_v<T> ? "rational" : "float";
  Json entries = Json::array();
  const auto& layout = a.layout();
  for (std::size_t r = 0; r < layout.size(); ++r) {
    const auto idx = layout.tuple(r);
    entries.push_back({{"idx", std::vector<int>(idx.begin(), idx.end())}, {"value", scalar_json(a[r])}});
  }
  out["entries"] = std::move(entries);
  return out;
}

template Json tensor_to_json<double>(const SymmetricTensor<double>&);
template Json tensor_to_json<Rational>(const SymmetricTensor<Rational>&);

namespace {

template <Scalar T>
SymmetricTensor<T> tensor_from_json(const Json& doc) {
  const int m = require_int(doc, "m", "tensor");
  const int n = require_int(doc, "n", "tensor");
  if (m < 1 || n < 2) throw ParseError("tensor needs m >= 1 and n >= 2");
  SymmetricTensor<T> a(m, n);
  const Json& entries = require(doc, "entries", "tensor");
  if (!entries.is_array()) throw ParseError("tensor entries must be an array");
  std::vector<bool> seen(a.size(), false);
  for (const auto& e : entries) {
    std::vector<int> idx = int_list(require(e, "idx", "tensor entry"), "tensor entry field \"idx\"");
    if (static_cast<int>(idx.size()) != m) throw ParseError("tensor index has wrong length");
    for (int i : idx)
      if (i < 0 || i >= n) throw ParseError("tensor index out of range");
    if (!std::is_sorted(idx.begin(), idx.end())) throw ParseError("tensor indices must be sorted");
    const std::size_t r = a.layout().rank_of(idx);
    if (seen[r]) throw ParseError("duplicate tensor entry");
    seen[r] = true;
    a[r] = realize<T>(parse_scalar(require(e, "value", "tensor entry")));
  }
  return a;
}

}  // namespace

SymmetricTensor<double> tensor_from_json_float(const Json& doc) { return tensor_from_json<double>(doc); }
SymmetricTensor<Rational> tensor_from_json_exact(const Json& doc) { return tensor_from_json<Rational>(doc); }

TruncatedFamily family_from_json(const Json& doc) {
  TruncatedFamily f;
  f.n = require_int(doc, "n", "family");
  f.m_max = require_int(doc, "m_max", "family");
  f.pattern = int_list(require(doc, "pattern", "family"), "family pattern");
  if (doc.contains("sampler")) {
    const Json& s = doc["sampler"];
    TruncatedFamily::Sampler sampler;
    sampler.count = require_int(s, "count", "sampler");
    sampler.low = as_double(require(s, "low", "sampler"), "sampler low");
    sampler.high = as_double(require(s, "high", "sampler"), "sampler high");
    const Json& seed = require(s, "seed", "sampler");
    if (!seed.is_number_unsigned()) throw ParseError("sampler seed must be a nonnegative integer");
    sampler.seed = seed.get<std::uint64_t>();
    f.sampler = sampler;
  } else {
    const Json& grids = require(doc, "grids", "family");
    if (!grids.is_array()) throw ParseError("family grids must be an array of arrays");
    for (const auto& g : grids) {
      if (!g.is_array()) throw ParseError("family grids must be an array of arrays");
      std::vector<double> values;
      for (const auto& x : g) values.push_back(as_double(x, "grid value"));
      f.grids.push_back(std::move(values));
    }
  }
  try {
    f.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid family: ") + e.what());
  }
  return f;
}

Json to_json(const TruncatedFamily& family) {
  Json out;
  out["n"] = family.n;
  out["m_max"] = family.m_max;
  out["pattern"] = family.pattern;
  if (family.sampler) {
    out["sampler"] = {{"count", family.sampler->count},
                      {"low", family.sampler->low},
                      {"high", family.sampler->high},
                      {"seed", family.sampler->seed}};
  } else {
    out["grids"] = family.grids;
  }
  return out;
}

Json to_json(const ExplorerReport& report) {
  Json out;
  out["enumerated"] = report.enumerated;
  out["qualifying"] = report.candidates.size();
  Json list = Json::array();
  for (const auto& c : report.candidates) {
    Json fits = Json::array();
    for (const auto& f : c.fits) {
      fits.push_back({{"m", f.m}, {"r", f.r}, {"residual", f.residual}, {"converged", f.converged}});
    }
    list.push_back({{"id", c.id},
                    {"vector", c.vector},
                    {"strong_check", to_json(c.strong_check)},
                    {"fits", std::move(fits)},
                    {"all_converged", c.all_converged},
                    {"worst_residual", c.worst_residual}});
  }
  out["candidates"] = std::move(list);
  return out;
}

}  // namespace hmk::json_io
