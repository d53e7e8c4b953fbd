// Copyright 2026 The bewitness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bewitness/kernel/matrix.hpp"
#include "bewitness/product.hpp"
#include "bewitness/rangecrit.hpp"
#include "bewitness/states.hpp"
#include "bewitness/upb.hpp"
#include "bewitness/witness.hpp"

// JSON encodings shared by every file the CLI reads or writes. A complex
// scalar is [re, im]; a matrix is {"rows": n, "cols": m, "data": [...]} in
// row-major order.

namespace bewitness::io {

using nlohmann::json;

class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}
inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
  return j.get<double>();
}
inline std::size_t count(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw FormatError(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}
}  // namespace detail

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("complex scalar must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(std::span<const Complex> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

inline ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("vector must be an array of [re, im] pairs");
  ComplexVector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(complex_from_json(x));
  return v;
}

inline json to_json(const ComplexMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", to_json(m.data())}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t rows = detail::count(detail::field(j, "rows"), "rows");
  const std::size_t cols = detail::count(detail::field(j, "cols"), "cols");
  ComplexVector data = vector_from_json(detail::field(j, "data"));
  if (data.size() != rows * cols) throw FormatError("matrix data length does not match rows x cols");
  return {rows, cols, std::move(data)};
}

inline json to_json(const BipartiteDims& d) { return json::array({d.dA, d.dB}); }

inline BipartiteDims dims_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("dims must be [dA, dB]");
  return {detail::count(j[0], "dA"), detail::count(j[1], "dB")};
}

inline json to_json(const ProductVector& p) { return json{{"psiA", to_json(p.psiA)}, {"phiB", to_json(p.phiB)}}; }

inline ProductVector product_from_json(const json& j) {
  return {vector_from_json(detail::field(j, "psiA")), vector_from_json(detail::field(j, "phiB"))};
}

// UPB catalog: {"dims": [dA, dB], "real": bool, "members": [{"psiA", "phiB"}, ...]}

inline json to_json(const UpbSet& s) {
  json members = json::array();
  for (const auto& m : s.members()) members.push_back(to_json(m));
  return json{{"dims", to_json(s.dims())}, {"real", s.is_real()}, {"members", members}};
}

inline UpbSet upb_from_json(const json& j) {
  const BipartiteDims dims = dims_from_json(detail::field(j, "dims"));
  const json& real = detail::field(j, "real");
  if (!real.is_boolean()) throw FormatError("\"real\" must be a boolean");
  const json& members = detail::field(j, "members");
  if (!members.is_array()) throw FormatError("\"members\" must be an array");
  std::vector<ProductVector> ms;
  for (const auto& m : members) ms.push_back(product_from_json(m));
  UpbSet s(std::move(ms), dims);
  if (real.get<bool>() && !s.is_real()) throw FormatError("catalog is flagged real but has complex coefficients");
  return s;
}

inline json to_json(const UnextendibilityCertificate& c) {
  return json{{"lambda_hat", c.lambda_hat},
              {"is_upb_evidence", c.is_upb_evidence},
              {"threshold", c.threshold},
              {"argmin", to_json(c.argmin)}};
}

// State file: {"dims", "matrix", "provenance": {"family", "upb", "G", "omega"}}.
// G is 1-based, matching the member numbering of the catalog.

struct Provenance {
  std::string family;
  std::optional<UpbSet> upb;
  std::vector<std::size_t> group;
  double omega = 0.0;
};

struct StateFile {
  DensityOperator rho;
  Provenance provenance;
};

inline json to_json(const StateFile& f) {
  json prov{{"family", f.provenance.family}, {"G", f.provenance.group}, {"omega", f.provenance.omega}};
  prov["upb"] = f.provenance.upb ? to_json(*f.provenance.upb) : json(nullptr);
  return json{{"dims", to_json(f.rho.dims())}, {"matrix", to_json(f.rho.matrix())}, {"provenance", prov}};
}

inline StateFile state_from_json(const json& j) {
  const BipartiteDims dims = dims_from_json(detail::field(j, "dims"));
  DensityOperator rho(matrix_from_json(detail::field(j, "matrix")), dims);
  Provenance p;
  if (j.contains("provenance")) {
    const json& pj = j.at("provenance");
    if (pj.contains("family") && pj.at("family").is_string()) p.family = pj.at("family").get<std::string>();
    if (pj.contains("upb") && !pj.at("upb").is_null()) p.upb = upb_from_json(pj.at("upb"));
    if (pj.contains("G")) {
      if (!pj.at("G").is_array()) throw FormatError("\"G\" must be an array");
      for (const auto& g : pj.at("G")) p.group.push_back(detail::count(g, "G entry"));
    }
    if (pj.contains("omega")) p.omega = detail::number(pj.at("omega"), "omega");
  }
  return {std::move(rho), std::move(p)};
}

// Witness file: {"family", "lambda_hat", "detection_threshold", "gamma_sq",
// "operator", "upb"}; "phi" is added for the projector family.

inline json to_json(const WitnessSpec& w, const UpbSet& s) {
  json out{{"family", to_string(w.family)},
           {"lambda_hat", w.lambda_hat},
           {"detection_threshold", w.detection_threshold},
           {"gamma_sq", w.gamma_sq ? json(*w.gamma_sq) : json(nullptr)},
           {"operator", to_json(w.op)},
           {"upb", to_json(s)}};
  if (w.phi) out["phi"] = to_json(*w.phi);
  if (w.warning) out["warning"] = *w.warning;
  return out;
}

inline WitnessSpec witness_from_json(const json& j) {
  WitnessSpec w;
  const json& fam = detail::field(j, "family");
  if (fam == "basic") {
    w.family = WitnessFamily::basic;
  } else if (fam == "projector") {
    w.family = WitnessFamily::projector;
  } else {
    throw FormatError("unknown witness family");
  }
  w.lambda_hat = detail::number(detail::field(j, "lambda_hat"), "lambda_hat");
  w.detection_threshold = detail::number(detail::field(j, "detection_threshold"), "detection_threshold");
  const json& g = detail::field(j, "gamma_sq");
  if (!g.is_null()) w.gamma_sq = detail::number(g, "gamma_sq");
  w.op = matrix_from_json(detail::field(j, "operator"));
  w.dims = upb_from_json(detail::field(j, "upb")).dims();
  if (j.contains("phi")) w.phi = vector_from_json(j.at("phi"));
  if (j.contains("warning") && j.at("warning").is_string()) w.warning = j.at("warning").get<std::string>();
  return w;
}

// Findings file: {"projector_trace", "clusters": [{"psiA", "phiB", "fidelity"}]}

inline json to_json(const ProductStateFindings& f) {
  json clusters = json::array();
  for (std::size_t k = 0; k < f.states.size(); ++k) {
    json c = to_json(f.states[k]);
    c["fidelity"] = f.fidelities[k];
    clusters.push_back(std::move(c));
  }
  return json{{"projector_trace", f.projector_trace}, {"clusters", clusters}};
}

inline ProductStateFindings findings_from_json(const json& j) {
  ProductStateFindings f;
  f.projector_trace = detail::number(detail::field(j, "projector_trace"), "projector_trace");
  const json& clusters = detail::field(j, "clusters");
  if (!clusters.is_array()) throw FormatError("\"clusters\" must be an array");
  for (const auto& c : clusters) {
    f.states.push_back(product_from_json(c));
    f.fidelities.push_back(detail::number(detail::field(c, "fidelity"), "fidelity"));
  }
  return f;
}

inline json to_json(const RcVerdict& v) {
  return json{{"passed", v.passed},
              {"range_dim", v.range_dim},
              {"product_span_rank", v.product_span_rank},
              {"pt_range_dim", v.pt_range_dim},
              {"conjugated_span_rank", v.conjugated_span_rank},
              {"max_range_distance", v.max_range_distance},
              {"max_pt_range_distance", v.max_pt_range_distance}};
}

inline RcVerdict rc_verdict_from_json(const json& j) {
  RcVerdict v;
  const json& passed = detail::field(j, "passed");
  if (!passed.is_boolean()) throw FormatError("\"passed\" must be a boolean");
  v.passed = passed.get<bool>();
  v.range_dim = detail::count(detail::field(j, "range_dim"), "range_dim");
  v.product_span_rank = detail::count(detail::field(j, "product_span_rank"), "product_span_rank");
  v.pt_range_dim = detail::count(detail::field(j, "pt_range_dim"), "pt_range_dim");
  v.conjugated_span_rank = detail::count(detail::field(j, "conjugated_span_rank"), "conjugated_span_rank");
  v.max_range_distance = detail::number(detail::field(j, "max_range_distance"), "max_range_distance");
  v.max_pt_range_distance = detail::number(detail::field(j, "max_pt_range_distance"), "max_pt_range_distance");
  return v;
}

}  // namespace bewitness::io
