/*
 * Copyright 2026 The sdcar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// JSON and CSV encodings. Complex data is always a pair of real arrays,
// {"re": [...], "im": [...]}, with "im" optional on input.

#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sdcar/kitaev.hpp"

namespace sdcar::io {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input.
class SchemaError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

inline Eigen::MatrixXd real_matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.front().is_array() ? j.front().size() : 0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw SchemaError(where + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number(row.at(static_cast<std::size_t>(c)), where);
  }
  return m;
}

inline Eigen::VectorXd real_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j.at(i), where);
  return v;
}

}  // namespace detail

inline Json to_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const Mat& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Json to_json(const Vec& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Mat matrix_from_json(const Json& j, const std::string& where = "matrix") {
  const Eigen::MatrixXd re = detail::real_matrix(detail::field(j, "re", where), where + ".re");
  Mat m = re.cast<cplx>();
  if (j.contains("im")) {
    const Eigen::MatrixXd im = detail::real_matrix(j.at("im"), where + ".im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw SchemaError(where + ": re/im shapes differ");
    m.imag() = im;
  }
  return m;
}

inline Vec vector_from_json(const Json& j, const std::string& where = "vector") {
  const Eigen::VectorXd re = detail::real_vector(detail::field(j, "re", where), where + ".re");
  Vec v = re.cast<cplx>();
  if (j.contains("im")) {
    const Eigen::VectorXd im = detail::real_vector(j.at("im"), where + ".im");
    if (im.size() != re.size()) throw SchemaError(where + ": re/im lengths differ");
    v.imag() = im;
  }
  return v;
}

inline cplx complex_from_json(const Json& j, const std::string& where = "complex") {
  if (j.is_number()) return j.get<double>();
  const double re = detail::number(detail::field(j, "re", where), where + ".re");
  const double im = j.contains("im") ? detail::number(j.at("im"), where + ".im") : 0.0;
  return {re, im};
}

/// {"n": int, "gamma": matrix?}; without gamma the standard space.
inline SelfDualSpace space_from_json(const Json& j) {
  const Json& n = detail::field(j, "n", "space");
  if (!n.is_number_integer() || n.get<long long>() < 1) throw SchemaError("space.n must be a positive integer");
  const auto modes = static_cast<std::size_t>(n.get<long long>());
  if (!j.contains("gamma")) return SelfDualSpace::standard(modes);
  Mat gamma = matrix_from_json(j.at("gamma"), "gamma");
  if (gamma.rows() != static_cast<Eigen::Index>(2 * modes)) throw SchemaError("gamma must be 2n x 2n");
  return SelfDualSpace::from_gamma(std::move(gamma));
}

inline Json space_to_json(const SelfDualSpace& s) {
  Json j{{"n", s.modes()}};
  if (!s.is_standard()) j["gamma"] = to_json(s.gamma());
  return j;
}

/// Array of {"re","im"} vectors.
inline MonomialWord word_from_json(const Json& j, const std::string& where = "word") {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of vectors");
  MonomialWord w;
  for (std::size_t k = 0; k < j.size(); ++k) w.factors.push_back(vector_from_json(j.at(k), where + "[" + std::to_string(k) + "]"));
  return w;
}

inline Json word_to_json(const MonomialWord& w) {
  Json j = Json::array();
  for (const auto& v : w.factors) j.push_back(to_json(v));
  return j;
}

inline Json to_json(const Violation& v) {
  return Json{{"invariant", v.invariant}, {"residual", v.residual}, {"tolerance", v.tolerance}};
}

inline Json to_json(const IndexReport& r) {
  return Json{{"n_value", r.n_value},
              {"n_rounded", r.n_rounded},
              {"n_residual", r.n_residual},
              {"dim_intersection", r.dim_intersection},
              {"sigma_proj", r.sigma_proj},
              {"sigma_state", r.sigma_state},
              {"hs_norm", r.hs_norm},
              {"f_norm", r.f_norm},
              {"lemma_consistent", r.lemma_consistent}};
}

inline Json to_json(const KitaevParams& p) {
  return Json{{"L", p.sites}, {"t", p.t}, {"delta", p.delta}, {"mu", p.mu}, {"boundary", std::string(to_string(p.boundary))}};
}

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) { return Json(x).dump(); }

inline const char* kSweepCsvHeader = "mu,sigma_proj,sigma_state,n_value,dim,hs_norm,f_norm,lemma_consistent,gap,status";

inline std::string csv_row(const SweepRow& row) {
  std::ostringstream out;
  out << format_double(row.a.mu) << ',';
  if (row.report) {
    const auto& r = *row.report;
    out << r.sigma_proj << ',' << r.sigma_state << ',' << format_double(r.n_value) << ',' << r.dim_intersection << ','
        << format_double(r.hs_norm) << ',' << format_double(r.f_norm) << ',' << (r.lemma_consistent ? "true" : "false");
  } else {
    out << ",,,,,,";
  }
  std::string status = row.status;
  for (char& c : status)
    if (c == ',' || c == '\n') c = ';';
  out << ',' << format_double(row.gap) << ',' << status;
  return out.str();
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& row : rows) os << csv_row(row) << '\n';
}

}  // namespace sdcar::io
