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

// Verb dispatch behind the sdcar command line. Every verb produces
//   {"verb", "seed", "checks": [{"name", "pass", "residual", "tolerance"}], "data"}
// and the exit status 0 (all checks pass), 1 (some check failed) or 2 (bad input).

#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "sdcar/gns.hpp"
#include "sdcar/io.hpp"

namespace sdcar::cli {

using io::Json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

inline constexpr std::array<std::string_view, 6> kVerbs{"validate", "pfaffian", "index", "fock-check", "gns-check", "sweep"};

struct SweepOptions {
  std::string model = "kitaev";
  std::size_t sites = 8;
  double t = 1.0;
  double delta = 1.0;
  std::string mu_range = "-4:4:50";
  std::string bc_pair = "periodic,antiperiodic";
};

struct RunConfig {
  std::string verb;
  std::vector<std::string> inputs;          // JSON input file; "-" reads stdin
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // per-check overrides, keyed by check name
  std::string output;                       // report path; empty writes to the stream
  std::string csv_output;                   // sweep CSV path
  SweepOptions sweep;
};

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

class Report {
 public:
  explicit Report(const RunConfig& cfg) : cfg_(cfg) {}

  /// Passes when residual <= tolerance (after overrides); NaN never passes.
  void check(const std::string& name, double residual, double tolerance) {
    if (auto it = cfg_.tolerances.find(name); it != cfg_.tolerances.end()) tolerance = it->second;
    checks_.push_back({name, residual <= tolerance, residual, tolerance});
  }

  Json& data() { return data_; }
  const std::vector<Check>& checks() const { return checks_; }

  bool all_pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  Json to_json() const {
    Json checks = Json::array();
    for (const auto& c : checks_)
      checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"tolerance", c.tolerance}});
    return Json{{"verb", cfg_.verb}, {"seed", cfg_.seed}, {"checks", std::move(checks)}, {"data", data_}};
  }

 private:
  const RunConfig& cfg_;
  std::vector<Check> checks_;
  Json data_ = Json::object();
};

namespace detail {

inline Json load_input(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw io::SchemaError(cfg.verb + ": an input JSON file is required");
  const auto& path = cfg.inputs.front();
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw io::SchemaError("cannot open input file '" + path + "'");
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

inline BasisProjection projection_field(const Json& j, const SelfDualSpace& space, const char* key) {
  if (!j.contains(key)) {
    if (!space.is_standard()) throw io::SchemaError(std::string("field '") + key + "' is required on a non-standard space");
    return BasisProjection::standard(space.modes());
  }
  return BasisProjection::make(space, io::matrix_from_json(j.at(key), key));
}

inline void record(Report& report, const std::string& prefix, const ValidationReport& measured) {
  for (const auto& v : measured) report.check(prefix + "." + v.invariant, v.residual, v.tolerance);
}

inline void run_validate(const Json& in, Report& report) {
  if (!in.is_object() || !in.contains("n")) throw io::SchemaError("validate: field 'n' is required");
  const auto& n = in.at("n");
  if (!n.is_number_integer() || n.get<long long>() < 1) throw io::SchemaError("space.n must be a positive integer");
  const auto modes = static_cast<std::size_t>(n.get<long long>());
  const auto standard = SelfDualSpace::standard(modes);
  Mat gamma = in.contains("gamma") ? io::matrix_from_json(in.at("gamma"), "gamma") : standard.gamma();
  const auto gamma_report = validate_gamma(gamma, true);
  record(report, "space", gamma_report);
  for (const auto& v : gamma_report)
    if (v.residual > v.tolerance) return;  // nothing else is meaningful on a broken Γ
  const auto space = io::space_from_json(in);

  std::size_t objects = 0;
  auto each = [&](const char* key, auto&& validator) {
    if (!in.contains(key)) return;
    ++objects;
    const Mat m = io::matrix_from_json(in.at(key), key);
    const auto measured = validator(space, m);
    record(report, key, measured);
    Json failed = Json::array();
    for (const auto& v : measured)
      if (v.residual > v.tolerance) failed.push_back(io::to_json(v));
    report.data()[key] = Json{{"violations", std::move(failed)}};
  };
  each("projection", [](const SelfDualSpace& s, const Mat& m) { return validate_projection(s, m, true); });
  each("symbol", [](const SelfDualSpace& s, const Mat& m) { return validate_symbol(s, m, true); });
  each("bogoliubov", [](const SelfDualSpace& s, const Mat& m) { return validate_bogoliubov(s, m, true); });
  each("hamiltonian", [](const SelfDualSpace& s, const Mat& m) { return validate_hamiltonian(s, m, true); });
  report.data()["space"] = io::space_to_json(space);
  report.data()["objects"] = objects;
}

inline void run_pfaffian(const Json& in, Report& report) {
  const Mat m = io::matrix_from_json(in.is_object() && in.contains("matrix") ? in.at("matrix") : in, "matrix");
  const cplx pf = pfaffian(m);
  report.data()["order"] = m.rows();
  report.data()["pfaffian"] = io::to_json(pf);
  const double scale = std::max(1.0, std::abs(pf));
  if (m.rows() <= 8) {
    const cplx def = pfaffian_definition(m);
    report.data()["definition"] = io::to_json(def);
    report.check("agrees_with_definition", std::abs(pf - def) / std::max(1.0, std::abs(def)), 1e-9);
  }
  const cplx det = m.rows() == 0 ? cplx(1.0) : m.determinant();
  report.check("square_equals_determinant", std::abs(pf * pf - det) / std::max(scale * scale, std::abs(det)), 1e-8);
}

inline std::pair<BasisProjection, BasisProjection> index_pair(const Json& in, Json& fixture) {
  if (in.contains("fixture")) {
    const auto name = in.at("fixture").get<std::string>();
    if (name == "theta_family") {
      const double theta = in.contains("theta") ? io::detail::number(in.at("theta"), "theta") : std::numbers::pi / 6.0;
      fixture = Json{{"name", name}, {"theta", theta}};
      return theta_family(theta);
    }
    if (name == "k_flip") {
      const auto space = io::space_from_json(in);
      std::vector<std::size_t> modes;
      if (in.contains("modes")) {
        for (const auto& m : in.at("modes")) {
          if (!m.is_number_integer() || m.get<long long>() < 0) throw io::SchemaError("modes must be non-negative integers");
          modes.push_back(static_cast<std::size_t>(m.get<long long>()));
        }
      } else {
        modes.push_back(0);
      }
      fixture = Json{{"name", name}, {"n", space.modes()}, {"modes", modes}};
      auto p1 = BasisProjection::standard(space.modes());
      return {p1, flip_modes(p1, modes)};
    }
    throw io::SchemaError("unknown fixture '" + name + "'");
  }
  const auto space = io::space_from_json(in);
  if (!in.contains("p1") || !in.contains("p2")) throw io::SchemaError("index: fields 'p1' and 'p2' are required");
  return {BasisProjection::make(space, io::matrix_from_json(in.at("p1"), "p1")),
          BasisProjection::make(space, io::matrix_from_json(in.at("p2"), "p2"))};
}

inline void run_index(const Json& in, Report& report) {
  if (!in.is_object()) throw io::SchemaError("index: expected a JSON object");
  Json fixture;
  const auto [p1, p2] = index_pair(in, fixture);
  const auto r = index_report(p1, p2);
  const auto diag = intersection_diagnostics(p1, p2, true);
  const auto w1 = state_from_projection(p1), w2 = state_from_projection(p2);
  const cplx literal = n_quantity_form(w1, w2);

  Json data = io::to_json(r);
  data["n_literal"] = io::to_json(literal);
  data["ill_conditioned"] = diag.ill_conditioned;
  data["nearest_unit_gap"] = diag.nearest_outside;
  data["rank_intersection"] = diag.rank_count;
  Json spectrum = Json::array();
  for (Eigen::Index i = 0; i < diag.eigenvalues.size(); ++i) spectrum.push_back(diag.eigenvalues(i));
  data["spectrum"] = std::move(spectrum);
  if (!fixture.is_null()) data["fixture"] = fixture;
  report.data() = std::move(data);

  report.check("f_norm_squared_eq_2N", std::abs(r.f_norm * r.f_norm - 2.0 * r.n_value), tol::kNormIdentity);
  report.check("hs_norm_eq_f_norm", std::abs(r.hs_norm - r.f_norm), tol::kNormIdentity);
  report.check("literal_sum_eq_trace", std::abs(literal - cplx(r.n_value)), tol::kNormIdentity);
  report.check("lemma_n_equals_dim", std::abs(r.n_value - static_cast<double>(r.dim_intersection)), tol::kIntegerResidual);
}

inline void run_fock_check(const Json& in, Report& report, std::uint64_t seed) {
  const auto space = io::space_from_json(in);
  const auto p = projection_field(in, space, "projection");
  const auto samples = in.value("samples", 50);
  const auto words = in.value("words", 50);
  if (samples < 0 || words < 0) throw io::SchemaError("samples and words must be non-negative");
  const auto fs = FockSpace::over(p);
  const Eigen::Index dim = space.dim();
  const Mat id = Mat::Identity(fs.dim(), fs.dim());

  Rng rng(seed, "fock-check");
  double car = 0.0, pair = 0.0, star = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec f1 = rng.vector(dim), f2 = rng.vector(dim);
    const Mat b1 = fock_representation(fs, f1), b2 = fock_representation(fs, f2);
    car = std::max(car, (b1 * b2.adjoint() + b2.adjoint() * b1 - f1.dot(f2) * id).norm());
    pair = std::max(pair, (b1 * b2 + b2 * b1 - f1.dot(space.conjugate(f2)) * id).norm());
    star = std::max(star, (b1.adjoint() - fock_representation(fs, space.conjugate(f1))).norm());
  }
  const auto state = state_from_projection(p);
  double moments = 0.0;
  for (int w = 0; w < words; ++w) {
    MonomialWord word;
    const std::size_t len = rng.index(7);
    for (std::size_t k = 0; k < len; ++k) word.factors.push_back(rng.vector(dim).normalized());
    moments = std::max(moments, std::abs(moment(state, word) - vacuum_expectation(fs, word)));
  }
  report.data() = Json{{"n", space.modes()}, {"fock_dimension", fs.dim()}, {"samples", samples}, {"words", words}};
  report.check("car", car, 1e-10);
  report.check("car_pair", pair, 1e-10);
  report.check("adjoint_is_gamma", star, 1e-10);
  report.check("moment_equals_vacuum_expectation", moments, 1e-9);
}

inline void run_gns_check(const Json& in, Report& report) {
  const auto space = io::space_from_json(in);
  const auto p = projection_field(in, space, "projection");
  const auto gns = gns_construct(state_from_projection(p));
  const auto fs = FockSpace::over(p);
  const auto target = static_cast<double>(fs.dim());
  Json data{{"n", space.modes()},
            {"gns_dimension", gns.rank},
            {"gram_min_eigenvalue", gns.gram_min_eigenvalue},
            {"well_definedness_residual", gns.well_definedness_residual}};
  report.check("dimension_is_2_pow_n", std::abs(static_cast<double>(gns.rank) - target), 0.0);
  report.check("gram_positive", std::max(0.0, -gns.gram_min_eigenvalue), 1e-10);
  report.check("well_defined", gns.well_definedness_residual, tol::kGns);
  if (static_cast<double>(gns.rank) == target) {
    const auto u = intertwiner_to_fock(p, gns, fs);
    const auto split = gns_parity_split(gns, u, fs);
    data["unitarity_residual"] = u.unitarity_residual;
    data["vacuum_residual"] = u.vacuum_residual;
    data["intertwining_residual"] = u.intertwining_residual;
    data["even_dimension"] = split.even_dim;
    data["odd_dimension"] = split.odd_dim;
    data["parity_block_residual"] = split.block_residual;
    report.check("unitary", u.unitarity_residual, tol::kGns);
    report.check("cyclic_to_vacuum", u.vacuum_residual, tol::kGns);
    report.check("intertwining", u.intertwining_residual, tol::kGns);
    report.check("parity_complement", split.complement_residual, tol::kGns);
    report.check("parity_blocks", split.block_residual, tol::kGns);
    report.check("even_block_unitary", split.even_unitarity_residual, tol::kGns);
    report.check("odd_block_unitary", split.odd_unitarity_residual, tol::kGns);
    report.check("parity_invariance", split.invariance_residual, tol::kGns);
  }
  report.data() = std::move(data);
}

struct MuRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 1;
};

inline MuRange parse_mu_range(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (b == std::string::npos) throw io::SchemaError("--mu-range expects lo:hi:steps");
  try {
    std::size_t used = 0;
    MuRange r;
    const std::string lo = s.substr(0, a), hi = s.substr(a + 1, b - a - 1), steps = s.substr(b + 1);
    r.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    r.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    const long long n = std::stoll(steps, &used);
    if (used != steps.size() || n < 1) throw std::invalid_argument(steps);
    r.steps = static_cast<std::size_t>(n);
    return r;
  } catch (const std::logic_error&) {
    throw io::SchemaError("--mu-range expects lo:hi:steps, got '" + s + "'");
  }
}

inline std::pair<Boundary, Boundary> parse_bc_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw io::SchemaError("--bc-pair expects two comma-separated boundaries");
  try {
    return {boundary_from_string(s.substr(0, comma)), boundary_from_string(s.substr(comma + 1))};
  } catch (const DimensionError& e) {
    throw io::SchemaError(e.what());
  }
}

inline void run_sweep(const RunConfig& cfg, Report& report) {
  const auto& opt = cfg.sweep;
  if (opt.model != "kitaev") throw io::SchemaError("unknown model '" + opt.model + "'");
  if (opt.sites < 2) throw io::SchemaError("--L must be at least 2");
  const auto range = parse_mu_range(opt.mu_range);
  const auto [first, second] = parse_bc_pair(opt.bc_pair);
  KitaevParams base;
  base.sites = opt.sites;
  base.t = opt.t;
  base.delta = opt.delta;
  const auto rows = sweep(mu_grid(base, range.lo, range.hi, range.steps, first, second));

  if (!cfg.csv_output.empty()) {
    std::ofstream csv(cfg.csv_output);
    if (!csv) throw io::SchemaError("cannot write '" + cfg.csv_output + "'");
    io::write_csv(csv, rows);
  }

  Json out = Json::array();
  std::size_t refused = 0;
  double identity = 0.0;
  for (const auto& row : rows) {
    Json j{{"mu", row.a.mu}, {"gap", row.gap}, {"status", row.status}};
    if (row.report) {
      j["report"] = io::to_json(*row.report);
      const auto& r = *row.report;
      identity = std::max({identity, std::abs(r.f_norm * r.f_norm - 2.0 * r.n_value), std::abs(r.hs_norm - r.f_norm)});
    } else {
      ++refused;
    }
    out.push_back(std::move(j));
  }
  report.data() = Json{{"model", opt.model},
                       {"L", opt.sites},
                       {"t", opt.t},
                       {"delta", opt.delta},
                       {"bc_pair", {std::string(to_string(first)), std::string(to_string(second))}},
                       {"rows", std::move(out)}};
  report.check("all_points_gapped", static_cast<double>(refused), 0.0);
  report.check("norm_identity", identity, tol::kNormIdentity);
}

}  // namespace detail

inline bool is_verb(std::string_view v) {
  for (auto k : kVerbs)
    if (k == v) return true;
  return false;
}

/// Runs one verb, writing the JSON report to `out` (or cfg.output) and
/// diagnostics to `err`; returns the exit status.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report report(cfg);
  if (!is_verb(cfg.verb)) {
    err << "error: unknown verb '" << cfg.verb << "'\n";
    return kExitInput;
  }
  try {
    if (cfg.verb == "sweep") {
      detail::run_sweep(cfg, report);
    } else {
      const Json in = detail::load_input(cfg);
      if (cfg.verb == "validate") detail::run_validate(in, report);
      else if (cfg.verb == "pfaffian") detail::run_pfaffian(in, report);
      else if (cfg.verb == "index") detail::run_index(in, report);
      else if (cfg.verb == "fock-check") detail::run_fock_check(in, report, cfg.seed);
      else detail::run_gns_check(in, report);
    }
  } catch (const ConsistencyError& e) {
    report.check("consistency", e.residual(), 0.0);
    report.data()["error"] = e.what();
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  const std::string text = report.to_json().dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.output);
    if (!file) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kExitInput;
    }
    file << text;
  }
  return report.all_pass() ? kExitPass : kExitFail;
}

}  // namespace sdcar::cli
