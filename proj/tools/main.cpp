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

// sdcar command line: thin CLI11 front end over sdcar::cli::run.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sdcar/cli.hpp"

namespace {

void add_common(CLI::App* sub, sdcar::cli::RunConfig& cfg, std::vector<std::string>& tolerances, bool takes_input) {
  if (takes_input) sub->add_option("input", cfg.inputs, "input JSON file, '-' for stdin")->required()->expected(1);
  sub->add_option("--seed", cfg.seed, "random seed (default 0)");
  sub->add_option("--tol", tolerances, "tolerance override NAME=VALUE (repeatable)");
  sub->add_option("--report", cfg.output, "write the JSON report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  sdcar::cli::RunConfig cfg;
  std::vector<std::string> tolerances;
  CLI::App app{"Self-dual CAR algebra toolkit: quasi-free states, Z2 indices, Fock and GNS checks"};
  app.require_subcommand(1);

  add_common(app.add_subcommand("validate", "check the invariants of a space, projection, symbol, transform or Hamiltonian"),
             cfg, tolerances, true);
  add_common(app.add_subcommand("pfaffian", "Pfaffian of a skew-symmetric matrix"), cfg, tolerances, true);
  add_common(app.add_subcommand("index", "both Z2 indices and the norm identities for a projection pair"), cfg,
             tolerances, true);
  add_common(app.add_subcommand("fock-check", "CAR and moment suites in the Fock representation"), cfg, tolerances,
             true);
  add_common(app.add_subcommand("gns-check", "GNS construction, intertwiner and parity blocks"), cfg, tolerances, true);
  auto* sweep = app.add_subcommand("sweep", "index sweep over Kitaev chain ground states");
  add_common(sweep, cfg, tolerances, false);
  sweep->add_option("--model", cfg.sweep.model, "lattice model")->capture_default_str();
  sweep->add_option("--L", cfg.sweep.sites, "number of sites")->capture_default_str();
  sweep->add_option("--t", cfg.sweep.t, "hopping")->capture_default_str();
  sweep->add_option("--delta", cfg.sweep.delta, "pairing")->capture_default_str();
  sweep->add_option("--mu-range", cfg.sweep.mu_range, "lo:hi:steps")->capture_default_str();
  sweep->add_option("--bc-pair", cfg.sweep.bc_pair, "two boundaries, e.g. periodic,antiperiodic")->capture_default_str();
  sweep->add_option("--out", cfg.csv_output, "CSV output path");

  if (argc > 1 && argv[1][0] != '-' && !sdcar::cli::is_verb(argv[1])) {
    std::cerr << "error: unknown verb '" << argv[1] << "'\n";
    return sdcar::cli::kExitInput;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sdcar::cli::kExitInput;
  }

  cfg.verb = app.get_subcommands().front()->get_name();
  for (const auto& t : tolerances) {
    const auto eq = t.find('=');
    try {
      if (eq == std::string::npos) throw std::invalid_argument(t);
      cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    } catch (const std::logic_error&) {
      std::cerr << "error: --tol expects NAME=VALUE, got '" << t << "'\n";
      return sdcar::cli::kExitInput;
    }
  }
  return sdcar::cli::run(cfg, std::cout, std::cerr);
}
