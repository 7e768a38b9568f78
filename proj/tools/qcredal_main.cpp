/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Command-line front end: load a scenario file, run one command against it,
// print the report on stdout. Exit code 0 on success (coherent for `check`),
// 2 when `check` finds incoherence, 1 on any error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcredal/scenario_io.hpp"

int main(int argc, char **argv) {
  CLI::App app{"qcredal: desirable gambles, credal sets and previsions over "
               "Hermitian matrices"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string format = "text";
  std::vector<std::string> tol_flags;
  uint64_t seed = 0;
  bool seed_set = false;

  const std::vector<std::string> commands = {
      "check",    "prevision", "member",       "condition",
      "marginal", "extend",    "evolve",       "born",
      "frechet",  "independence", "simulate",  "pauli"};
  for (const auto &cmd : commands) {
    CLI::App *sub = app.add_subcommand(cmd);
    sub->add_option("--scenario", scenario_path, "scenario JSON file")
        ->required();
    sub->add_option("--format", format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--tol", tol_flags,
                    "tolerance override, e.g. --tol tol_herm=1e-10");
    sub->add_option_function<uint64_t>(
        "--seed",
        [&](const uint64_t &v) {
          seed = v;
          seed_set = true;
        },
        "override the scenario seed");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(scenario_path);
    if (!in)
      throw qcredal::Error("cannot open scenario file: " + scenario_path);
    std::stringstream buf;
    buf << in.rdbuf();

    std::vector<std::pair<std::string, double>> overrides;
    for (const auto &flag : tol_flags) {
      const auto eq = flag.find('=');
      if (eq == std::string::npos)
        throw qcredal::Error("--tol expects name=value, got: " + flag);
      overrides.push_back({flag.substr(0, eq), std::stod(flag.substr(eq + 1))});
    }

    qcredal::io::ParsedScenario s =
        qcredal::io::parse_scenario(buf.str(), overrides);
    if (seed_set)
      s.seed = seed;

    qcredal::io::DispatchResult res = qcredal::io::dispatch(command, s);
    std::cout << qcredal::io::emit_report(res.report, format);
    return res.exit_code;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
