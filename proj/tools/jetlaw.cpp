/*
 * Copyright 2026 The jetlaw Authors
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

// jetlaw command line front end.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "jetlaw/cli.hpp"
#include "jetlaw/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"jetlaw: nonlinear self-adjointness and conservation laws for u_t = f(u)u_x + g(u)u_xx - h(u)u_x^2"};
  app.require_subcommand(1);
  jetlaw::cli::RunConfig config;
  std::string out_path;

  for (const std::string& name : jetlaw::cli::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--eq", config.equation, "equation F (expression, or builtin ks / ks-general)");
    sub->add_option("--spec", config.spec_file, "JSON file with string entries f, g, h");
    sub->add_option("--phi", config.phi, "substitution nu = phi(t, x, u)");
    sub->add_option("--out", out_path, "write the report to this file instead of stdout");
    sub->add_option("--format", config.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    if (name == "conslaw" || name == "symmetry-check" || name == "verify-numeric") {
      sub->add_option("--symmetry", config.symmetries, "X1, X2, X3, Xu or 'xi_t, xi_x, eta' (repeatable)");
    }
    if (name == "verify-numeric") {
      sub->add_option("--grid", config.grid, "cells on the coarsest grid (default 64)");
      sub->add_option("--refinements", config.refinements, "number of grids in the ladder (default 3)");
      sub->add_option("--tfinal", config.tfinal, "final time (default 1)");
      sub->add_option("--csv", config.csv, "write the pointwise residual on the finest grid as CSV");
      sub->add_flag("--corrupt", config.corrupt, "add a deliberately corrupted vector (expected to fail)");
    }
    sub->callback([&config, name] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const jetlaw::cli::Report report = jetlaw::cli::run(config);
    const std::string body = config.format == "text" ? report.text : report.json.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path);
      if (!out) throw jetlaw::InvalidInput("cannot write " + out_path);
      out << body;
    }
    return report.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "jetlaw: " << e.what() << "\n";
    return 2;
  }
}
