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

#ifndef JETLAW_CLI_HPP
#define JETLAW_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace jetlaw::cli {

inline constexpr const char* kReportSchema = "jetlaw.report/1";

struct RunConfig {
  std::string command;  // adjoint | classify | conslaw | symmetry-check | verify-numeric
  std::optional<std::string> equation;
  std::optional<std::string> spec_file;
  std::vector<std::string> symmetries;
  std::optional<std::string> phi;
  std::optional<int> grid;
  std::optional<int> refinements;
  std::optional<double> tfinal;
  std::optional<std::string> csv;
  bool corrupt = false;
  std::string format = "json";
};

struct Report {
  nlohmann::json json;
  std::string text;
  [[nodiscard]] bool pass() const { return json.value("pass", false); }
};

/// Checks the config (exactly one equation source, numerics flags only for
/// verify-numeric) and runs the command. Throws jetlaw::Error subclasses on
/// bad input.
Report run(const RunConfig& config);

std::vector<std::string> commands();

}  // namespace jetlaw::cli

#endif  // JETLAW_CLI_HPP
