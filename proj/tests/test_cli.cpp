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

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "jetlaw/cli.hpp"
#include "jetlaw/error.hpp"

using namespace jetlaw;
using jetlaw::cli::RunConfig;

namespace {

RunConfig config(const std::string& command, const std::string& eq) {
  RunConfig c;
  c.command = command;
  c.equation = eq;
  return c;
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = std::string(std::getenv("TMPDIR") != nullptr ? std::getenv("TMPDIR") : "/tmp") +
                           "/jetlaw_test_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("report envelope") {
  const cli::Report r = cli::run(config("adjoint", "ks-general"));
  CHECK(r.json["schema"] == cli::kReportSchema);
  CHECK(r.json["command"] == "adjoint");
  CHECK(r.json["inputs"]["eq"] == "ks-general");
  CHECK(r.json["results"].is_array());
  CHECK(r.json["pass"] == true);
  CHECK(r.pass());
  CHECK(r.json["results"][0]["reference_match"] == true);
  CHECK(r.text.find("PASS") != std::string::npos);
}

TEST_CASE("adjoint of an inline equation") {
  const cli::Report r = cli::run(config("adjoint", "u_t - u_xx"));
  CHECK(r.json["results"][0]["adjoint"] == "-nu_t - nu_xx");
  CHECK(r.pass());
}

TEST_CASE("equation source must be unique and nonempty") {
  RunConfig none;
  none.command = "adjoint";
  CHECK_THROWS_AS(cli::run(none), InvalidInput);
  RunConfig both = config("adjoint", "ks");
  both.spec_file = "ks";
  CHECK_THROWS_AS(cli::run(both), InvalidInput);
  CHECK_THROWS_AS(cli::run(config("adjoint", "  ")), InvalidInput);
  CHECK_THROWS_AS(cli::run(config("adjoint", "u_t +")), ParseError);
  CHECK_THROWS_AS(cli::run(config("frobnicate", "ks")), InvalidInput);
}

TEST_CASE("numerics flags only for verify-numeric") {
  RunConfig c = config("classify", "ks");
  c.grid = 32;
  CHECK_THROWS_AS(cli::run(c), InvalidInput);
  c = config("conslaw", "ks");
  c.corrupt = true;
  CHECK_THROWS_AS(cli::run(c), InvalidInput);
}

TEST_CASE("classify KS") {
  const cli::Report r = cli::run(config("classify", "ks"));
  const auto& res = r.json["results"][0];
  CHECK(res["branch"] == "f=a*g+b, a!=0");
  CHECK(res["a"] == "-1");
  CHECK(res["b"] == "1");
  CHECK(res["phi"] == "c1*exp(-t - x) + c2");
  CHECK(res["residual_zero"] == true);
  CHECK(res["strictly_self_adjoint"] == false);
  for (const auto& item : res["determining_equations"]["items"]) CHECK(item["printed_status"] == "match");
  CHECK(r.pass());
}

TEST_CASE("classify from a spec file") {
  const std::string path = temp_file("quasi.json", R"({"f": "u", "g": "u^3", "h": "0"})");
  RunConfig c;
  c.command = "classify";
  c.spec_file = path;
  const cli::Report r = cli::run(c);
  CHECK(r.json["results"][0]["kind"] == "quasi self-adjoint");
  CHECK(r.json["results"][0]["branch"] == "W!=0");
  std::remove(path.c_str());

  const std::string flat = temp_file("flat.json", R"({"f": "u", "g": "3", "h": "0"})");
  c.spec_file = flat;
  try {
    (void)cli::run(c);
    FAIL("expected rejection");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("g' != 0 violated") != std::string::npos);
  }
  std::remove(flat.c_str());

  const std::string broken = temp_file("broken.json", R"({"f": "u"})");
  c.spec_file = broken;
  CHECK_THROWS_AS(cli::run(c), InvalidInput);
  std::remove(broken.c_str());
}

TEST_CASE("classify with a substitution override") {
  RunConfig c = config("classify", "ks");
  c.phi = "u";
  const cli::Report r = cli::run(c);
  CHECK(r.json["results"][0]["phi_override"]["residual_zero"] == false);
  CHECK_FALSE(r.pass());
}

TEST_CASE("conslaw for the KS symmetries") {
  const cli::Report r = cli::run(config("conslaw", "ks"));
  REQUIRE(r.json["results"].size() == 3);
  for (const auto& res : r.json["results"]) {
    CHECK(res["raw_divergence_zero"] == true);
    CHECK(res["simplified_divergence_zero"] == true);
    CHECK(res["trivial"] == false);
    for (const auto& ref : res["reference"]) CHECK(ref["equivalent_modulo_trivial"] == true);
  }
  const auto& x1 = r.json["results"][0];
  CHECK(x1["symmetry"] == "X1");
  bool simplified_structural = false;
  for (const auto& ref : x1["reference"]) {
    if (ref["form"] == "simplified") simplified_structural = ref["simplified_structural"];
  }
  CHECK(simplified_structural);
  CHECK(r.pass());
}

TEST_CASE("conslaw warns on a non-symmetry") {
  RunConfig c = config("conslaw", "ks");
  c.symmetries = {"Xu"};
  const cli::Report r = cli::run(c);
  CHECK(r.json["results"][0].contains("warning"));
  CHECK(r.json["results"][0]["symmetry_residual"] == "u_x - u_xx");
  CHECK_FALSE(r.pass());
}

TEST_CASE("symmetry-check") {
  RunConfig c = config("symmetry-check", "ks");
  CHECK(cli::run(c).pass());
  c.symmetries = {"X1", "t, -t, -(1+u)"};
  CHECK(cli::run(c).pass());
  c.symmetries = {"0, x, 0"};
  CHECK_FALSE(cli::run(c).pass());
  c.symmetries = {"0, x"};
  CHECK_THROWS_AS(cli::run(c), InvalidInput);
  c.symmetries = {"0, u_x, 0"};
  CHECK_THROWS_AS(cli::run(c), InvalidInput);
  RunConfig heat = config("symmetry-check", "u_t - u_xx");
  CHECK_THROWS_AS(cli::run(heat), InvalidInput);
  heat.symmetries = {"2*t, x, 0"};
  CHECK(cli::run(heat).pass());
}

TEST_CASE("verify-numeric") {
  RunConfig c = config("verify-numeric", "ks");
  c.grid = 32;
  c.tfinal = 0.5;
  const cli::Report ok = cli::run(c);
  CHECK(ok.pass());
  CHECK(ok.json["results"][0]["vectors"].size() == 4);
  c.corrupt = true;
  const std::string csv = temp_file("residual.csv", "");
  c.csv = csv;
  const cli::Report bad = cli::run(c);
  CHECK_FALSE(bad.pass());
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x,residual");
  std::remove(csv.c_str());
  CHECK_THROWS_AS(cli::run(config("verify-numeric", "u_t - u_xx")), InvalidInput);
}

TEST_CASE("reports are byte-stable") {
  RunConfig c = config("verify-numeric", "ks");
  c.grid = 32;
  c.tfinal = 0.5;
  CHECK(cli::run(c).json.dump() == cli::run(c).json.dump());
  CHECK(cli::run(config("conslaw", "ks")).json.dump() == cli::run(config("conslaw", "ks")).json.dump());
}
