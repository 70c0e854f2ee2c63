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

#include "jetlaw/calculus.hpp"
#include "jetlaw/conslaw.hpp"
#include "jetlaw/error.hpp"
#include "jetlaw/parser.hpp"
#include "reference_formulas.hpp"
#include "random_expr.hpp"

using namespace jetlaw;

namespace {
NormalForm nf(const char* text) { return normalize(parse(text)); }
VectorField field(const char* xt, const char* xx, const char* eta) {
  return VectorField{parse(xt), parse(xx), parse(eta), std::string(xt) + "," + xx + "," + eta};
}
}  // namespace

TEST_CASE("Euler operator") {
  CHECK(euler(nf("u_x^2/2")) == nf("-u_xx"));
  CHECK(euler(nf("u*u_t")).is_zero());
  CHECK(euler(nf("nu*u_t"), "nu") == nf("u_t"));
  CHECK(is_zero(euler(nf("u_xx^2")) - nf("2*u_xxxx")));
  CHECK(euler(nf("f(u)*u_x")).is_zero());
}

TEST_CASE("property: Euler operator annihilates total divergences") {
  testing::RandomExpr gen(31);
  for (int i = 0; i < 220; ++i) {
    const NormalForm p = normalize(gen.expression(2, 1, true, i % 3 == 0));
    const NormalForm q = normalize(gen.expression(2, 1, true, i % 5 == 0));
    const NormalForm div = total_derivative(p, Direction::T) + total_derivative(q, Direction::X);
    CHECK_MESSAGE(euler(div).is_zero(), div.to_string());
  }
}

TEST_CASE("prolongation of translations and scaling") {
  const ProlongedField p = prolong(field("0", "x", "0"));
  CHECK(p.coefficient(0, 1) == nf("-u_x"));
  CHECK(p.coefficient(0, 2) == nf("-2*u_xx"));
  CHECK(p.coefficient(1, 0).is_zero());
  const ProlongedField q = prolong(field("1", "0", "0"));
  CHECK(q.coefficient(0, 2).is_zero());
  CHECK_THROWS_AS((void)q.coefficient(0, 3), InvalidInput);
  const ProlongedField r = prolong(field("t", "-t", "-(1+u)"));
  CHECK(r.coefficient(0, 1) == nf("-u_x"));
  CHECK(r.coefficient(1, 0) == nf("-2*u_t + u_x"));
}

TEST_CASE("vector fields may not depend on derivatives") {
  CHECK_THROWS_AS(prolong(field("u_x", "0", "0")), InvalidInput);
  CHECK_NOTHROW(field("t*u", "exp(x)", "u^2").validate());
}

TEST_CASE("reduction modulo the equation") {
  EquationReducer ks(nf(testing::kKs));
  CHECK(ks.time_derivative() == nf("-u*u_x + u*u_xx + u_x^2 + u_xx"));
  CHECK(ks.reduce(nf(testing::kKs)).is_zero());
  CHECK(ks.reduce(nf("u_tx")) == total_derivative(ks.time_derivative(), Direction::X));
  CHECK(ks.reduce(nf("u_x")) == nf("u_x"));
  CHECK(is_zero(reduce_modulo(parse("u_t - u_xx"), parse("u_t - u_xx"))));
  CHECK_THROWS_AS(EquationReducer(nf("u_x - u_xx")), ReductionError);
  CHECK_THROWS_AS(EquationReducer(nf("u_t^2 - u_xx")), ReductionError);
}

TEST_CASE("property: reduction is idempotent") {
  testing::RandomExpr gen(32);
  EquationReducer ks(nf(testing::kKs));
  EquationReducer general(nf(testing::kKsGeneral));
  for (int i = 0; i < 100; ++i) {
    const NormalForm e = normalize(gen.expression(3, 2, true, i % 3 == 0));
    for (EquationReducer* r : {&ks, &general}) {
      const NormalForm once = r->reduce(e);
      CHECK(is_zero(r->reduce(once) - once));
      for (const JetVar& v : jet_variables(once, "u")) CHECK(v.t_order == 0);
    }
  }
}

TEST_CASE("symmetries of the KS equation") {
  const NormalForm F = nf(testing::kKs);
  for (const VectorField& v : ks_symmetries()) {
    CHECK_MESSAGE(symmetry_residual(v, F).is_zero(), v.label);
  }
  CHECK(symmetry_residual(field("0", "0", "1"), F) == nf("u_x - u_xx"));
  CHECK_FALSE(symmetry_residual(field("0", "x", "0"), F).is_zero());
  CHECK_FALSE(symmetry_residual(field("2*t", "x", "0"), F).is_zero());
  CHECK_FALSE(symmetry_residual(field("t", "-t", "1+u"), F).is_zero());
}

TEST_CASE("heat equation scaling symmetry") {
  CHECK(symmetry_residual(field("2*t", "x", "0"), nf("u_t - u_xx")).is_zero());
  CHECK(symmetry_residual(field("0", "2*t", "-x*u"), nf("u_t - u_xx")).is_zero());
}

TEST_CASE("antiderivatives") {
  CHECK(*antiderivative(nf("2*u*u_x"), jet_u()) == nf("u^2*u_x"));
  CHECK(*antiderivative(nf("3*u^2*g(u) + u_x"), jet_u(0, 1)) == nf("3*u^2*g(u)*u_x + u_x^2/2"));
  CHECK_FALSE(antiderivative(nf("g(u)"), jet_u()).has_value());
  CHECK(is_zero(*antiderivative_x(nf("x*exp(-x)")) - nf("-(x+1)*exp(-x)")));
}

TEST_CASE("integrate_dx inverts D_x") {
  const auto check = [](const char* text) {
    const NormalForm q = nf(text);
    const auto back = integrate_dx(total_derivative(q, Direction::X));
    REQUIRE_MESSAGE(back.has_value(), text);
    CHECK_MESSAGE(explicit_derivative(*back - q, Direction::X).is_zero(), text);
    CHECK(is_zero(total_derivative(*back, Direction::X) - total_derivative(q, Direction::X)));
  };
  check("u*u_x*exp(-t-x)");
  check("(1+u)*u_xx*exp(-t-x)");
  check("t*u^2/2*exp(-t-x)");
  check("x^2*u_x");
  CHECK_FALSE(integrate_dx(nf("u_x^2")).has_value());
}

TEST_CASE("property: integrate_dx on random exact derivatives") {
  testing::RandomExpr gen(33);
  int recovered = 0;
  for (int i = 0; i < 100; ++i) {
    const NormalForm q = normalize(gen.expression(2, 1, false));
    const NormalForm dq = total_derivative(q, Direction::X);
    if (auto back = integrate_dx(dq)) {
      ++recovered;
      CHECK(is_zero(total_derivative(*back, Direction::X) - dq));
    }
  }
  CHECK(recovered >= 60);
}
