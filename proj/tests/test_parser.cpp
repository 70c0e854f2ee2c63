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

#include "jetlaw/conslaw.hpp"
#include "jetlaw/error.hpp"
#include "jetlaw/normal_form.hpp"
#include "jetlaw/parser.hpp"
#include "jetlaw/selfadjoint.hpp"
#include "reference_formulas.hpp"
#include "random_expr.hpp"

using namespace jetlaw;

TEST_CASE("grammar examples") {
  CHECK(print(parse("u_t + u*u_x - (1+u)*u_xx - u_x^2")) == "u*u_x - u*u_xx + u_t - u_x^2 - u_xx");
  CHECK(parse("g''(u)").kind() == ExprKind::Function);
  CHECK(parse("g''(u)").order() == 2);
  CHECK(parse("phi_xu(t,x,u)").kind() == ExprKind::PointFunction);
  CHECK(parse("phi_xu(t,x,u)").point_index() == PointIndex{0, 1, 1});
  CHECK(parse("nu_tx").jet_var() == jet_nu(1, 1));
  CHECK(parse("c1").kind() == ExprKind::Parameter);
  CHECK(is_zero(parse("2^3 - 8")));
  CHECK(is_zero(parse("-u^2 + (u)^2")));
  CHECK(is_zero(parse("u^-1*u - 1")));
}

TEST_CASE("precedence and associativity") {
  CHECK(is_zero(parse("1 - 2 - 3 + 4")));
  CHECK(is_zero(parse("8/2/2 - 2")));
  CHECK(is_zero(parse("-2^2 + 4")));
  CHECK(is_zero(parse("2*3^2 - 18")));
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const char* text) -> std::size_t {
    try {
      (void)parse(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::string::npos;
  };
  CHECK(position_of("(u+1") == 4);
  CHECK(position_of("3.5") == 1);
  CHECK(position_of("u + # 2") == 4);
  CHECK(position_of("u_q") == 2);
  CHECK(position_of("") == 0);
  CHECK(position_of("u +") == 3);
  CHECK(position_of("x'(u)") != std::string::npos);
  CHECK(position_of("exp(u, x)") != std::string::npos);
  CHECK(position_of("phi(x,t)") != std::string::npos);
  CHECK(position_of("u^x") != std::string::npos);
}

TEST_CASE("property: parse(print(e)) round trip on random expressions") {
  testing::RandomExpr gen(21);
  for (int i = 0; i < 600; ++i) {
    const Expr e = gen.expression(3, 3, true, i % 3 == 0);
    const std::string text = print(e);
    CHECK_MESSAGE(is_zero(parse(text) - e), text);
  }
}

TEST_CASE("property: parse(print(e)) round trip on reference formulas") {
  for (const std::string& text : testing::reference_formulas()) {
    const Expr e = parse(text);
    CHECK_MESSAGE(is_zero(parse(print(e)) - e), text);
  }
  for (const ReferenceVector& ref : ks_reference_vectors()) {
    CHECK(is_zero(parse(print(parse(ref.c1))) - parse(ref.c1)));
    CHECK(is_zero(parse(print(parse(ref.c2))) - parse(ref.c2)));
  }
  CHECK(is_zero(parse(print(ks_general_adjoint_reference())) - ks_general_adjoint_reference()));
}
