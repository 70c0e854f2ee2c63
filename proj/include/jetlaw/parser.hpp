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

#ifndef JETLAW_PARSER_HPP
#define JETLAW_PARSER_HPP

#include <string>
#include <string_view>

#include "jetlaw/expr.hpp"
#include "jetlaw/normal_form.hpp"

namespace jetlaw {

/// Parses the ASCII expression grammar documented in docs/grammar.md.
///
///   u_t + u*u_x - (1+u)*u_xx - u_x^2
///   -nu_t + f(u)*nu_x - 2*nu*g'(u)*u_xx
///   c1*exp(a*x + a*b*t) + c2
///   phi_xu(t,x,u)
///
/// Throws ParseError (with a character position) on malformed input.
Expr parse(std::string_view text);

/// Deterministic text of the normal form of e; parse(print(e)) is equal to e
/// as a normal form. Derivative rules attached to function symbols are not
/// part of the text.
std::string print(const Expr& e);
std::string print(const NormalForm& e);

}  // namespace jetlaw

#endif  // JETLAW_PARSER_HPP
