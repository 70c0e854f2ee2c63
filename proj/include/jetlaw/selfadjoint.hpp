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

#ifndef JETLAW_SELFADJOINT_HPP
#define JETLAW_SELFADJOINT_HPP

#include <optional>
#include <string>
#include <vector>

#include "jetlaw/expr.hpp"
#include "jetlaw/normal_form.hpp"

namespace jetlaw {

/// An evolution equation F = 0, optionally known to have the form
/// u_t - f(u) u_x - g(u) u_xx + h(u) u_x^2 with coefficient functions of u.
class EquationSpec {
 public:
  /// Keeps F as given; f, g, h are recovered when F has the quasilinear
  /// form above with unit u_t coefficient.
  static EquationSpec from_expression(const Expr& equation);
  static EquationSpec from_coefficients(const Expr& f, const Expr& g, const Expr& h);

  [[nodiscard]] const NormalForm& equation() const { return equation_; }
  [[nodiscard]] bool has_coefficients() const { return f_.has_value(); }
  [[nodiscard]] const NormalForm& f() const;
  [[nodiscard]] const NormalForm& g() const;
  [[nodiscard]] const NormalForm& h() const;

  /// Throws InvalidInput naming the first violated condition among
  /// f != 0, g != 0, g' != 0.
  void check_conditions() const;

 private:
  NormalForm equation_;
  std::optional<NormalForm> f_, g_, h_;
};

/// u_t + u u_x - (1+u) u_xx - u_x^2.
EquationSpec ks_equation();
/// The general form with function symbols f(u), g(u), h(u).
EquationSpec ks_general_equation();
/// Stored adjoint expression of the general form.
Expr ks_general_adjoint_reference();

Expr formal_lagrangian(const Expr& equation);
NormalForm formal_lagrangian(const NormalForm& equation);
Expr adjoint_function(const Expr& equation);
NormalForm adjoint_function(const NormalForm& equation);

/// Replaces nu and its derivative coordinates by phi and its total derivatives.
NormalForm substitute_adjoint_variable(const NormalForm& e, const NormalForm& phi);

/// The unknown phi(t, x, u) as a point function.
NormalForm phi_unknown();

struct SubstitutionCheck {
  NormalForm lambda;
  NormalForm residual;  // F*|_{nu=phi} - lambda F
  [[nodiscard]] bool holds() const { return residual.is_zero(); }
};

/// Throws InvalidInput when phi is identically zero or depends on
/// derivative coordinates.
SubstitutionCheck verify_substitution(const NormalForm& equation, const NormalForm& phi);
SubstitutionCheck verify_substitution(const Expr& equation, const Expr& phi);

struct DeterminingEquation {
  std::string monomial;   // u_xx, u_x^2, u_x or 1
  NormalForm raw;         // coefficient of the monomial in F*|_{nu=phi} - lambda F
  Rational factor;        // raw = factor * normalized
  NormalForm normalized;  // leading phi-derivative coefficient scaled to g
};

struct DeterminingSystem {
  NormalForm lambda;
  std::vector<DeterminingEquation> items;
};

DeterminingSystem determining_equations(const EquationSpec& spec);

/// The four equations in their reference sign conventions, with the
/// spec's f, g, h substituted.
std::vector<NormalForm> printed_determining_equations(const EquationSpec& spec);

/// c with a = c b when it exists.
std::optional<Rational> proportionality(const NormalForm& a, const NormalForm& b);

/// exp(-Phi) with Phi' = (g' + h)/g. Closed form when the integrand is a
/// Laurent polynomial plus simple poles with integer residues; otherwise Phi
/// is the function symbol "Phi" with that derivative rule.
struct IntegratingFactor {
  NormalForm integrand;
  NormalForm value;
  bool closed_form = false;
};

IntegratingFactor integrating_factor(const EquationSpec& spec);

enum class AdjointKind { Strict, Quasi, Nonlinear };
enum class Branch { Wronskian, Affine, ConstantF };

std::string to_string(AdjointKind k);
std::string to_string(Branch b);

struct Classification {
  AdjointKind kind = AdjointKind::Nonlinear;
  Branch branch = Branch::Wronskian;
  NormalForm wronskian;
  std::optional<NormalForm> a;
  std::optional<NormalForm> b;
  IntegratingFactor factor;
  NormalForm phi;
  std::vector<std::string> constants;  // free constants of the family
  SubstitutionCheck check;
  bool strictly_self_adjoint = false;  // phi = u also works
};

Classification classify(const EquationSpec& spec);

/// M exp(-Phi) with M a parameter.
NormalForm quasi_substitution(const EquationSpec& spec);

}  // namespace jetlaw

#endif  // JETLAW_SELFADJOINT_HPP
