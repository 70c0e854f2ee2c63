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

#ifndef JETLAW_CALCULUS_HPP
#define JETLAW_CALCULUS_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "jetlaw/expr.hpp"
#include "jetlaw/normal_form.hpp"

namespace jetlaw {

Expr partial(const Expr& e, const JetVar& v);
Expr total_derivative(const Expr& e, Direction d);

/// Variational derivative with respect to the named dependent variable:
/// sum over coordinates u_J of (-D)^J dL/du_J. Other dependent variables are
/// carried along as passive jet coordinates.
NormalForm euler(const NormalForm& lagrangian, const std::string& dependent = "u");
Expr euler(const Expr& lagrangian, const std::string& dependent = "u");

/// Point vector field xi_t d/dt + xi_x d/dx + eta d/du.
struct VectorField {
  Expr xi_t;
  Expr xi_x;
  Expr eta;
  std::string label;

  /// Throws InvalidInput if a component depends on a derivative coordinate.
  void validate() const;
};

/// Prolongation coefficients eta^J keyed by the multi-index J = (a, b).
struct ProlongedField {
  VectorField base;
  int order = 0;
  std::map<std::pair<int, int>, NormalForm> coefficients;

  [[nodiscard]] const NormalForm& coefficient(int t_order, int x_order) const;
};

/// eta^{J,i} = D_i eta^J - u_{J,t} D_i xi_t - u_{J,x} D_i xi_x, up to |J| = order.
ProlongedField prolong(const VectorField& field, int order = 2);

/// pr X applied to F. The prolongation is extended to the order of F.
NormalForm apply_prolongation(const VectorField& field, const NormalForm& f);

/// Eliminates t-derivatives of u using F = 0 solved for u_t and its total
/// derivatives, leaving a representative built from pure x-derivatives.
class EquationReducer {
 public:
  /// Throws ReductionError unless F is linear in u_t with a nonzero
  /// coefficient and the rest of F involves x-derivatives only.
  explicit EquationReducer(const NormalForm& equation);

  [[nodiscard]] const NormalForm& equation() const { return equation_; }
  /// Value of u_t on solutions.
  [[nodiscard]] const NormalForm& time_derivative() const { return rhs_; }

  NormalForm reduce(const NormalForm& e);
  NormalForm coordinate(int t_order, int x_order);

 private:
  NormalForm equation_;
  NormalForm rhs_;
  std::map<std::pair<int, int>, NormalForm> memo_;
};

Expr reduce_modulo(const Expr& e, const Expr& equation);

/// pr X(F) reduced modulo F; zero exactly when the field is a symmetry.
NormalForm symmetry_residual(const VectorField& field, const NormalForm& equation);
Expr symmetry_residual(const VectorField& field, const Expr& equation);

/// Antiderivative in a jet coordinate, computed term by term. nullopt when
/// some term is not a plain power of the coordinate (logarithms included).
std::optional<NormalForm> antiderivative(const NormalForm& e, const JetVar& v);

/// Explicit antiderivative in x of an expression free of jet coordinates,
/// supporting polynomial-times-exponential terms.
std::optional<NormalForm> antiderivative_x(const NormalForm& e);

/// B with D_x B = e, or nullopt when e is not a total x-derivative (or the
/// required antiderivatives are outside the supported class).
std::optional<NormalForm> integrate_dx(const NormalForm& e);

}  // namespace jetlaw

#endif  // JETLAW_CALCULUS_HPP
