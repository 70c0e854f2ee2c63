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

#include "jetlaw/conslaw.hpp"

#include "jetlaw/error.hpp"
#include "jetlaw/parser.hpp"
#include "jetlaw/selfadjoint.hpp"

namespace jetlaw {

namespace {

NormalForm jet_form(const JetVar& v) { return NormalForm::from_atom(make_jet_atom(v)); }

bool has_time_derivative(const NormalForm& e) {
  return e.mentions([](const Atom& a) { return a.kind() == AtomKind::Jet && a->jet.t_order > 0; });
}

bool mentions_jets(const NormalForm& e) {
  return e.mentions([](const Atom& a) { return a.kind() == AtomKind::Jet; });
}

int max_x_order(const NormalForm& e) {
  int n = -1;
  for (const JetVar& v : jet_variables(e, "u")) {
    if (v.t_order == 0) n = std::max(n, v.x_order);
  }
  return n;
}

/// Second-derivative factor dL/du_ij under the symmetric convention.
NormalForm second_factor(const NormalForm& lagrangian, Direction i, Direction j) {
  if (i == j) return partial_derivative(lagrangian, jet_u().derived(i, 2));
  return partial_derivative(lagrangian, jet_u(1, 1)).scaled(Rational(1, 2));
}

/// Removes every top-order x-derivative that enters linearly by subtracting
/// D_x of its antiderivative; stops at a nonlinear top order or at u itself.
NormalForm strip_exact_derivatives(NormalForm a, int lowest_order, NormalForm* accumulated) {
  for (int n = max_x_order(a); n >= lowest_order && n >= 1; n = max_x_order(a)) {
    const JetVar top = jet_u(0, n);
    const NormalForm p = partial_derivative(a, top);
    if (!partial_derivative(p, top).is_zero()) break;
    const auto q = antiderivative(p, jet_u(0, n - 1));
    if (!q) break;
    a -= total_derivative(*q, Direction::X);
    if (accumulated != nullptr) *accumulated += *q;
    if (!partial_derivative(a, top).is_zero()) break;
  }
  return a;
}

/// Representative of a density modulo the equation and total x-derivatives.
NormalForm canonical_density(const NormalForm& c1, const NormalForm& equation) {
  EquationReducer reducer(equation);
  NormalForm a = strip_exact_derivatives(reducer.reduce(c1), 1, nullptr);
  NormalForm::Terms free_terms;
  for (const auto& [m, c] : a.terms()) {
    NormalForm term = NormalForm::from_terms({{m, c}});
    if (!mentions_jets(term)) free_terms.emplace(m, c);
  }
  const NormalForm free = NormalForm::from_terms(std::move(free_terms));
  if (!free.is_zero() && antiderivative_x(free)) a -= free;
  return a;
}

}  // namespace

NormalForm characteristic(const VectorField& field) {
  field.validate();
  return normalize(field.eta) - normalize(field.xi_t) * jet_form(jet_u(1, 0)) -
         normalize(field.xi_x) * jet_form(jet_u(0, 1));
}

ConservedVector conserved_vector(const NormalForm& equation, const VectorField& field) {
  for (const JetVar& v : jet_variables(equation, "u")) {
    if (v.order() > 2) throw InvalidInput("conserved-vector formula needs a second-order equation, found " + v.to_string());
  }
  const NormalForm lagrangian = formal_lagrangian(equation);
  const NormalForm w = characteristic(field);
  const Direction dirs[2] = {Direction::T, Direction::X};
  NormalForm comps[2];
  for (int i = 0; i < 2; ++i) {
    NormalForm bracket = partial_derivative(lagrangian, jet_u().derived(dirs[i]));
    NormalForm tail;
    for (Direction j : dirs) {
      const NormalForm s = second_factor(lagrangian, dirs[i], j);
      if (s.is_zero()) continue;
      bracket -= total_derivative(s, j);
      tail += total_derivative(w, j) * s;
    }
    comps[i] = w * bracket + tail;
  }
  ConservedVector out;
  out.c1 = comps[0];
  out.c2 = comps[1];
  out.symmetry = field.label;
  out.substitution = "nu";
  out.symmetry_verified = symmetry_residual(field, equation).is_zero();
  out.trail.emplace_back("reduced Ibragimov formula");
  return out;
}

ConservedVector conserved_vector(const NormalForm& equation, const VectorField& field, const NormalForm& phi,
                                 const std::string& phi_text) {
  const SubstitutionCheck check = verify_substitution(equation, phi);
  if (!check.holds()) {
    throw InvalidInput("substitution nu = " + phi.to_string() +
                       " is not verified; residual: " + check.residual.to_string());
  }
  ConservedVector out = conserved_vector(equation, field);
  out.c1 = substitute_adjoint_variable(out.c1, phi);
  out.c2 = substitute_adjoint_variable(out.c2, phi);
  out.substitution = phi_text.empty() ? phi.to_string() : phi_text;
  out.trail.push_back("nu = " + out.substitution);
  return out;
}

NormalForm divergence_residual(const NormalForm& c1, const NormalForm& c2, const NormalForm& equation) {
  EquationReducer reducer(equation);
  return reducer.reduce(total_derivative(c1, Direction::T) + total_derivative(c2, Direction::X));
}

NormalForm divergence_residual(const ConservedVector& c, const NormalForm& equation) {
  return divergence_residual(c.c1, c.c2, equation);
}

std::optional<NormalForm> conservation_form(const NormalForm& equation) {
  const JetVar ut = jet_u(1, 0);
  const NormalForm alpha = partial_derivative(equation, ut);
  if (!alpha.is_constant() || alpha.is_zero()) return std::nullopt;
  const NormalForm rest = equation - alpha * jet_form(ut);
  if (has_time_derivative(rest)) return std::nullopt;
  auto psi = integrate_dx(rest);
  if (!psi) return std::nullopt;
  return psi->scaled(1 / alpha.constant_value());
}

ConservedVector transfer_dx_terms(const ConservedVector& c, const NormalForm& equation) {
  EquationReducer reducer(equation);
  const JetVar ut = jet_u(1, 0);
  NormalForm a = c.c1;
  NormalForm b;
  std::vector<std::string> steps;

  // On solutions c u_t = -D_x(c Psi) + (D_x c) Psi.
  if (auto psi = conservation_form(equation)) {
    const NormalForm coef = partial_derivative(a, ut);
    const NormalForm d = a - coef * jet_form(ut);
    if (!coef.is_zero() && !has_time_derivative(coef) && !has_time_derivative(d)) {
      a = total_derivative(coef, Direction::X) * *psi + d;
      b -= coef * *psi;
      steps.emplace_back("u_t replaced by -D_x(" + psi->to_string() + ")");
    }
  }
  if (has_time_derivative(a)) {
    a = reducer.reduce(a);
    steps.emplace_back("t-derivatives eliminated");
  }
  NormalForm lifted;
  a = strip_exact_derivatives(a, 2, &lifted);
  if (!lifted.is_zero()) {
    b += lifted;
    steps.emplace_back("second and higher x-derivatives integrated by parts");
  }
  if (!a.is_zero()) {
    if (auto exact = integrate_dx(a)) {
      b += *exact;
      a = NormalForm();
      steps.emplace_back("density is a total x-derivative");
    }
  }
  if (b.is_zero()) return c;
  ConservedVector out = c;
  out.c1 = a;
  out.c2 = c.c2 + total_derivative(b, Direction::T);
  out.transferred = true;
  for (auto& s : steps) out.trail.push_back(std::move(s));
  out.trail.push_back("B = " + b.to_string());
  return out;
}

TrivialityReport triviality_check(const ConservedVector& c, const NormalForm& equation) {
  TrivialityReport out;
  EquationReducer reducer(equation);
  if (reducer.reduce(c.c1).is_zero() && reducer.reduce(c.c2).is_zero()) {
    out.trivial = true;
    out.description = "both components vanish on solutions";
    return out;
  }
  const NormalForm density = canonical_density(c.c1, equation);
  if (density.is_zero()) {
    out.trivial = true;
    out.description = "density is a total x-derivative on solutions (pure gauge)";
    return out;
  }
  if (conservation_form(equation)) {
    const NormalForm base = canonical_density(jet_form(jet_u()), equation);
    if (auto k = proportionality(density, base)) {
      out.multiple_of_equation = *k;
      out.description = k->get_str() + " times the conservation-form law plus a trivial vector";
      return out;
    }
  }
  out.description = "nontrivial; canonical density " + density.to_string();
  return out;
}

bool equivalent_modulo_trivial(const ConservedVector& a, const ConservedVector& b, const NormalForm& equation) {
  const NormalForm d1 = a.c1 - b.c1;
  const NormalForm d2 = a.c2 - b.c2;
  if (!divergence_residual(d1, d2, equation).is_zero()) return false;
  return canonical_density(d1, equation).is_zero();
}

NormalForm noether_defect(const NormalForm& equation, const VectorField& field) {
  const NormalForm lagrangian = formal_lagrangian(equation);
  const NormalForm xt = normalize(field.xi_t);
  const NormalForm xx = normalize(field.xi_x);
  const NormalForm w = characteristic(field);
  ConservedVector c = conserved_vector(equation, field);
  c.c1 += xt * lagrangian;
  c.c2 += xx * lagrangian;

  // nu is a fixed function of (t, x), so it joins the explicit dependence.
  NormalForm pr = apply_prolongation(field, lagrangian);
  for (const JetVar& v : jet_variables(lagrangian, "nu")) {
    const NormalForm dl = partial_derivative(lagrangian, v);
    pr += (xt * jet_form(v.derived(Direction::T)) + xx * jet_form(v.derived(Direction::X))) * dl;
  }
  const NormalForm div_xi = total_derivative(xt, Direction::T) + total_derivative(xx, Direction::X);
  return pr + lagrangian * div_xi - w * euler(lagrangian, "u") - total_derivative(c.c1, Direction::T) -
         total_derivative(c.c2, Direction::X);
}

std::vector<VectorField> ks_symmetries() {
  return {
      VectorField{Expr(1), Expr(0), Expr(0), "X1"},
      VectorField{Expr(0), Expr(1), Expr(0), "X2"},
      VectorField{parse("t"), parse("-t"), parse("-(1+u)"), "X3"},
  };
}

std::vector<ReferenceVector> ks_reference_vectors() {
  return {
      {"X2", "-u_x*exp(-t-x)", "(u_t + (1+u)*u_x)*exp(-t-x)", false},
      {"X1", "-u_t*exp(-t-x)", "(u_t*(1+u_x) + (1+u)*u_tx)*exp(-t-x)", false},
      {"X1", "(u^2/2 - (1+u)*u_x)*exp(-t-x)", "(-u^2/2 + (1+u)*u_t + (1+u)*u_x)*exp(-t-x)", true},
      {"X3", "(-(1+u) + t*u^2/2 - t*u*u_x)*exp(-t-x)", "((1+u) + (1+u)*u_x + u^2/2 + t*u*u_t - t*u^2/2)*exp(-t-x)",
       true},
  };
}

}  // namespace jetlaw
