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

#include "jetlaw/selfadjoint.hpp"

#include <map>
#include <utility>

#include "jetlaw/calculus.hpp"
#include "jetlaw/error.hpp"
#include "jetlaw/parser.hpp"
#include "jetlaw/substitute.hpp"

namespace jetlaw {

namespace {

NormalForm jet_form(const JetVar& v) { return NormalForm::from_atom(make_jet_atom(v)); }
NormalForm param(const std::string& name) { return NormalForm::from_atom(make_parameter_atom(name)); }
NormalForm var(Direction d) { return NormalForm::from_atom(make_variable_atom(d)); }

/// True when e involves only u, parameters and functions of these.
bool function_of_u(const NormalForm& e) {
  return !e.mentions([](const Atom& a) {
    return a.kind() == AtomKind::Variable || a.kind() == AtomKind::PointFunction ||
           (a.kind() == AtomKind::Jet && a->jet != jet_u());
  });
}

bool constant_in_u(const NormalForm& e) {
  return !e.mentions([](const Atom& a) {
    return a.kind() == AtomKind::Variable || a.kind() == AtomKind::PointFunction || a.kind() == AtomKind::Jet ||
           a.kind() == AtomKind::Function;
  });
}

bool mentions_nu(const NormalForm& e) {
  return e.mentions([](const Atom& a) { return a.kind() == AtomKind::Jet && a->jet.name == "nu"; });
}

NormalForm build_equation(const NormalForm& f, const NormalForm& g, const NormalForm& h) {
  const NormalForm ux = jet_form(jet_u(0, 1));
  return jet_form(jet_u(1, 0)) - f * ux - g * jet_form(jet_u(0, 2)) + h * ux * ux;
}

/// Coefficient of a point-function atom in an expression linear in such atoms.
NormalForm coefficient_of(const NormalForm& e, const Atom& target) {
  return derive(e, [&target](const Atom& a) { return NormalForm(a == target ? 1 : 0); });
}

NormalForm phi_derivative(int t, int x, int u) {
  return NormalForm::from_atom(make_point_function_atom("phi", PointIndex{t, x, u}, kArgTXU));
}

}  // namespace

EquationSpec EquationSpec::from_expression(const Expr& equation) {
  EquationSpec spec;
  spec.equation_ = normalize(equation);
  const std::vector<JetVar> vars = {jet_u(1, 0), jet_u(0, 1), jet_u(0, 2)};
  const auto parts = collect(spec.equation_, vars);
  std::optional<NormalForm> f, g, h;
  Rational lead(0);
  for (const auto& [mono, coeff] : parts) {
    if (!function_of_u(coeff)) return spec;
    if (mono == JetMonomial{{jet_u(1, 0), 1}}) {
      if (!coeff.is_constant()) return spec;
      lead = coeff.constant_value();
    } else if (mono == JetMonomial{{jet_u(0, 1), 1}}) {
      f = -coeff;
    } else if (mono == JetMonomial{{jet_u(0, 2), 1}}) {
      g = -coeff;
    } else if (mono == JetMonomial{{jet_u(0, 1), 2}}) {
      h = coeff;
    } else {
      return spec;
    }
  }
  if (lead == 0) return spec;
  const Rational inv = 1 / lead;
  spec.f_ = f.value_or(NormalForm()).scaled(inv);
  spec.g_ = g.value_or(NormalForm()).scaled(inv);
  spec.h_ = h.value_or(NormalForm()).scaled(inv);
  return spec;
}

EquationSpec EquationSpec::from_coefficients(const Expr& f, const Expr& g, const Expr& h) {
  EquationSpec spec;
  const char* names[] = {"f", "g", "h"};
  const Expr* exprs[] = {&f, &g, &h};
  NormalForm forms[3];
  for (int i = 0; i < 3; ++i) {
    forms[i] = normalize(*exprs[i]);
    if (!function_of_u(forms[i])) {
      throw InvalidInput(std::string("coefficient ") + names[i] + " must depend on u only, got " +
                         forms[i].to_string());
    }
  }
  spec.f_ = forms[0];
  spec.g_ = forms[1];
  spec.h_ = forms[2];
  spec.equation_ = build_equation(forms[0], forms[1], forms[2]);
  return spec;
}

const NormalForm& EquationSpec::f() const {
  if (!f_) throw InvalidInput("equation is not of the form u_t - f(u)u_x - g(u)u_xx + h(u)u_x^2");
  return *f_;
}

const NormalForm& EquationSpec::g() const {
  (void)f();
  return *g_;
}

const NormalForm& EquationSpec::h() const {
  (void)f();
  return *h_;
}

void EquationSpec::check_conditions() const {
  if (f().is_zero()) throw InvalidInput("condition f != 0 violated");
  if (g().is_zero()) throw InvalidInput("condition g != 0 violated");
  if (partial_derivative(g(), jet_u()).is_zero()) throw InvalidInput("condition g' != 0 violated");
}

EquationSpec ks_equation() { return EquationSpec::from_expression(parse("u_t + u*u_x - (1+u)*u_xx - u_x^2")); }

EquationSpec ks_general_equation() {
  return EquationSpec::from_coefficients(sym::fn("f"), sym::fn("g"), sym::fn("h"));
}

Expr ks_general_adjoint_reference() {
  return parse(
      "-nu_t + f(u)*nu_x - g(u)*nu_xx - 2*nu*g'(u)*u_xx - 2*nu*h(u)*u_xx - nu*h'(u)*u_x^2 - nu*g''(u)*u_x^2"
      " - 2*g'(u)*nu_x*u_x - 2*h(u)*u_x*nu_x");
}

NormalForm formal_lagrangian(const NormalForm& equation) {
  if (mentions_nu(equation)) throw InvalidInput("the adjoint variable nu already occurs in the equation");
  return jet_form(jet_nu()) * equation;
}

Expr formal_lagrangian(const Expr& equation) { return formal_lagrangian(normalize(equation)).to_expr(); }

NormalForm adjoint_function(const NormalForm& equation) { return euler(formal_lagrangian(equation), "u"); }

Expr adjoint_function(const Expr& equation) { return adjoint_function(normalize(equation)).to_expr(); }

NormalForm substitute_adjoint_variable(const NormalForm& e, const NormalForm& phi) {
  std::map<std::pair<int, int>, NormalForm> memo;
  std::function<NormalForm(int, int)> derivative = [&](int a, int b) -> NormalForm {
    if (a == 0 && b == 0) return phi;
    auto key = std::make_pair(a, b);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    NormalForm v = b > 0 ? total_derivative(derivative(a, b - 1), Direction::X)
                         : total_derivative(derivative(a - 1, b), Direction::T);
    memo.emplace(key, v);
    return v;
  };
  return replace_atoms(e, [&](const Atom& a) -> std::optional<NormalForm> {
    if (a.kind() == AtomKind::Jet && a->jet.name == "nu") return derivative(a->jet.t_order, a->jet.x_order);
    return std::nullopt;
  });
}

NormalForm phi_unknown() { return phi_derivative(0, 0, 0); }

SubstitutionCheck verify_substitution(const NormalForm& equation, const NormalForm& phi) {
  if (phi.is_zero()) throw InvalidInput("substitution phi is identically zero");
  if (phi.mentions([](const Atom& a) { return a.kind() == AtomKind::Jet && a->jet != jet_u(); })) {
    throw InvalidInput("substitution must depend on t, x, u only, got " + phi.to_string());
  }
  const JetVar ut = jet_u(1, 0);
  const NormalForm alpha = partial_derivative(equation, ut);
  if (alpha.is_zero()) throw ReductionError("equation does not involve u_t");
  const NormalForm adjoint = substitute_adjoint_variable(adjoint_function(equation), phi);
  SubstitutionCheck out;
  out.lambda = partial_derivative(adjoint, ut) * alpha.pow(-1);
  out.residual = adjoint - out.lambda * equation;
  return out;
}

SubstitutionCheck verify_substitution(const Expr& equation, const Expr& phi) {
  return verify_substitution(normalize(equation), normalize(phi));
}

DeterminingSystem determining_equations(const EquationSpec& spec) {
  const NormalForm& g = spec.g();
  if (g.is_zero()) throw InvalidInput("condition g != 0 violated");
  const NormalForm equation = build_equation(spec.f(), g, spec.h());
  const SubstitutionCheck check = verify_substitution(equation, phi_unknown());
  DeterminingSystem out;
  out.lambda = check.lambda;

  const JetVar ux = jet_u(0, 1);
  const JetVar uxx = jet_u(0, 2);
  auto parts = collect(check.residual, {ux, uxx});
  struct Slot {
    JetMonomial key;
    std::string label;
    NormalForm top;
  };
  const Slot slots[] = {
      {{{uxx, 1}}, "u_xx", phi_derivative(0, 0, 1)},
      {{{ux, 2}}, "u_x^2", phi_derivative(0, 0, 2)},
      {{{ux, 1}}, "u_x", phi_derivative(0, 1, 1)},
      {{}, "1", phi_derivative(0, 2, 0)},
  };
  const NormalForm g_inv = g.pow(-1);
  for (const Slot& s : slots) {
    DeterminingEquation item;
    item.monomial = s.label;
    if (auto it = parts.find(s.key); it != parts.end()) {
      item.raw = it->second;
      parts.erase(it);
    }
    const Atom top = s.top.terms().begin()->first.factors.front().first;
    const NormalForm ratio = coefficient_of(item.raw, top) * g_inv;
    if (!ratio.is_constant() || ratio.is_zero()) {
      throw ClassificationFailure("internal consistency: coefficient of " + s.label +
                                  " does not have a constant multiple of g at " + top.text());
    }
    item.factor = ratio.constant_value();
    item.normalized = item.raw.scaled(1 / item.factor);
    out.items.push_back(std::move(item));
  }
  if (!parts.empty()) {
    throw ClassificationFailure("internal consistency: unexpected monomial " + to_string(parts.begin()->first) +
                                " in the determining system");
  }
  return out;
}

std::vector<NormalForm> printed_determining_equations(const EquationSpec& spec) {
  static const char* const kPrinted[] = {
      "g(u)*phi_u(t,x,u) + (h(u) + g'(u))*phi(t,x,u)",
      "g(u)*phi_uu(t,x,u) + (h(u) + 2*g'(u))*phi_u(t,x,u) + (h'(u) + g''(u))*phi(t,x,u)",
      "g(u)*phi_xu(t,x,u) + (h(u) + g'(u))*phi_x(t,x,u)",
      "phi_t(t,x,u) - f(u)*phi_x(t,x,u) + g(u)*phi_xx(t,x,u)",
  };
  Bindings b;
  b.function("f", spec.f().to_expr()).function("g", spec.g().to_expr()).function("h", spec.h().to_expr());
  std::vector<NormalForm> out;
  for (const char* text : kPrinted) out.push_back(normalize(substitute(parse(text), b)));
  return out;
}

std::optional<Rational> proportionality(const NormalForm& a, const NormalForm& b) {
  if (a.is_zero() && b.is_zero()) return Rational(1);
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  const auto& [ma, ca] = *a.terms().rbegin();
  const auto& [mb, cb] = *b.terms().rbegin();
  if (!(ma == mb)) return std::nullopt;
  Rational c = ca / cb;
  if (!(a - b.scaled(c)).is_zero()) return std::nullopt;
  return c;
}

namespace {

std::optional<NormalForm> closed_integrating_factor(const NormalForm& integrand) {
  const Atom u_atom = make_jet_atom(jet_u());
  const NormalForm u = NormalForm::from_atom(u_atom);
  NormalForm poly;
  // Residues keyed by the linear factor (u itself or a denominator u + r).
  std::map<std::string, std::pair<NormalForm, Rational>> logs;
  auto add_log = [&logs](const NormalForm& base, const Rational& c) {
    auto [it, inserted] = logs.emplace(base.to_string(), std::make_pair(base, c));
    if (!inserted) it->second.second += c;
  };
  for (const auto& [m, c] : integrand.terms()) {
    int k = 0;
    std::optional<Factor> den;
    Monomial rest;
    for (const auto& [a, e] : m.factors) {
      if (a == u_atom) {
        k = e;
      } else if (a.kind() == AtomKind::Parameter) {
        rest.factors.emplace_back(a, e);
      } else if (a.kind() == AtomKind::Denominator && !den) {
        const NormalForm& inner = *a->inner;
        const NormalForm slope = partial_derivative(inner, jet_u());
        if (!(slope == NormalForm(1)) || !constant_in_u(inner - u)) return std::nullopt;
        den = Factor{a, e};
      } else {
        return std::nullopt;
      }
    }
    const NormalForm coeff = NormalForm::from_terms({{rest, c}});
    if (!den) {
      if (k == -1) {
        if (!coeff.is_constant()) return std::nullopt;
        add_log(u, coeff.constant_value());
      } else {
        poly += coeff * u.pow(k + 1).scaled(Rational(1, k + 1));
      }
      continue;
    }
    if (k < 0) return std::nullopt;
    // u^k (u + r)^-m expanded in powers of w = u + r.
    const NormalForm w = *den->first->inner;
    const NormalForm minus_r = u - w;
    const int m_pow = -den->second;
    Rational binom(1);
    for (int j = 0; j <= k; ++j) {
      const NormalForm cj = coeff * minus_r.pow(k - j).scaled(binom);
      const int p = j - m_pow;
      if (p == -1) {
        if (!cj.is_constant()) return std::nullopt;
        add_log(w, cj.constant_value());
      } else {
        poly += cj * w.pow(p + 1).scaled(Rational(1, p + 1));
      }
      binom = binom * (k - j) / (j + 1);
    }
  }
  NormalForm value(1);
  for (const auto& [key, entry] : logs) {
    const auto& [base, residue] = entry;
    if (!is_integer(residue)) return std::nullopt;
    value *= base.pow(-static_cast<int>(residue.get_num().get_si()));
  }
  if (!poly.is_zero()) {
    try {
      value *= NormalForm::exponential(-poly);
    } catch (const UnsupportedExpression&) {
      return std::nullopt;
    }
  }
  return value;
}

}  // namespace

IntegratingFactor integrating_factor(const EquationSpec& spec) {
  IntegratingFactor out;
  out.integrand = (partial_derivative(spec.g(), jet_u()) + spec.h()) * spec.g().pow(-1);
  if (auto closed = closed_integrating_factor(out.integrand)) {
    out.value = *closed;
    out.closed_form = true;
    return out;
  }
  const Atom phi_big = make_function_atom("Phi", 0, jet_form(jet_u()), out.integrand.to_expr());
  out.value = NormalForm::exponential(-NormalForm::from_atom(phi_big));
  return out;
}

std::string to_string(AdjointKind k) {
  switch (k) {
    case AdjointKind::Strict:
      return "strictly self-adjoint";
    case AdjointKind::Quasi:
      return "quasi self-adjoint";
    case AdjointKind::Nonlinear:
      return "nonlinearly self-adjoint";
  }
  return "";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Wronskian:
      return "W!=0";
    case Branch::Affine:
      return "f=a*g+b, a!=0";
    case Branch::ConstantF:
      return "f constant";
  }
  return "";
}

Classification classify(const EquationSpec& spec) {
  spec.check_conditions();
  const JetVar u = jet_u();
  const NormalForm f1 = partial_derivative(spec.f(), u);
  const NormalForm f2 = partial_derivative(f1, u);
  const NormalForm g1 = partial_derivative(spec.g(), u);
  const NormalForm g2 = partial_derivative(g1, u);

  Classification out;
  out.wronskian = f2 * g1 - f1 * g2;
  out.factor = integrating_factor(spec);
  const NormalForm& e = out.factor.value;
  if (!out.wronskian.is_zero()) {
    out.kind = AdjointKind::Quasi;
    out.branch = Branch::Wronskian;
    out.phi = param("c5") * e;
    out.constants = {"c5"};
  } else {
    const NormalForm a = f1 * g1.pow(-1);
    if (!constant_in_u(a)) {
      throw ClassificationFailure("Wronskian vanishes but f'/g' = " + a.to_string() + " depends on u");
    }
    const NormalForm b = spec.f() - a * spec.g();
    if (!constant_in_u(b)) {
      throw ClassificationFailure("Wronskian vanishes but f - a*g = " + b.to_string() + " depends on u");
    }
    out.a = a;
    out.b = b;
    out.kind = AdjointKind::Nonlinear;
    const NormalForm t = var(Direction::T);
    const NormalForm x = var(Direction::X);
    if (!a.is_zero()) {
      out.branch = Branch::Affine;
      out.phi = (param("c1") * NormalForm::exponential(a * x + a * b * t) + param("c2")) * e;
      out.constants = {"c1", "c2"};
    } else {
      out.branch = Branch::ConstantF;
      out.phi = (param("c3") * (x + b * t) + param("c4")) * e;
      out.constants = {"c3", "c4"};
    }
  }
  out.check = verify_substitution(spec.equation(), out.phi);
  out.strictly_self_adjoint = verify_substitution(spec.equation(), jet_form(u)).holds();
  return out;
}

NormalForm quasi_substitution(const EquationSpec& spec) {
  spec.check_conditions();
  return param("M") * integrating_factor(spec).value;
}

}  // namespace jetlaw
