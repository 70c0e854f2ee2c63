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

#include "jetlaw/calculus.hpp"

#include <algorithm>
#include <set>

#include "jetlaw/error.hpp"

namespace jetlaw {

namespace {

NormalForm jet_form(const JetVar& v) { return NormalForm::from_atom(make_jet_atom(v)); }

NormalForm total_derivative_n(NormalForm e, Direction d, int times) {
  for (int i = 0; i < times && !e.is_zero(); ++i) e = total_derivative(e, d);
  return e;
}

std::set<JetVar> all_jets(const NormalForm& e) {
  std::set<JetVar> found;
  (void)e.mentions([&](const Atom& a) {
    if (a.kind() == AtomKind::Jet) found.insert(a->jet);
    return false;
  });
  return found;
}

bool has_time_derivative(const NormalForm& e) {
  return e.mentions([](const Atom& a) { return a.kind() == AtomKind::Jet && a->jet.t_order > 0; });
}

int max_u_order(const NormalForm& e) {
  int n = 0;
  for (const JetVar& v : jet_variables(e, "u")) n = std::max(n, v.order());
  return n;
}

}  // namespace

Expr partial(const Expr& e, const JetVar& v) { return partial_derivative(normalize(e), v).to_expr(); }

Expr total_derivative(const Expr& e, Direction d) { return total_derivative(normalize(e), d).to_expr(); }

NormalForm euler(const NormalForm& lagrangian, const std::string& dependent) {
  NormalForm out;
  for (const JetVar& v : jet_variables(lagrangian, dependent)) {
    NormalForm term = partial_derivative(lagrangian, v);
    term = total_derivative_n(total_derivative_n(std::move(term), Direction::T, v.t_order), Direction::X, v.x_order);
    if (v.order() % 2 == 0) {
      out += term;
    } else {
      out -= term;
    }
  }
  return out;
}

Expr euler(const Expr& lagrangian, const std::string& dependent) {
  return euler(normalize(lagrangian), dependent).to_expr();
}

void VectorField::validate() const {
  for (const Expr* c : {&xi_t, &xi_x, &eta}) {
    NormalForm f = normalize(*c);
    for (const JetVar& v : all_jets(f)) {
      if (v.name != "u" || !v.is_base()) {
        throw InvalidInput("vector field component depends on " + v.to_string() +
                           "; only t, x, u and constants are allowed");
      }
    }
  }
}

const NormalForm& ProlongedField::coefficient(int t_order, int x_order) const {
  auto it = coefficients.find({t_order, x_order});
  if (it == coefficients.end()) {
    throw InvalidInput("prolongation coefficient eta^" + jet_u(t_order, x_order).to_string() +
                       " not computed");
  }
  return it->second;
}

ProlongedField prolong(const VectorField& field, int order) {
  field.validate();
  ProlongedField out;
  out.base = field;
  out.order = order;
  const NormalForm xt = normalize(field.xi_t);
  const NormalForm xx = normalize(field.xi_x);
  const NormalForm dxt[2] = {total_derivative(xt, Direction::T), total_derivative(xt, Direction::X)};
  const NormalForm dxx[2] = {total_derivative(xx, Direction::T), total_derivative(xx, Direction::X)};
  out.coefficients.emplace(std::make_pair(0, 0), normalize(field.eta));
  for (int n = 1; n <= order; ++n) {
    for (int a = n; a >= 0; --a) {
      const int b = n - a;
      // Parent multi-index and the direction that extends it.
      const bool along_x = b > 0;
      const Direction d = along_x ? Direction::X : Direction::T;
      const JetVar parent = along_x ? jet_u(a, b - 1) : jet_u(a - 1, b);
      const int i = along_x ? 1 : 0;
      const NormalForm& eta = out.coefficients.at({parent.t_order, parent.x_order});
      NormalForm next = total_derivative(eta, d);
      if (!dxt[i].is_zero()) next -= jet_form(parent.derived(Direction::T)) * dxt[i];
      if (!dxx[i].is_zero()) next -= jet_form(parent.derived(Direction::X)) * dxx[i];
      out.coefficients.emplace(std::make_pair(a, b), std::move(next));
    }
  }
  return out;
}

NormalForm apply_prolongation(const VectorField& field, const NormalForm& f) {
  const ProlongedField pr = prolong(field, std::max(1, max_u_order(f)));
  NormalForm out = normalize(field.xi_t) * explicit_derivative(f, Direction::T) +
                   normalize(field.xi_x) * explicit_derivative(f, Direction::X);
  std::vector<JetVar> vars = jet_variables(f, "u");
  if (std::find(vars.begin(), vars.end(), jet_u()) == vars.end()) vars.push_back(jet_u());
  for (const JetVar& v : vars) {
    NormalForm df = partial_derivative(f, v);
    if (!df.is_zero()) out += pr.coefficient(v.t_order, v.x_order) * df;
  }
  return out;
}

EquationReducer::EquationReducer(const NormalForm& equation) : equation_(equation) {
  const JetVar ut = jet_u(1, 0);
  const NormalForm alpha = partial_derivative(equation, ut);
  if (alpha.is_zero()) throw ReductionError("equation does not involve u_t");
  if (!partial_derivative(alpha, ut).is_zero()) throw ReductionError("equation is not linear in u_t");
  const NormalForm beta = equation - alpha * jet_form(ut);
  if (has_time_derivative(alpha) || has_time_derivative(beta)) {
    throw ReductionError("equation is not of evolution form u_t = K[u] in x-derivatives");
  }
  rhs_ = -(beta * alpha.pow(-1));
}

NormalForm EquationReducer::coordinate(int t_order, int x_order) {
  if (t_order == 0) return jet_form(jet_u(0, x_order));
  auto key = std::make_pair(t_order, x_order);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  NormalForm value = t_order == 1 ? total_derivative_n(rhs_, Direction::X, x_order)
                                  : reduce(total_derivative(coordinate(t_order - 1, x_order), Direction::T));
  memo_.emplace(key, value);
  return value;
}

NormalForm EquationReducer::reduce(const NormalForm& e) {
  if (!has_time_derivative(e)) return e;
  return replace_atoms(e, [this](const Atom& a) -> std::optional<NormalForm> {
    if (a.kind() == AtomKind::Jet && a->jet.name == "u" && a->jet.t_order > 0) {
      return coordinate(a->jet.t_order, a->jet.x_order);
    }
    return std::nullopt;
  });
}

Expr reduce_modulo(const Expr& e, const Expr& equation) {
  EquationReducer r(normalize(equation));
  return r.reduce(normalize(e)).to_expr();
}

NormalForm symmetry_residual(const VectorField& field, const NormalForm& equation) {
  EquationReducer r(equation);
  return r.reduce(apply_prolongation(field, equation));
}

Expr symmetry_residual(const VectorField& field, const Expr& equation) {
  return symmetry_residual(field, normalize(equation)).to_expr();
}

std::optional<NormalForm> antiderivative(const NormalForm& e, const JetVar& v) {
  const Atom target = make_jet_atom(v);
  NormalForm out;
  for (const auto& [m, c] : e.terms()) {
    int k = 0;
    Monomial rest;
    for (const auto& [a, p] : m.factors) {
      if (a == target) {
        k = p;
        continue;
      }
      if (a.kind() == AtomKind::Function || a.kind() == AtomKind::Exponential ||
          a.kind() == AtomKind::Denominator) {
        const bool depends = a->inner->mentions([&](const Atom& b) {
          return b == target || (v == jet_u() && b.kind() == AtomKind::PointFunction && (b->args & kArgU) != 0);
        });
        if (depends) return std::nullopt;
      }
      if (v == jet_u() && a.kind() == AtomKind::PointFunction && (a->args & kArgU) != 0) return std::nullopt;
      rest.factors.emplace_back(a, p);
    }
    if (k == -1) return std::nullopt;
    out += NormalForm::from_terms({{rest, Rational(c / (k + 1))}}) * NormalForm::from_atom(target, k + 1);
  }
  return out;
}

std::optional<NormalForm> antiderivative_x(const NormalForm& e) {
  const Atom xa = make_variable_atom(Direction::X);
  NormalForm out;
  for (const auto& [m, c] : e.terms()) {
    int k = 0;
    std::optional<Atom> ex;
    Monomial rest;
    for (const auto& [a, p] : m.factors) {
      if (a == xa) {
        k = p;
        continue;
      }
      if (a.kind() == AtomKind::Jet) return std::nullopt;
      if (a.kind() == AtomKind::Exponential) {
        if (a->inner->mentions([](const Atom& b) { return b.kind() == AtomKind::Jet; })) return std::nullopt;
        ex = a;
        continue;
      }
      if (a.kind() == AtomKind::PointFunction && (a->args & kArgX) != 0) return std::nullopt;
      if (a.kind() == AtomKind::Function || a.kind() == AtomKind::Denominator) {
        if (a->inner->mentions([&](const Atom& b) { return b == xa || b.kind() == AtomKind::Jet; })) {
          return std::nullopt;
        }
      }
      rest.factors.emplace_back(a, p);
    }
    const NormalForm coeff = NormalForm::from_terms({{rest, c}});
    if (!ex) {
      if (k == -1) return std::nullopt;
      out += coeff * NormalForm::from_atom(xa, k + 1).scaled(Rational(1, k + 1));
      continue;
    }
    const NormalForm e_form = NormalForm::from_atom(*ex);
    const NormalForm alpha = explicit_derivative(*(*ex)->inner, Direction::X);
    if (alpha.is_zero()) {
      if (k == -1) return std::nullopt;
      out += coeff * e_form * NormalForm::from_atom(xa, k + 1).scaled(Rational(1, k + 1));
      continue;
    }
    if (k < 0) return std::nullopt;
    // x^k e^{alpha x} integrates to e^{alpha x} sum_j (-1)^j k!/(k-j)! x^{k-j} alpha^{-(j+1)}.
    const NormalForm inv = alpha.pow(-1);
    NormalForm series;
    NormalForm inv_power = inv;
    Rational falling(1);
    for (int j = 0; j <= k; ++j) {
      NormalForm piece = NormalForm::from_atom(xa, k - j) * inv_power;
      series += piece.scaled(j % 2 == 0 ? falling : Rational(-falling));
      falling *= (k - j);
      inv_power *= inv;
    }
    out += coeff * e_form * series;
  }
  return out;
}

std::optional<NormalForm> integrate_dx(const NormalForm& e) {
  if (e.is_zero()) return NormalForm();
  if (has_time_derivative(e)) return std::nullopt;
  std::optional<JetVar> top;
  for (const JetVar& v : all_jets(e)) {
    if (v.x_order > 0 && (!top || v.x_order > top->x_order)) top = v;
  }
  if (!top) {
    for (const JetVar& v : all_jets(e)) {
      if (!partial_derivative(e, v).is_zero()) return std::nullopt;
    }
    if (e.mentions([](const Atom& a) { return a.kind() == AtomKind::PointFunction && (a->args & kArgU) != 0; })) {
      return std::nullopt;
    }
    return antiderivative_x(e);
  }
  const NormalForm p = partial_derivative(e, *top);
  if (!partial_derivative(p, *top).is_zero()) return std::nullopt;
  const auto q = antiderivative(p, top->derived(Direction::X, -1));
  if (!q) return std::nullopt;
  const NormalForm rest = e - total_derivative(*q, Direction::X);
  if (!partial_derivative(rest, *top).is_zero()) return std::nullopt;
  const auto r = integrate_dx(rest);
  if (!r) return std::nullopt;
  return *q + *r;
}

}  // namespace jetlaw
