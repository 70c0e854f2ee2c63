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

#include "jetlaw/substitute.hpp"

#include "jetlaw/error.hpp"
#include "jetlaw/normal_form.hpp"

namespace jetlaw {

namespace {

class Substituter {
 public:
  explicit Substituter(const Bindings& b) : b_(b) {
    for (const auto& [v, e] : b_.jets) {
      if (v.is_base()) continue;
      if (b_.jets.count(v.base()) != 0) {
        throw BindingConflict("cannot bind " + v.to_string() + " together with its base variable " + v.name);
      }
    }
  }

  Expr run(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Constant:
        return e;
      case ExprKind::Variable:
      case ExprKind::Parameter: {
        auto it = b_.symbols.find(e.name());
        return it == b_.symbols.end() ? e : it->second;
      }
      case ExprKind::Jet:
        return jet(e.jet_var(), e);
      case ExprKind::Function: {
        Expr arg = run(e.children()[0]);
        auto it = b_.functions.find(e.name());
        if (it == b_.functions.end()) {
          std::optional<Expr> rule;
          if (e.rule() != nullptr) rule = *e.rule();
          return Expr::function(e.name(), arg, e.order(), rule);
        }
        NormalForm def = normalize(it->second);
        for (int k = 0; k < e.order(); ++k) def = partial_derivative(def, jet_u());
        NormalForm at = normalize(arg);
        return replace_atoms(def, [&at](const Atom& a) -> std::optional<NormalForm> {
                 if (a.kind() == AtomKind::Jet && a->jet == jet_u()) return at;
                 return std::nullopt;
               }).to_expr();
      }
      case ExprKind::PointFunction: {
        auto it = b_.point_functions.find(e.name());
        if (it == b_.point_functions.end()) return e;
        NormalForm def = normalize(it->second);
        const PointIndex& idx = e.point_index();
        for (int k = 0; k < idx.t; ++k) def = explicit_derivative(def, Direction::T);
        for (int k = 0; k < idx.x; ++k) def = explicit_derivative(def, Direction::X);
        for (int k = 0; k < idx.u; ++k) def = partial_derivative(def, jet_u());
        return def.to_expr();
      }
      case ExprKind::Sum:
      case ExprKind::Product: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const Expr& c : e.children()) kids.push_back(run(c));
        return e.kind() == ExprKind::Sum ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
      }
      case ExprKind::Power:
        return Expr::power(run(e.children()[0]), e.exponent());
      case ExprKind::Exponential:
        return Expr::exponential(run(e.children()[0]));
    }
    return e;
  }

 private:
  Expr jet(const JetVar& v, const Expr& original) {
    if (auto it = b_.jets.find(v); it != b_.jets.end()) return it->second;
    if (v.is_base()) return original;
    auto base = b_.jets.find(v.base());
    if (base == b_.jets.end()) return original;
    if (auto it = prolonged_.find(v); it != prolonged_.end()) return it->second;
    NormalForm d = normalize(base->second);
    for (int k = 0; k < v.t_order; ++k) d = total_derivative(d, Direction::T);
    for (int k = 0; k < v.x_order; ++k) d = total_derivative(d, Direction::X);
    Expr out = d.to_expr();
    prolonged_.emplace(v, out);
    return out;
  }

  const Bindings& b_;
  std::map<JetVar, Expr> prolonged_;
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) { return Substituter(bindings).run(e); }

}  // namespace jetlaw
