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

#ifndef JETLAW_SUBSTITUTE_HPP
#define JETLAW_SUBSTITUTE_HPP

#include <map>
#include <string>

#include "jetlaw/expr.hpp"

namespace jetlaw {

/// Simultaneous substitution targets.
///
/// Binding the base coordinate of a dependent variable (say nu) also replaces
/// each of its derivative coordinates nu_{t^a x^b} by D_t^a D_x^b of the
/// replacement. Binding a function symbol replaces every derivative order of
/// it: f^(k)(arg) becomes the k-th u-derivative of the definition evaluated at
/// arg. Point-function definitions are expressions in t, x, u and are
/// differentiated explicitly.
struct Bindings {
  std::map<JetVar, Expr> jets;
  std::map<std::string, Expr> functions;
  std::map<std::string, Expr> point_functions;
  std::map<std::string, Expr> symbols;  // t, x and parameters

  Bindings& jet(const JetVar& v, Expr e) {
    jets.insert_or_assign(v, std::move(e));
    return *this;
  }
  Bindings& function(const std::string& name, Expr e) {
    functions.insert_or_assign(name, std::move(e));
    return *this;
  }
  Bindings& point_function(const std::string& name, Expr e) {
    point_functions.insert_or_assign(name, std::move(e));
    return *this;
  }
  Bindings& symbol(const std::string& name, Expr e) {
    symbols.insert_or_assign(name, std::move(e));
    return *this;
  }
};

/// Replaces every bound occurrence in one pass; inserted material is not
/// substituted again and the result is not normalized. Throws BindingConflict
/// when a derivative coordinate is bound together with its base variable.
Expr substitute(const Expr& e, const Bindings& bindings);

}  // namespace jetlaw

#endif  // JETLAW_SUBSTITUTE_HPP
