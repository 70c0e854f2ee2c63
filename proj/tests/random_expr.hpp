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

// Seeded random expressions for the property tests.

#ifndef JETLAW_TESTS_RANDOM_EXPR_HPP
#define JETLAW_TESTS_RANDOM_EXPR_HPP

#include <random>
#include <string>
#include <vector>

#include "jetlaw/calculus.hpp"
#include "jetlaw/expr.hpp"

namespace jetlaw::testing {

class RandomExpr {
 public:
  explicit RandomExpr(unsigned seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Expr coefficient() {
    const int num = pick(-4, 4);
    return sym::rational(num == 0 ? 1 : num, pick(1, 3));
  }

  /// exp(a t + b x) with small integer a, b.
  Expr exponential() {
    return exp(Expr(pick(-2, 2)) * sym::t() + Expr(pick(-2, 2)) * sym::x());
  }

  /// Leaf over t, x, u and jets up to max_order, parameters and f(u).
  Expr leaf(int max_order, bool functions) {
    const int kinds = max_order >= 0 ? 8 : 4;
    switch (pick(0, functions ? kinds : kinds - 2)) {
      case 0: return coefficient();
      case 1: return sym::t();
      case 2: return sym::x();
      case 3: return sym::param(pick(0, 1) == 0 ? "a" : "c1");
      case 4: return functions ? sym::fn(pick(0, 1) == 0 ? "f" : "g", pick(0, 2)) : sym::u();
      case 5: return exponential();
      default: {
        if (max_order < 0) return sym::x();
        const int order = pick(0, max_order);
        const int t_order = pick(0, order);
        return sym::u(t_order, order - t_order);
      }
    }
  }

  /// Random polynomial-like expression. Jets up to max_order (use -1 for
  /// expressions in t, x, u only, which are then point expressions).
  Expr expression(int depth, int max_order, bool functions = true, bool denominators = false) {
    if (depth <= 0) {
      if (max_order < 0 && pick(0, 2) == 0) return sym::u();
      return leaf(max_order, functions);
    }
    switch (pick(0, denominators ? 5 : 4)) {
      case 0:
      case 1:
        return expression(depth - 1, max_order, functions, denominators) +
               expression(depth - 1, max_order, functions, denominators);
      case 2:
      case 3:
        return expression(depth - 1, max_order, functions, denominators) *
               expression(depth - 1, max_order, functions, denominators);
      case 4:
        return pow(expression(depth - 1, max_order, functions, false), pick(2, 3));
      default:
        return expression(depth - 1, max_order, functions, false) / (Expr(pick(1, 3)) + sym::u());
    }
  }

  /// Point vector field with components in t, x, u.
  VectorField point_field(const std::string& label) {
    return VectorField{expression(2, -1, false), expression(2, -1, false), expression(2, -1, false), label};
  }

 private:
  std::mt19937 rng_;
};

}  // namespace jetlaw::testing

#endif  // JETLAW_TESTS_RANDOM_EXPR_HPP
