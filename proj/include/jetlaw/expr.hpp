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

#ifndef JETLAW_EXPR_HPP
#define JETLAW_EXPR_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jetlaw/jet.hpp"
#include "jetlaw/rational.hpp"

namespace jetlaw {

enum class ExprKind {
  Constant,
  Variable,       // independent variable t or x
  Parameter,      // named constant such as c1, a, b, M
  Jet,            // derivative coordinate of u or nu
  Function,       // one-argument function symbol f^(k)(arg)
  PointFunction,  // partial derivative of an unknown of (t, x, u)
  Sum,
  Product,
  Power,
  Exponential,
};

/// Derivative multi-index of a point function with respect to (t, x, u).
struct PointIndex {
  int t = 0;
  int x = 0;
  int u = 0;
  auto operator<=>(const PointIndex&) const = default;
};

/// Which of (t, x, u) a point function depends on.
enum PointArg : unsigned { kArgT = 1U, kArgX = 2U, kArgU = 4U, kArgTXU = 7U };

struct ExprNode;

/// Immutable symbolic expression. Copies share structure; nothing is
/// normalized on construction.
class Expr {
 public:
  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr constant(const Rational& value);
  static Expr variable(Direction d);
  static Expr parameter(const std::string& name);
  static Expr jet(const JetVar& v);
  /// f^(order)(arg). A rule, when given, is the first derivative written as an
  /// expression in the placeholder u; the symbol then never grows primes.
  static Expr function(const std::string& name, const Expr& arg, int order = 0,
                       std::optional<Expr> rule = std::nullopt);
  static Expr point_function(const std::string& name, PointIndex index = {},
                             unsigned args = kArgTXU);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Rational& exponent);
  static Expr exponential(const Expr& arg);

  [[nodiscard]] ExprKind kind() const;
  [[nodiscard]] const Rational& value() const;
  [[nodiscard]] Direction direction() const;
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] const JetVar& jet_var() const;
  [[nodiscard]] int order() const;
  [[nodiscard]] const PointIndex& point_index() const;
  [[nodiscard]] unsigned point_args() const;
  [[nodiscard]] std::span<const Expr> children() const;
  [[nodiscard]] const Rational& exponent() const;
  [[nodiscard]] const Expr* rule() const;

  [[nodiscard]] bool is_constant() const { return kind() == ExprKind::Constant; }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  Rational value;
  Direction direction = Direction::T;
  std::string name;
  JetVar jet;
  int order = 0;
  PointIndex index;
  unsigned args = kArgTXU;
  std::vector<Expr> children;
  Rational exponent;
  std::optional<Expr> rule;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Rational& exponent);
inline Expr pow(const Expr& base, int exponent) { return pow(base, Rational(exponent)); }
Expr exp(const Expr& arg);

namespace sym {

inline Expr t() { return Expr::variable(Direction::T); }
inline Expr x() { return Expr::variable(Direction::X); }
inline Expr u(int t_order = 0, int x_order = 0) { return Expr::jet(jet_u(t_order, x_order)); }
inline Expr nu(int t_order = 0, int x_order = 0) { return Expr::jet(jet_nu(t_order, x_order)); }
inline Expr param(const std::string& name) { return Expr::parameter(name); }
inline Expr fn(const std::string& name, int order = 0) { return Expr::function(name, u(), order); }
inline Expr rational(long num, long den = 1) { return Expr(make_rational(num, den)); }

}  // namespace sym

}  // namespace jetlaw

#endif  // JETLAW_EXPR_HPP
