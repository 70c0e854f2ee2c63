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

#include "jetlaw/expr.hpp"

#include <cassert>
#include <utility>

namespace jetlaw {

namespace {

std::shared_ptr<ExprNode> make_node(ExprKind kind) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  return node;
}

const std::shared_ptr<const ExprNode>& zero_node() {
  static const std::shared_ptr<const ExprNode> node = make_node(ExprKind::Constant);
  return node;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(int value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
  auto node = make_node(ExprKind::Constant);
  node->value = value;
  node->value.canonicalize();
  node_ = std::move(node);
}

Expr Expr::constant(const Rational& value) { return Expr(value); }

Expr Expr::variable(Direction d) {
  auto node = make_node(ExprKind::Variable);
  node->direction = d;
  node->name = std::string(1, direction_letter(d));
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::parameter(const std::string& name) {
  auto node = make_node(ExprKind::Parameter);
  node->name = name;
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::jet(const JetVar& v) {
  auto node = make_node(ExprKind::Jet);
  node->jet = v;
  node->name = v.name;
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::function(const std::string& name, const Expr& arg, int order, std::optional<Expr> rule) {
  assert(order >= 0);
  auto node = make_node(ExprKind::Function);
  node->name = name;
  node->order = order;
  node->children = {arg};
  node->rule = std::move(rule);
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::point_function(const std::string& name, PointIndex index, unsigned args) {
  auto node = make_node(ExprKind::PointFunction);
  node->name = name;
  node->index = index;
  node->args = args;
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr();
  if (terms.size() == 1) return terms.front();
  auto node = make_node(ExprKind::Sum);
  node->children = std::move(terms);
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors.front();
  auto node = make_node(ExprKind::Product);
  node->children = std::move(factors);
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::power(const Expr& base, const Rational& exponent) {
  auto node = make_node(ExprKind::Power);
  node->children = {base};
  node->exponent = exponent;
  node->exponent.canonicalize();
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr Expr::exponential(const Expr& arg) {
  auto node = make_node(ExprKind::Exponential);
  node->children = {arg};
  return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
Direction Expr::direction() const { return node_->direction; }
const std::string& Expr::name() const { return node_->name; }
const JetVar& Expr::jet_var() const { return node_->jet; }
int Expr::order() const { return node_->order; }
const PointIndex& Expr::point_index() const { return node_->index; }
unsigned Expr::point_args() const { return node_->args; }
std::span<const Expr> Expr::children() const { return node_->children; }
const Rational& Expr::exponent() const { return node_->exponent; }
const Expr* Expr::rule() const { return node_->rule ? &*node_->rule : nullptr; }

namespace {

void append_flat(std::vector<Expr>& out, const Expr& e, ExprKind kind) {
  if (e.kind() == kind) {
    out.insert(out.end(), e.children().begin(), e.children().end());
  } else {
    out.push_back(e);
  }
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Expr> terms;
  append_flat(terms, a, ExprKind::Sum);
  append_flat(terms, b, ExprKind::Sum);
  return Expr::sum(std::move(terms));
}

Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Expr> factors;
  append_flat(factors, a, ExprKind::Product);
  append_flat(factors, b, ExprKind::Product);
  return Expr::product(std::move(factors));
}

Expr operator/(const Expr& a, const Expr& b) { return a * Expr::power(b, Rational(-1)); }

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Rational& exponent) { return Expr::power(base, exponent); }

Expr exp(const Expr& arg) { return Expr::exponential(arg); }

}  // namespace jetlaw
