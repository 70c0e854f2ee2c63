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

#ifndef JETLAW_NORMAL_FORM_HPP
#define JETLAW_NORMAL_FORM_HPP

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetlaw/expr.hpp"

namespace jetlaw {

class NormalForm;

// Order matters: it is the factor order used when printing a monomial.
enum class AtomKind {
  Variable,
  Parameter,
  Jet,
  PointFunction,
  Function,
  Exponential,
  Denominator,  // an irreducible-looking polynomial, only ever to a negative power
};

struct AtomData {
  AtomKind kind = AtomKind::Variable;
  Direction direction = Direction::T;
  std::string name;
  JetVar jet;
  PointIndex index;
  unsigned args = kArgTXU;
  int order = 0;
  std::shared_ptr<const NormalForm> inner;
  std::optional<Expr> rule;
  std::shared_ptr<const NormalForm> rule_form;
  std::string text;  // printed form
  std::string key;   // text plus anything printing hides (derivative rules)
};

/// Indivisible factor of a monomial. Atoms are compared by kind then key.
class Atom {
 public:
  explicit Atom(std::shared_ptr<const AtomData> data) : data_(std::move(data)) {}

  const AtomData& operator*() const { return *data_; }
  const AtomData* operator->() const { return data_.get(); }
  [[nodiscard]] AtomKind kind() const { return data_->kind; }
  [[nodiscard]] const std::string& key() const { return data_->key; }
  [[nodiscard]] const std::string& text() const { return data_->text; }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.data_ == b.data_ || (a.kind() == b.kind() && a.key() == b.key());
  }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (a.data_ == b.data_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    return a.key() <=> b.key();
  }

 private:
  std::shared_ptr<const AtomData> data_;
};

Atom make_variable_atom(Direction d);
Atom make_parameter_atom(const std::string& name);
Atom make_jet_atom(const JetVar& v);
Atom make_point_function_atom(const std::string& name, PointIndex index, unsigned args);
Atom make_function_atom(const std::string& name, int order, const NormalForm& arg,
                        const std::optional<Expr>& rule);

using Factor = std::pair<Atom, int>;

/// Product of atom powers. Factors are sorted, exponents are nonzero, and at
/// most one exponential factor (with exponent 1) is present.
struct Monomial {
  std::vector<Factor> factors;

  [[nodiscard]] bool empty() const { return factors.empty(); }
  [[nodiscard]] int exponent_of(const Atom& a) const;

  friend bool operator==(const Monomial& a, const Monomial& b);
  /// Lexicographic monomial order: at the first atom whose exponents differ,
  /// the larger exponent is the larger monomial.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
};

/// Canonical sum of monomials with exact rational coefficients. Negative
/// powers of polynomials are kept over a single reduced denominator per
/// polynomial, so a form is zero exactly when it has no terms.
class NormalForm {
 public:
  using Terms = std::map<Monomial, Rational>;

  NormalForm() = default;
  explicit NormalForm(const Rational& c);
  explicit NormalForm(int c) : NormalForm(Rational(c)) {}

  static NormalForm from_atom(const Atom& a, int exponent = 1);
  /// exp(arg); throws UnsupportedExpression unless arg is linear in t, x with
  /// coefficients free of derivative coordinates.
  static NormalForm exponential(const NormalForm& arg);
  /// Builds from raw terms and brings them to canonical form.
  static NormalForm from_terms(Terms terms);

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] Rational constant_value() const;
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] NormalForm pow(int n) const;
  [[nodiscard]] NormalForm scaled(const Rational& c) const;

  friend NormalForm operator+(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator-(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
  NormalForm operator-() const { return scaled(Rational(-1)); }
  NormalForm& operator+=(const NormalForm& b) { return *this = *this + b; }
  NormalForm& operator-=(const NormalForm& b) { return *this = *this - b; }
  NormalForm& operator*=(const NormalForm& b) { return *this = *this * b; }

  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] Expr to_expr() const;

  /// True when some atom, possibly nested inside a function argument,
  /// exponential or denominator, satisfies pred.
  [[nodiscard]] bool mentions(const std::function<bool(const Atom&)>& pred) const;

 private:
  Terms terms_;
};

NormalForm normalize(const Expr& e);
bool is_zero(const Expr& e);
inline bool is_zero(const NormalForm& e) { return e.is_zero(); }

/// Rebuilds e with atoms replaced where fn returns a value; other atoms are
/// rebuilt with their nested forms processed recursively.
NormalForm replace_atoms(const NormalForm& e,
                         const std::function<std::optional<NormalForm>(const Atom&)>& fn);

/// Applies a derivation given its action on single atoms (Leibniz rule).
NormalForm derive(const NormalForm& e, const std::function<NormalForm(const Atom&)>& atom_rule);

NormalForm total_derivative(const NormalForm& e, Direction d);
/// Formal partial derivative in a jet coordinate; point functions of u and
/// functions of u differentiate through u.
NormalForm partial_derivative(const NormalForm& e, const JetVar& v);
/// Partial derivative in t or x with every jet coordinate held fixed.
NormalForm explicit_derivative(const NormalForm& e, Direction d);

/// Monomial in a chosen set of jet coordinates, e.g. {u_x: 2}.
using JetMonomial = std::map<JetVar, int>;

std::map<JetMonomial, NormalForm> collect(const NormalForm& e, const std::vector<JetVar>& vars);
std::map<JetMonomial, Expr> collect(const Expr& e, const std::vector<JetVar>& vars);
std::string to_string(const JetMonomial& m);

/// Jet coordinates of the named dependent variable occurring in e (nested
/// occurrences included), sorted.
std::vector<JetVar> jet_variables(const NormalForm& e, const std::string& name);

}  // namespace jetlaw

#endif  // JETLAW_NORMAL_FORM_HPP
