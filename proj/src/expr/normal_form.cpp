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

#include "jetlaw/normal_form.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "jetlaw/error.hpp"

namespace jetlaw {

namespace {

using Terms = NormalForm::Terms;

std::string point_text(const std::string& name, PointIndex index, unsigned args) {
  std::string suffix = std::string(index.t, 't') + std::string(index.x, 'x') + std::string(index.u, 'u');
  std::string text = suffix.empty() ? name : name + "_" + suffix;
  std::string arglist;
  auto add = [&arglist](const char* v) {
    if (!arglist.empty()) arglist += ",";
    arglist += v;
  };
  if (args & kArgT) add("t");
  if (args & kArgX) add("x");
  if (args & kArgU) add("u");
  return text + "(" + arglist + ")";
}

Atom finish(std::shared_ptr<AtomData> data) {
  if (data->key.empty()) data->key = data->text;
  return Atom(std::shared_ptr<const AtomData>(std::move(data)));
}

Atom make_exponential_atom(NormalForm arg) {
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::Exponential;
  data->text = "exp(" + arg.to_string() + ")";
  data->inner = std::make_shared<const NormalForm>(std::move(arg));
  return finish(std::move(data));
}

Atom make_denominator_atom(NormalForm poly) {
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::Denominator;
  data->text = "(" + poly.to_string() + ")";
  data->inner = std::make_shared<const NormalForm>(std::move(poly));
  return finish(std::move(data));
}

void add_term(Terms& terms, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

void add_terms(Terms& into, const Terms& from, const Rational& scale = Rational(1)) {
  for (const auto& [m, c] : from) add_term(into, m, Rational(c * scale));
}

const NormalForm* exponential_arg(const Monomial& m) {
  for (const auto& [a, e] : m.factors) {
    if (a.kind() == AtomKind::Exponential) return a->inner.get();
  }
  return nullptr;
}

void insert_sorted(std::vector<Factor>& factors, const Atom& a, int e) {
  auto it = std::lower_bound(factors.begin(), factors.end(), a,
                             [](const Factor& f, const Atom& key) { return f.first < key; });
  if (it != factors.end() && it->first == a) {
    it->second += e;
    if (it->second == 0) factors.erase(it);
  } else if (e != 0) {
    factors.insert(it, Factor{a, e});
  }
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  const NormalForm* ea = exponential_arg(a);
  const NormalForm* eb = exponential_arg(b);
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  auto skip_exp = [](auto& it, auto end) {
    while (it != end && it->first.kind() == AtomKind::Exponential) ++it;
  };
  skip_exp(i, a.factors.end());
  skip_exp(j, b.factors.end());
  while (i != a.factors.end() || j != b.factors.end()) {
    if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) {
      out.factors.push_back(*i++);
    } else if (i == a.factors.end() || j->first < i->first) {
      out.factors.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0) out.factors.emplace_back(i->first, e);
      ++i;
      ++j;
    }
    skip_exp(i, a.factors.end());
    skip_exp(j, b.factors.end());
  }
  if (ea != nullptr || eb != nullptr) {
    NormalForm arg = ea == nullptr ? *eb : (eb == nullptr ? *ea : *ea + *eb);
    if (!arg.is_zero()) insert_sorted(out.factors, make_exponential_atom(std::move(arg)), 1);
  }
  return out;
}

Monomial power(const Monomial& m, int n) {
  Monomial out;
  for (const auto& [a, e] : m.factors) {
    if (a.kind() == AtomKind::Exponential) {
      NormalForm arg = a->inner->scaled(Rational(n));
      if (!arg.is_zero()) out.factors.emplace_back(make_exponential_atom(std::move(arg)), 1);
    } else if (e * n != 0) {
      out.factors.emplace_back(a, e * n);
    }
  }
  return out;
}

Monomial without(const Monomial& m, const Atom& a) {
  Monomial out;
  for (const auto& f : m.factors) {
    if (!(f.first == a)) out.factors.push_back(f);
  }
  return out;
}

Monomial with_factor(const Monomial& m, const Atom& a, int e) {
  Monomial out = m;
  insert_sorted(out.factors, a, e);
  return out;
}

Terms raw_mul(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) add_term(out, multiply(ma, mb), Rational(ca * cb));
  }
  return out;
}

Terms raw_pow(const Terms& base, int n) {
  assert(n >= 0);
  Terms result;
  add_term(result, Monomial{}, Rational(1));
  Terms square = base;
  while (n > 0) {
    if (n & 1) result = raw_mul(result, square);
    n >>= 1;
    if (n > 0) square = raw_mul(square, square);
  }
  return result;
}

/// m^n with positive powers of denominator atoms multiplied out.
Terms monomial_power_expanded(const Monomial& m, const Rational& c, int n) {
  Monomial p = power(m, n);
  Monomial kept;
  Terms result;
  Rational coeff = 1;
  if (n >= 0) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(n));
    coeff = Rational(num, den);
  } else {
    if (c == 0) throw UnsupportedExpression("division by zero");
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(-n));
    mpz_pow_ui(den.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(-n));
    coeff = Rational(num, den);
  }
  coeff.canonicalize();
  add_term(result, Monomial{}, coeff);
  for (const auto& [a, e] : p.factors) {
    if (a.kind() == AtomKind::Denominator && e > 0) {
      result = raw_mul(result, raw_pow(a->inner->terms(), e));
    } else {
      kept.factors.emplace_back(a, e);
    }
  }
  Terms kept_terms;
  add_term(kept_terms, kept, Rational(1));
  return raw_mul(result, kept_terms);
}

bool mentions_exponential(const Terms& terms) {
  for (const auto& [m, c] : terms) {
    for (const auto& [a, e] : m.factors) {
      if (a.kind() == AtomKind::Exponential) return true;
    }
  }
  return false;
}

/// Exact quotient t / p, or nullopt when p does not divide t. Atoms that do
/// not occur in p behave as coefficients.
std::optional<Terms> exact_divide(const Terms& t, const Terms& p) {
  if (mentions_exponential(p)) return std::nullopt;
  std::set<Atom> patoms;
  for (const auto& [m, c] : p) {
    for (const auto& [a, e] : m.factors) patoms.insert(a);
  }
  std::map<Atom, int> shift;
  for (const auto& [m, c] : t) {
    for (const auto& [a, e] : m.factors) {
      if (e < 0 && patoms.count(a) != 0) shift[a] = std::max(shift[a], -e);
    }
  }
  Monomial mu;
  for (const auto& [a, e] : shift) mu.factors.emplace_back(a, e);
  Terms rem;
  for (const auto& [m, c] : t) add_term(rem, multiply(m, mu), c);

  const auto& [lead, lc] = *p.rbegin();
  Terms quotient;
  std::size_t guard = 0;
  while (!rem.empty()) {
    if (++guard > 100000) return std::nullopt;
    const Monomial lm = rem.rbegin()->first;
    const Rational lcr = rem.rbegin()->second;
    Monomial q;
    for (const auto& [a, e] : lead.factors) {
      if (lm.exponent_of(a) < e) return std::nullopt;
    }
    q = lm;
    for (const auto& [a, e] : lead.factors) insert_sorted(q.factors, a, -e);
    Rational qc = lcr / lc;
    add_term(quotient, q, qc);
    for (const auto& [pm, pc] : p) add_term(rem, multiply(q, pm), Rational(-qc * pc));
  }
  Monomial inv = power(mu, -1);
  Terms out;
  for (const auto& [m, c] : quotient) add_term(out, multiply(m, inv), c);
  return out;
}

bool canonicalize_pass(Terms& terms) {
  bool changed = false;
  std::set<Atom> dens;
  for (const auto& [m, c] : terms) {
    for (const auto& [a, e] : m.factors) {
      if (a.kind() == AtomKind::Denominator) dens.insert(a);
    }
  }
  for (const Atom& den : dens) {
    int k_max = 0;
    for (const auto& [m, c] : terms) k_max = std::max(k_max, -m.exponent_of(den));
    if (k_max == 0) continue;
    const Terms& poly = den->inner->terms();
    std::vector<Terms> powers(static_cast<std::size_t>(k_max) + 1);
    add_term(powers[0], Monomial{}, Rational(1));
    for (int i = 1; i <= k_max; ++i) powers[i] = raw_mul(powers[i - 1], poly);
    Terms numerator;
    for (const auto& [m, c] : terms) {
      int e = m.exponent_of(den);
      Monomial rest = without(m, den);
      for (const auto& [pm, pc] : powers[k_max + e]) add_term(numerator, multiply(rest, pm), Rational(c * pc));
    }
    int divided = 0;
    while (divided < k_max && !numerator.empty()) {
      auto q = exact_divide(numerator, poly);
      if (!q) break;
      numerator = std::move(*q);
      ++divided;
    }
    if (numerator.empty()) {
      terms.clear();
      return false;
    }
    if (divided > 0) changed = true;
    int remaining = k_max - divided;
    Terms out;
    for (const auto& [m, c] : numerator) add_term(out, remaining > 0 ? with_factor(m, den, -remaining) : m, c);
    terms = std::move(out);
  }
  return changed;
}

// A later denominator can expose a factor shared with an earlier one, so
// passes repeat until the terms stop changing.
void canonicalize(Terms& terms) {
  for (int pass = 0; pass < 16; ++pass) {
    Terms before = terms;
    canonicalize_pass(terms);
    if (terms == before) return;
  }
}

bool has_denominator(const Terms& terms) {
  for (const auto& [m, c] : terms) {
    for (const auto& [a, e] : m.factors) {
      if (a.kind() == AtomKind::Denominator) return true;
    }
  }
  return false;
}

NormalForm from_canonical(Terms terms);

/// s^(-n) for a form with at least two terms.
NormalForm denominator_power(const Terms& s, int n) {
  // Uniform denominator part of a canonical form.
  Monomial dpart;
  for (const auto& [a, e] : s.begin()->first.factors) {
    if (a.kind() == AtomKind::Denominator) dpart.factors.emplace_back(a, e);
  }
  Monomial dinv = power(dpart, -1);
  Terms numer;
  for (const auto& [m, c] : s) add_term(numer, multiply(m, dinv), c);

  // Monomial content.
  std::map<Atom, int> lowest;
  bool first = true;
  for (const auto& [m, c] : numer) {
    if (first) {
      for (const auto& [a, e] : m.factors) lowest[a] = e;
      first = false;
      continue;
    }
    for (auto& [a, e] : lowest) e = std::min(e, m.exponent_of(a));
    for (const auto& [a, e] : m.factors) {
      if (lowest.count(a) == 0) lowest[a] = std::min(0, e);
    }
  }
  Monomial content;
  for (const auto& [a, e] : lowest) {
    if (e != 0) content.factors.emplace_back(a, e);
  }
  Monomial content_inv = power(content, -1);
  Terms reduced;
  for (const auto& [m, c] : numer) add_term(reduced, multiply(m, content_inv), c);

  Terms result = monomial_power_expanded(dpart, Rational(1), -n);
  if (reduced.size() == 1) {
    const auto& [m, c] = *reduced.begin();
    result = raw_mul(result, monomial_power_expanded(multiply(m, content), c, -n));
    return from_canonical(std::move(result));
  }
  Rational lc = reduced.rbegin()->second;
  Terms monic;
  for (const auto& [m, c] : reduced) add_term(monic, m, Rational(c / lc));
  Atom den = make_denominator_atom(from_canonical(std::move(monic)));
  result = raw_mul(result, monomial_power_expanded(content, lc, -n));
  Terms den_terms;
  add_term(den_terms, Monomial{{Factor{den, -n}}}, Rational(1));
  result = raw_mul(result, den_terms);
  return from_canonical(std::move(result));
}

}  // namespace

Atom make_variable_atom(Direction d) {
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::Variable;
  data->direction = d;
  data->text = std::string(1, direction_letter(d));
  return finish(std::move(data));
}

Atom make_parameter_atom(const std::string& name) {
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::Parameter;
  data->name = name;
  data->text = name;
  return finish(std::move(data));
}

Atom make_jet_atom(const JetVar& v) {
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::Jet;
  data->jet = v;
  data->name = v.name;
  data->text = v.to_string();
  return finish(std::move(data));
}

Atom make_point_function_atom(const std::string& name, PointIndex index, unsigned args) {
  if (((args & kArgT) == 0 && index.t > 0) || ((args & kArgX) == 0 && index.x > 0) ||
      ((args & kArgU) == 0 && index.u > 0)) {
    throw UnsupportedExpression("derivative of " + name + " in a variable it does not depend on");
  }
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::PointFunction;
  data->name = name;
  data->index = index;
  data->args = args;
  data->text = point_text(name, index, args);
  return finish(std::move(data));
}

Atom make_function_atom(const std::string& name, int order, const NormalForm& arg,
                        const std::optional<Expr>& rule) {
  if (rule && order != 0) {
    throw UnsupportedExpression("derivative rule on a differentiated symbol " + name);
  }
  auto data = std::make_shared<AtomData>();
  data->kind = AtomKind::Function;
  data->name = name;
  data->order = order;
  data->text = name + std::string(order, '\'') + "(" + arg.to_string() + ")";
  data->inner = std::make_shared<const NormalForm>(arg);
  if (rule) {
    data->rule = rule;
    data->rule_form = std::make_shared<const NormalForm>(normalize(*rule));
    data->key = data->text + "{" + data->rule_form->to_string() + "}";
  }
  return finish(std::move(data));
}

int Monomial::exponent_of(const Atom& a) const {
  auto it = std::lower_bound(factors.begin(), factors.end(), a,
                             [](const Factor& f, const Atom& key) { return f.first < key; });
  return (it != factors.end() && it->first == a) ? it->second : 0;
}

bool operator==(const Monomial& a, const Monomial& b) {
  if (a.factors.size() != b.factors.size()) return false;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (a.factors[i].second != b.factors[i].second || !(a.factors[i].first == b.factors[i].first)) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  while (i != a.factors.end() || j != b.factors.end()) {
    if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) {
      return i->second > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (i == a.factors.end() || j->first < i->first) {
      return j->second > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (i->second != j->second) return i->second <=> j->second;
    ++i;
    ++j;
  }
  return std::strong_ordering::equal;
}

namespace {

NormalForm from_canonical(Terms terms) { return NormalForm::from_terms(std::move(terms)); }

}  // namespace

NormalForm::NormalForm(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

NormalForm NormalForm::from_atom(const Atom& a, int exponent) {
  if (a.kind() == AtomKind::Exponential) {
    return NormalForm::exponential(a->inner->scaled(Rational(exponent)));
  }
  if (exponent == 0) return NormalForm(1);
  if (a.kind() == AtomKind::Denominator && exponent > 0) {
    return NormalForm::from_terms(raw_pow(a->inner->terms(), exponent));
  }
  Terms t;
  add_term(t, Monomial{{Factor{a, exponent}}}, Rational(1));
  return from_terms(std::move(t));
}

NormalForm NormalForm::exponential(const NormalForm& arg) {
  auto depends_on_point = [](const Atom& a) {
    switch (a.kind()) {
      case AtomKind::Variable:
        return true;
      case AtomKind::Jet:
        return !(a->jet.is_base() && a->jet.name == "u");
      case AtomKind::PointFunction:
      case AtomKind::Exponential:
        return true;
      default:
        return false;
    }
  };
  for (const auto& [m, c] : arg.terms()) {
    int linear_degree = 0;
    for (const auto& [a, e] : m.factors) {
      switch (a.kind()) {
        case AtomKind::Variable:
          if (e != 1) throw UnsupportedExpression("exponential argument must be linear in t and x: " + arg.to_string());
          ++linear_degree;
          break;
        case AtomKind::Parameter:
          break;
        case AtomKind::Jet:
          if (!(a->jet.is_base() && a->jet.name == "u")) {
            throw UnsupportedExpression("exponential argument may not contain " + a.text());
          }
          break;
        case AtomKind::PointFunction:
        case AtomKind::Exponential:
          throw UnsupportedExpression("unsupported exponential argument: " + arg.to_string());
        case AtomKind::Function:
        case AtomKind::Denominator:
          if (a->inner->mentions(depends_on_point)) {
            throw UnsupportedExpression("unsupported exponential argument: " + arg.to_string());
          }
          break;
      }
    }
    if (linear_degree > 1) {
      throw UnsupportedExpression("exponential argument must be linear in t and x: " + arg.to_string());
    }
  }
  if (arg.is_zero()) return NormalForm(1);
  NormalForm out;
  out.terms_.emplace(Monomial{{Factor{make_exponential_atom(arg), 1}}}, Rational(1));
  return out;
}

NormalForm NormalForm::from_terms(Terms terms) {
  if (has_denominator(terms)) canonicalize(terms);
  NormalForm out;
  out.terms_ = std::move(terms);
  return out;
}

bool NormalForm::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational NormalForm::constant_value() const {
  if (terms_.empty()) return Rational(0);
  assert(is_constant());
  return terms_.begin()->second;
}

NormalForm NormalForm::pow(int n) const {
  if (n == 0) return NormalForm(1);
  if (n > 0) return from_terms(raw_pow(terms_, n));
  if (terms_.empty()) throw UnsupportedExpression("division by zero");
  if (terms_.size() == 1) {
    const auto& [m, c] = *terms_.begin();
    return from_terms(monomial_power_expanded(m, c, n));
  }
  return denominator_power(terms_, -n);
}

NormalForm NormalForm::scaled(const Rational& c) const {
  NormalForm out;
  if (c == 0) return out;
  for (const auto& [m, v] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, Rational(v * c));
  return out;
}

NormalForm operator+(const NormalForm& a, const NormalForm& b) {
  Terms t = a.terms_;
  add_terms(t, b.terms_);
  return NormalForm::from_terms(std::move(t));
}

NormalForm operator-(const NormalForm& a, const NormalForm& b) {
  Terms t = a.terms_;
  add_terms(t, b.terms_, Rational(-1));
  return NormalForm::from_terms(std::move(t));
}

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
  return NormalForm::from_terms(raw_mul(a.terms_, b.terms_));
}

namespace {

std::string factor_text(const Atom& a, int e) {
  if (e == 1) return a.text();
  return a.text() + "^" + std::to_string(e);
}

}  // namespace

std::string NormalForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = c < 0;
    Rational mag = abs(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string body;
    for (const auto& [a, e] : m.factors) {
      if (!body.empty()) body += "*";
      body += factor_text(a, e);
    }
    if (body.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += body;
    } else {
      out += mag.get_str() + "*" + body;
    }
  }
  return out;
}

namespace {

Expr atom_expr(const Atom& a) {
  switch (a.kind()) {
    case AtomKind::Variable:
      return Expr::variable(a->direction);
    case AtomKind::Parameter:
      return Expr::parameter(a->name);
    case AtomKind::Jet:
      return Expr::jet(a->jet);
    case AtomKind::PointFunction:
      return Expr::point_function(a->name, a->index, a->args);
    case AtomKind::Function:
      return Expr::function(a->name, a->inner->to_expr(), a->order, a->rule);
    case AtomKind::Exponential:
      return Expr::exponential(a->inner->to_expr());
    case AtomKind::Denominator:
      return a->inner->to_expr();
  }
  return Expr();
}

}  // namespace

Expr NormalForm::to_expr() const {
  std::vector<Expr> terms;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::vector<Expr> factors;
    if (c != 1 || m.empty()) factors.emplace_back(c);
    for (const auto& [a, e] : m.factors) {
      Expr base = atom_expr(a);
      factors.push_back(e == 1 ? base : Expr::power(base, Rational(e)));
    }
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

bool NormalForm::mentions(const std::function<bool(const Atom&)>& pred) const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [a, e] : m.factors) {
      if (pred(a)) return true;
      if (a->inner && a->inner->mentions(pred)) return true;
    }
  }
  return false;
}

NormalForm normalize(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return NormalForm(e.value());
    case ExprKind::Variable:
      return NormalForm::from_atom(make_variable_atom(e.direction()));
    case ExprKind::Parameter:
      return NormalForm::from_atom(make_parameter_atom(e.name()));
    case ExprKind::Jet:
      return NormalForm::from_atom(make_jet_atom(e.jet_var()));
    case ExprKind::PointFunction:
      return NormalForm::from_atom(make_point_function_atom(e.name(), e.point_index(), e.point_args()));
    case ExprKind::Function: {
      std::optional<Expr> rule;
      if (e.rule() != nullptr) rule = *e.rule();
      return NormalForm::from_atom(make_function_atom(e.name(), e.order(), normalize(e.children()[0]), rule));
    }
    case ExprKind::Sum: {
      Terms acc;
      for (const Expr& c : e.children()) add_terms(acc, normalize(c).terms());
      return NormalForm::from_terms(std::move(acc));
    }
    case ExprKind::Product: {
      NormalForm acc(1);
      for (const Expr& c : e.children()) {
        acc = acc * normalize(c);
        if (acc.is_zero()) {
          // Remaining factors must still be well-formed.
          for (const Expr& rest : e.children()) (void)normalize(rest);
          break;
        }
      }
      return acc;
    }
    case ExprKind::Power: {
      const Rational& p = e.exponent();
      NormalForm base = normalize(e.children()[0]);
      if (!is_integer(p)) {
        throw UnsupportedExpression("non-integer exponent " + p.get_str() + " on " + base.to_string());
      }
      if (!p.get_num().fits_sint_p() || abs(p.get_num()) > 10000) {
        throw UnsupportedExpression("exponent too large: " + p.get_str());
      }
      return base.pow(static_cast<int>(p.get_num().get_si()));
    }
    case ExprKind::Exponential:
      return NormalForm::exponential(normalize(e.children()[0]));
  }
  return NormalForm();
}

bool is_zero(const Expr& e) { return normalize(e).is_zero(); }

NormalForm replace_atoms(const NormalForm& e,
                         const std::function<std::optional<NormalForm>(const Atom&)>& fn) {
  Terms acc;
  for (const auto& [m, c] : e.terms()) {
    Monomial kept;
    Terms term;
    add_term(term, Monomial{}, c);
    for (const auto& [a, k] : m.factors) {
      if (auto r = fn(a)) {
        term = raw_mul(term, r->pow(k).terms());
        continue;
      }
      switch (a.kind()) {
        case AtomKind::Function: {
          NormalForm arg = replace_atoms(*a->inner, fn);
          if (arg == *a->inner) {
            kept.factors.emplace_back(a, k);
          } else {
            term = raw_mul(term, NormalForm::from_atom(make_function_atom(a->name, a->order, arg, a->rule), k).terms());
          }
          break;
        }
        case AtomKind::Exponential: {
          NormalForm arg = replace_atoms(*a->inner, fn);
          if (arg == *a->inner) {
            kept.factors.emplace_back(a, k);
          } else {
            term = raw_mul(term, NormalForm::exponential(arg).pow(k).terms());
          }
          break;
        }
        case AtomKind::Denominator: {
          NormalForm poly = replace_atoms(*a->inner, fn);
          if (poly == *a->inner) {
            kept.factors.emplace_back(a, k);
          } else {
            term = raw_mul(term, poly.pow(k).terms());
          }
          break;
        }
        default:
          kept.factors.emplace_back(a, k);
      }
    }
    Terms kept_terms;
    add_term(kept_terms, kept, Rational(1));
    add_terms(acc, raw_mul(term, kept_terms));
  }
  return NormalForm::from_terms(std::move(acc));
}

NormalForm derive(const NormalForm& e, const std::function<NormalForm(const Atom&)>& atom_rule) {
  std::map<Atom, NormalForm> cache;
  Terms acc;
  for (const auto& [m, c] : e.terms()) {
    for (const auto& [a, k] : m.factors) {
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, atom_rule(a)).first;
      const NormalForm& da = it->second;
      if (da.is_zero()) continue;
      Monomial rest = a.kind() == AtomKind::Exponential ? without(m, a) : with_factor(m, a, -1);
      Rational scale = a.kind() == AtomKind::Exponential ? c : Rational(c * k);
      for (const auto& [dm, dc] : da.terms()) add_term(acc, multiply(rest, dm), Rational(scale * dc));
    }
  }
  return NormalForm::from_terms(std::move(acc));
}

namespace {

/// d/d(arg) of a function atom, evaluated at its argument.
NormalForm function_prime(const Atom& a) {
  if (a->rule_form) {
    const NormalForm& arg = *a->inner;
    return replace_atoms(*a->rule_form, [&arg](const Atom& b) -> std::optional<NormalForm> {
      if (b.kind() == AtomKind::Jet && b->jet.is_base() && b->jet.name == "u") return arg;
      return std::nullopt;
    });
  }
  return NormalForm::from_atom(make_function_atom(a->name, a->order + 1, *a->inner, std::nullopt));
}

unsigned arg_bit(Direction d) { return d == Direction::T ? kArgT : kArgX; }

PointIndex bumped(PointIndex idx, unsigned bit) {
  if (bit == kArgT) ++idx.t;
  if (bit == kArgX) ++idx.x;
  if (bit == kArgU) ++idx.u;
  return idx;
}

NormalForm point_partial(const Atom& a, unsigned bit) {
  if ((a->args & bit) == 0) return NormalForm();
  return NormalForm::from_atom(make_point_function_atom(a->name, bumped(a->index, bit), a->args));
}

}  // namespace

NormalForm total_derivative(const NormalForm& e, Direction d) {
  std::function<NormalForm(const Atom&)> rule = [d, &rule](const Atom& a) -> NormalForm {
    switch (a.kind()) {
      case AtomKind::Variable:
        return NormalForm(a->direction == d ? 1 : 0);
      case AtomKind::Parameter:
        return NormalForm();
      case AtomKind::Jet:
        return NormalForm::from_atom(make_jet_atom(a->jet.derived(d)));
      case AtomKind::PointFunction:
        return point_partial(a, arg_bit(d)) +
               point_partial(a, kArgU) * NormalForm::from_atom(make_jet_atom(jet_u().derived(d)));
      case AtomKind::Function: {
        NormalForm darg = derive(*a->inner, rule);
        if (darg.is_zero()) return darg;
        return function_prime(a) * darg;
      }
      case AtomKind::Exponential:
        return NormalForm::from_atom(a) * derive(*a->inner, rule);
      case AtomKind::Denominator:
        return derive(*a->inner, rule);
    }
    return NormalForm();
  };
  return derive(e, rule);
}

NormalForm partial_derivative(const NormalForm& e, const JetVar& v) {
  const bool is_u = v.is_base() && v.name == "u";
  std::function<NormalForm(const Atom&)> rule = [&v, is_u, &rule](const Atom& a) -> NormalForm {
    switch (a.kind()) {
      case AtomKind::Variable:
      case AtomKind::Parameter:
        return NormalForm();
      case AtomKind::Jet:
        return NormalForm(a->jet == v ? 1 : 0);
      case AtomKind::PointFunction:
        return is_u ? point_partial(a, kArgU) : NormalForm();
      case AtomKind::Function: {
        NormalForm darg = derive(*a->inner, rule);
        if (darg.is_zero()) return darg;
        return function_prime(a) * darg;
      }
      case AtomKind::Exponential:
        return NormalForm::from_atom(a) * derive(*a->inner, rule);
      case AtomKind::Denominator:
        return derive(*a->inner, rule);
    }
    return NormalForm();
  };
  return derive(e, rule);
}

NormalForm explicit_derivative(const NormalForm& e, Direction d) {
  std::function<NormalForm(const Atom&)> rule = [d, &rule](const Atom& a) -> NormalForm {
    switch (a.kind()) {
      case AtomKind::Variable:
        return NormalForm(a->direction == d ? 1 : 0);
      case AtomKind::Parameter:
      case AtomKind::Jet:
        return NormalForm();
      case AtomKind::PointFunction:
        return point_partial(a, arg_bit(d));
      case AtomKind::Function: {
        NormalForm darg = derive(*a->inner, rule);
        if (darg.is_zero()) return darg;
        return function_prime(a) * darg;
      }
      case AtomKind::Exponential:
        return NormalForm::from_atom(a) * derive(*a->inner, rule);
      case AtomKind::Denominator:
        return derive(*a->inner, rule);
    }
    return NormalForm();
  };
  return derive(e, rule);
}

std::map<JetMonomial, NormalForm> collect(const NormalForm& e, const std::vector<JetVar>& vars) {
  std::map<JetMonomial, Terms> buckets;
  for (const auto& [m, c] : e.terms()) {
    JetMonomial key;
    Monomial rest;
    for (const auto& [a, k] : m.factors) {
      if (a.kind() == AtomKind::Jet && std::find(vars.begin(), vars.end(), a->jet) != vars.end()) {
        key[a->jet] = k;
      } else {
        rest.factors.emplace_back(a, k);
      }
    }
    add_term(buckets[key], rest, c);
  }
  std::map<JetMonomial, NormalForm> out;
  for (auto& [k, t] : buckets) {
    NormalForm coeff = NormalForm::from_terms(std::move(t));
    if (!coeff.is_zero()) out.emplace(k, std::move(coeff));
  }
  return out;
}

std::map<JetMonomial, Expr> collect(const Expr& e, const std::vector<JetVar>& vars) {
  std::map<JetMonomial, Expr> out;
  for (const auto& [k, v] : collect(normalize(e), vars)) out.emplace(k, v.to_expr());
  return out;
}

std::string to_string(const JetMonomial& m) {
  if (m.empty()) return "1";
  std::string out;
  for (const auto& [v, k] : m) {
    if (!out.empty()) out += "*";
    out += v.to_string();
    if (k != 1) out += "^" + std::to_string(k);
  }
  return out;
}

std::vector<JetVar> jet_variables(const NormalForm& e, const std::string& name) {
  std::set<JetVar> found;
  (void)e.mentions([&](const Atom& a) {
    if (a.kind() == AtomKind::Jet && a->jet.name == name) found.insert(a->jet);
    return false;
  });
  return {found.begin(), found.end()};
}

}  // namespace jetlaw
