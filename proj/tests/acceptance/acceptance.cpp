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

// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "jetlaw/calculus.hpp"
#include "jetlaw/conslaw.hpp"
#include "jetlaw/numverify/numverify.hpp"
#include "jetlaw/parser.hpp"
#include "jetlaw/selfadjoint.hpp"
#include "reference_formulas.hpp"
#include "random_expr.hpp"

using namespace jetlaw;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

NormalForm nf(const std::string& text) { return normalize(parse(text)); }

const NormalForm& ks() {
  static const NormalForm f = nf(testing::kKs);
  return f;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

Outcome adjoint_reproduction() {
  Outcome o;
  const auto start = Clock::now();
  const NormalForm adj = adjoint_function(nf(testing::kKsGeneral));
  const double seconds = since(start);
  o.require(is_zero(adj - normalize(ks_general_adjoint_reference())), "adjoint differs from reference");
  o.require(seconds < 1.0, "adjoint took " + std::to_string(seconds) + " s");
  if (o.pass) o.detail = "nine-term adjoint in " + std::to_string(seconds) + " s";
  return o;
}

Outcome determining_equations_reproduction() {
  Outcome o;
  const EquationSpec s = ks_general_equation();
  const DeterminingSystem sys = determining_equations(s);
  const auto printed = printed_determining_equations(s);
  o.require(sys.items.size() == 4, "expected four coefficient equations");
  if (!o.pass) return o;
  std::string factors;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto ratio = proportionality(sys.items[i].raw, printed[i]);
    o.require(ratio && *ratio != 0, "item " + std::to_string(i + 1) + " not proportional");
    if (ratio) factors += (factors.empty() ? "" : ", ") + ratio->get_str();
  }
  const NormalForm& e1 = sys.items[0].normalized;
  o.require(is_zero(sys.items[1].normalized - partial_derivative(e1, jet_u())), "item2 != d/du item1");
  o.require(is_zero(sys.items[2].normalized - explicit_derivative(e1, Direction::X)), "item3 != d/dx item1");
  if (o.pass) o.detail = "factors " + factors + "; item2 = d/du item1, item3 = d/dx item1";
  return o;
}

Outcome substitution_families() {
  Outcome o;
  const Expr m = exp(-Expr::function("Phi", sym::u(), 0, parse("(g'(u) + h(u))/g(u)")));
  auto eq = [](const std::string& f) { return parse("u_t - (" + f + ")*u_x - g(u)*u_xx + h(u)*u_x^2"); };
  o.require(verify_substitution(eq("a*g(u) + b"), parse("c1*exp(a*x + a*b*t) + c2") * m).holds(), "f = a g + b");
  o.require(verify_substitution(eq("b"), parse("c3*(x + b*t) + c4") * m).holds(), "f constant");
  o.require(verify_substitution(eq("f(u)"), parse("c5") * m).holds(), "quasi");
  const Classification c = classify(ks_equation());
  o.require(c.branch == Branch::Affine && c.a && *c.a == nf("-1") && c.b && *c.b == nf("1"), "KS branch");
  o.require(is_zero(c.phi - nf("c1*exp(-t-x) + c2")) && c.check.holds(), "KS substitution");
  if (o.pass) o.detail = "three families hold symbolically; KS a=-1, b=1, phi=" + c.phi.to_string();
  return o;
}

Outcome strict_criterion() {
  Outcome o;
  const EquationSpec strict = EquationSpec::from_coefficients(parse("f(u)"), parse("g(u)"), parse("-g(u)/u - g'(u)"));
  o.require(verify_substitution(strict.equation(), nf("u")).holds(), "phi=u fails under h=-g/u-g'");
  int counter = 0;
  for (auto [g, h] : std::vector<std::pair<const char*, const char*>>{
           {"1+u", "-1"}, {"u^2", "0"}, {"u", "u"}, {"exp(u)", "1"}}) {
    const EquationSpec s = EquationSpec::from_coefficients(parse("u"), parse(g), parse(h));
    if (!verify_substitution(s.equation(), nf("u")).holds()) ++counter;
  }
  o.require(counter >= 3, "fewer than three counterexamples");
  o.require(!classify(ks_equation()).strictly_self_adjoint, "KS reported strictly self-adjoint");
  if (o.pass) o.detail = std::to_string(counter) + " counterexamples; KS not strictly self-adjoint";
  return o;
}

Outcome symmetry_suite() {
  Outcome o;
  for (const VectorField& v : ks_symmetries()) o.require(symmetry_residual(v, ks()).is_zero(), v.label);
  int negatives = 0;
  for (const auto& [a, b, c] : std::vector<std::tuple<const char*, const char*, const char*>>{
           {"0", "0", "1"}, {"0", "x", "0"}, {"2*t", "x", "0"}, {"t", "-t", "1+u"}}) {
    if (!symmetry_residual(VectorField{parse(a), parse(b), parse(c), ""}, ks()).is_zero()) ++negatives;
  }
  o.require(negatives >= 3, "negative controls passed as symmetries");
  if (o.pass) o.detail = "X1, X2, X3 residual 0; " + std::to_string(negatives) + " negative controls nonzero";
  return o;
}

Outcome conservation_laws() {
  Outcome o;
  const NormalForm nu = nf("exp(-t-x)");
  for (const VectorField& field : ks_symmetries()) {
    const ConservedVector raw = conserved_vector(ks(), field, nu);
    o.require(divergence_residual(raw, ks()).is_zero(), field.label + " divergence");
    for (const ReferenceVector& ref : ks_reference_vectors()) {
      if (ref.label != field.label) continue;
      ConservedVector printed;
      printed.c1 = nf(ref.c1);
      printed.c2 = nf(ref.c2);
      o.require(equivalent_modulo_trivial(raw, printed, ks()), field.label + " reference");
    }
  }
  const ConservedVector x1 =
      transfer_dx_terms(conserved_vector(ks(), ks_symmetries()[0], nu), ks());
  o.require(x1.c1 == nf("(u^2/2 - (1+u)*u_x)*exp(-t-x)") &&
                x1.c2 == nf("(-u^2/2 + (1+u)*u_t + (1+u)*u_x)*exp(-t-x)"),
            "X1 simplified form");
  if (o.pass) o.detail = "zero divergence, equivalent to printed vectors, X1 simplified form exact";
  return o;
}

Outcome noether_identity() {
  Outcome o;
  testing::RandomExpr gen(2026);
  int ks_fields = 0;
  int general_fields = 0;
  for (int i = 0; i < 50; ++i) {
    if (noether_defect(ks(), gen.point_field("r")).is_zero()) ++ks_fields;
  }
  const NormalForm general = nf(testing::kKsGeneral);
  for (int i = 0; i < 10; ++i) {
    if (noether_defect(general, gen.point_field("r")).is_zero()) ++general_fields;
  }
  o.require(ks_fields == 50, std::to_string(50 - ks_fields) + " KS failures");
  o.require(general_fields == 10, std::to_string(10 - general_fields) + " general failures");
  if (o.pass) o.detail = "50 random fields (KS), 10 (generalized)";
  return o;
}

Outcome euler_divergence() {
  Outcome o;
  testing::RandomExpr gen(2027);
  int zero = 0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    const NormalForm p = normalize(gen.expression(2, 1, true, i % 3 == 0));
    const NormalForm q = normalize(gen.expression(2, 1, true, i % 5 == 0));
    if (euler(total_derivative(p, Direction::T) + total_derivative(q, Direction::X)).is_zero()) ++zero;
  }
  o.require(zero == total, std::to_string(total - zero) + " nonzero");
  if (o.pass) o.detail = std::to_string(total) + " random divergences of order <= 2";
  return o;
}

Outcome parser_round_trip() {
  Outcome o;
  testing::RandomExpr gen(2028);
  int ok = 0;
  const int total = 500;
  for (int i = 0; i < total; ++i) {
    const Expr e = gen.expression(3, 3, true, i % 3 == 0);
    if (is_zero(parse(print(e)) - e)) ++ok;
  }
  const auto fixtures = testing::reference_formulas();
  int fixtures_ok = 0;
  for (const std::string& text : fixtures) {
    const Expr e = parse(text);
    if (is_zero(parse(print(e)) - e)) ++fixtures_ok;
  }
  o.require(ok == total, std::to_string(total - ok) + " random failures");
  o.require(fixtures_ok == static_cast<int>(fixtures.size()), "fixture failures");
  if (o.pass) o.detail = std::to_string(total) + " random + " + std::to_string(fixtures.size()) + " fixtures";
  return o;
}

Outcome numerical_gate() {
  Outcome o;
  using namespace numverify;
  const auto start = Clock::now();
  const NormalForm nu = nf("exp(-t-x)");
  ConservedVector n1;
  n1.c1 = nf("u");
  n1.c2 = *conservation_form(ks());
  std::vector<NumericVector> vectors{prepare("n1", n1, ks())};
  for (const VectorField& field : ks_symmetries()) {
    vectors.push_back(prepare(field.label, transfer_dx_terms(conserved_vector(ks(), field, nu), ks()), ks()));
  }
  ConservedVector bad = conserved_vector(ks(), ks_symmetries()[1], nu);
  bad.c2 += nf("u*exp(-t-x)");
  vectors.push_back(prepare("corrupted", bad, ks()));
  const LadderReport rep = run_ladder(sine_benchmark(64, 3, 1.0), vectors);
  double worst = 1e9;
  for (std::size_t i = 0; i + 1 < rep.vectors.size(); ++i) {
    o.require(rep.vectors[i].pass(), rep.vectors[i].label + " below order gate");
    for (double r : rep.vectors[i].residual_orders) worst = std::min(worst, r);
    for (double r : rep.vectors[i].balance_orders) worst = std::min(worst, r);
  }
  o.require(!rep.vectors.back().pass(), "corrupted vector passed");
  const double seconds = since(start);
  o.require(seconds < 60.0, "ladder took " + std::to_string(seconds) + " s");
  if (o.pass) {
    o.detail = "N=64,128,256: min order " + std::to_string(worst) + ", corrupted fails, " + std::to_string(seconds) +
               " s (" + rep.kernels + ")";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"adjoint reproduction", adjoint_reproduction},
      {"determining equations", determining_equations_reproduction},
      {"substitution families", substitution_families},
      {"strict self-adjointness", strict_criterion},
      {"symmetry suite", symmetry_suite},
      {"conservation laws", conservation_laws},
      {"Noether identity", noether_identity},
      {"Euler annihilates divergences", euler_divergence},
      {"parser round trip", parser_round_trip},
      {"numerical gate", numerical_gate},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
