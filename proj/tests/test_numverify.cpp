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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "jetlaw/conslaw.hpp"
#include "jetlaw/error.hpp"
#include "jetlaw/numverify/kernels.hpp"
#include "jetlaw/numverify/numverify.hpp"
#include "jetlaw/parser.hpp"
#include "reference_formulas.hpp"

using namespace jetlaw;
using namespace jetlaw::numverify;

namespace {

NormalForm nf(const char* text) { return normalize(parse(text)); }

const NormalForm& ks() {
  static const NormalForm f = nf(testing::kKs);
  return f;
}

ConservedVector pair(const NormalForm& c1, const NormalForm& c2) {
  ConservedVector v;
  v.c1 = c1;
  v.c2 = c2;
  return v;
}

NumericVector n1() { return prepare("n1", pair(nf("u"), *conservation_form(ks())), ks()); }

Grid periodic_grid(int cells, double dt, long steps, long stride = 1) {
  Grid g;
  g.x0 = 0.0;
  g.x1 = 2.0 * std::numbers::pi;
  g.cells = cells;
  g.dt = dt;
  g.steps = steps;
  g.stride = stride;
  return g;
}

double sine(double x) { return 0.2 + 0.1 * std::sin(x); }

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar and AVX2 kernels agree bitwise") {
  const KernelTable* simd = avx2_kernels();
  if (simd == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine");
    return;
  }
  const KernelTable& ref = scalar_kernels();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (std::size_t n : {1UL, 2UL, 3UL, 4UL, 5UL, 7UL, 8UL, 13UL, 31UL, 64UL, 257UL}) {
    const std::size_t pad = 2;
    std::vector<double> u(n + 2 * pad), a(n), b(n), k3(n), k4(n);
    for (double& v : u) v = dist(rng);
    for (auto* vec : {&a, &b, &k3, &k4}) {
      for (double& v : *vec) v = dist(rng);
    }
    auto run = [&](const KernelTable& k) {
      std::vector<std::vector<double>> out(10, std::vector<double>(n));
      k.d1(u.data() + pad, out[0].data(), n, 0.37);
      k.d2(u.data() + pad, out[1].data(), n, 11.3);
      k.d3(u.data() + pad, out[2].data(), n, 5.1);
      k.ks_rhs(u.data() + pad, out[3].data(), n, 0.37, 11.3);
      k.lincomb(a.data(), 0.125, b.data(), out[4].data(), n);
      k.rk4_combine(a.data(), b.data(), k3.data(), k4.data(), u.data(), 1.0 / 6.0, out[5].data(), n);
      k.add(a.data(), b.data(), out[6].data(), n);
      k.sub(a.data(), b.data(), out[7].data(), n);
      k.mul(a.data(), b.data(), out[8].data(), n);
      k.scale(a.data(), -3.7, out[9].data(), n);
      return out;
    };
    const auto x = run(ref);
    const auto y = run(*simd);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK_MESSAGE(bitwise_equal(x[i], y[i]), "kernel " << i << " n=" << n);
  }
}

TEST_CASE("kernel selection") {
  CHECK(std::string(scalar_kernels().name) == "scalar");
  const char* env = std::getenv("JETLAW_SIMD");
  if (env != nullptr && std::string(env) == "scalar") {
    CHECK(std::string(active_kernels().name) == "scalar");
  } else if (avx2_kernels() != nullptr) {
    CHECK(std::string(active_kernels().name) == "avx2");
  }
}

TEST_CASE("grid validation") {
  const double h = 2.0 * std::numbers::pi / 64;
  CHECK_NOTHROW(periodic_grid(64, 0.2 * h * h / 1.3, 10).validate(1.3));
  CHECK_THROWS_AS(periodic_grid(64, 0.3 * h * h / 1.3, 10).validate(1.3), InvalidInput);
  CHECK_THROWS_AS(periodic_grid(4, 1e-5, 10).validate(1.0), InvalidInput);
  CHECK_THROWS_AS(periodic_grid(64, 1e-5, 10, 3).validate(1.0), InvalidInput);
  CHECK_THROWS_AS(periodic_grid(64, 0.0, 10).validate(1.0), InvalidInput);
  Grid open = periodic_grid(64, 1e-4, 10);
  open.periodic = false;
  CHECK_THROWS_AS(solve(sine, open), InvalidInput);
}

TEST_CASE("constant state is preserved exactly") {
  const SolutionField sol = solve([](double) { return 0.3; }, periodic_grid(32, 1e-3, 40, 4));
  CHECK(sol.levels() == 11);
  for (double v : sol.values) CHECK(v == 0.3);
  const ResidualReport r = discrete_divergence_residual(n1(), sol);
  CHECK(r.max_linf == 0.0);
  const BalanceReport b = integral_balance(n1(), sol);
  CHECK(b.max_defect < 1e-14);
}

TEST_CASE("loss of parabolicity aborts") {
  CHECK_THROWS_AS(solve([](double x) { return -1.5 + 0.1 * std::sin(x); }, periodic_grid(32, 1e-4, 10)),
                  InvalidInput);
  Grid open = periodic_grid(32, 1e-4, 50);
  open.periodic = false;
  CHECK_THROWS_AS(solve([](double) { return 0.2; }, open, [](double t, double) { return t > 0.0 ? -5.0 : 0.2; }),
                  NumericalAbort);
}

TEST_CASE("solver converges at second order against a finer oracle") {
  const double t_final = 0.5;
  const int oracle_factor = 4;
  std::vector<double> errors;
  for (int cells : {32, 64}) {
    const int fine_cells = cells * oracle_factor;
    const double hf = 2.0 * std::numbers::pi / fine_cells;
    const long steps = static_cast<long>(std::ceil(t_final / (0.2 * hf * hf / 1.3)));
    const double dt = t_final / static_cast<double>(steps);
    const SolutionField coarse = solve(sine, periodic_grid(cells, dt, steps, steps));
    const SolutionField fine = solve(sine, periodic_grid(fine_cells, dt, steps, steps));
    double err = 0.0;
    for (int i = 0; i < cells; ++i) {
      err = std::max(err, std::abs(coarse.level(1)[i] - fine.level(1)[i * oracle_factor]));
    }
    errors.push_back(err);
  }
  CHECK(observed_order(errors[0], errors[1]) >= 1.8);
}

TEST_CASE("traveling front") {
  CHECK(traveling_front(0.0, 0.0) == doctest::Approx(0.5));
  CHECK(traveling_front(0.0, -30.0) > 0.99);
  CHECK(traveling_front(0.0, 30.0) < 1e-5);
  CHECK(traveling_front(2.0, 1.0) == doctest::Approx(traveling_front(0.0, 0.0)));
  // profile satisfies the equation pointwise
  const double t = 0.3, x = 0.7, e = 1e-3;
  const double u = traveling_front(t, x);
  const double ut = (traveling_front(t + e, x) - traveling_front(t - e, x)) / (2 * e);
  const double ux = (traveling_front(t, x + e) - traveling_front(t, x - e)) / (2 * e);
  const double uxx = (traveling_front(t, x + e) - 2 * u + traveling_front(t, x - e)) / (e * e);
  CHECK(std::abs(ut + u * ux - (1 + u) * uxx - ux * ux) < 1e-5);
}

TEST_CASE("Dirichlet solve of the traveling front converges at second order") {
  const double t_final = 0.5;
  std::vector<double> errors;
  for (int cells : {40, 80, 160}) {
    Grid g;
    g.x0 = -10.0;
    g.x1 = 10.0;
    g.cells = cells;
    g.periodic = false;
    const double h = g.h();
    g.steps = static_cast<long>(std::ceil(t_final / (0.2 * h * h / 2.0)));
    g.dt = t_final / static_cast<double>(g.steps);
    g.stride = g.steps;
    const SolutionField sol = solve([](double x) { return traveling_front(0.0, x); }, g, traveling_front);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.nodes(); ++i) {
      err = std::max(err, std::abs(sol.level(1)[i] - traveling_front(t_final, g.x(i))));
    }
    errors.push_back(err);
  }
  std::vector<double> orders;
  CHECK(order_gate(errors, 1.8, 1e-12, &orders));
  CHECK(orders.size() == 2);
}

TEST_CASE("compiled expressions") {
  const CompiledExpr c = CompiledExpr::compile(nf("u*u_x + exp(-t-x) - u_xxx/(1+u)"));
  const double x[2] = {0.1, 0.4};
  const double u[2] = {0.5, -0.2}, ux[2] = {1.0, 2.0}, uxx[2] = {0.0, 0.0}, uxxx[2] = {3.0, 1.0};
  FieldContext ctx;
  ctx.n = 2;
  ctx.t = 0.25;
  ctx.x = x;
  ctx.u[0] = u;
  ctx.u[1] = ux;
  ctx.u[2] = uxx;
  ctx.u[3] = uxxx;
  double out[2];
  c.evaluate(ctx, out);
  for (int i = 0; i < 2; ++i) {
    CHECK(out[i] == doctest::Approx(u[i] * ux[i] + std::exp(-0.25 - x[i]) - uxxx[i] / (1 + u[i])));
  }
  CHECK_THROWS_AS(CompiledExpr::compile(nf("c1*u")), EvaluationError);
  CHECK_THROWS_AS(CompiledExpr::compile(nf("g(u)")), EvaluationError);
  CHECK_THROWS_AS(CompiledExpr::compile(nf("nu*u")), EvaluationError);
  CHECK_THROWS_AS(CompiledExpr::compile(nf("u_xxxx")), EvaluationError);
}

TEST_CASE("observed order and gate") {
  CHECK(observed_order(4.0, 1.0) == doctest::Approx(2.0));
  std::vector<double> orders;
  CHECK(order_gate({4e-4, 1e-4, 2.5e-5}, 1.8, 1e-10, &orders));
  CHECK(orders.size() == 2);
  CHECK_FALSE(order_gate({4e-4, 2e-4, 1e-4}, 1.8, 1e-10));
  CHECK(order_gate({3e-14, 5e-14, 4e-14}, 1.8, 1e-10));
  CHECK(order_gate({1e-3, 3e-14}, 1.8, 1e-10));
}

TEST_CASE("refinement ladder shape") {
  const auto grids = make_ladder(sine_benchmark(64, 3, 1.0));
  REQUIRE(grids.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(grids[r].cells == (64 << r));
    CHECK(grids[r].t_final() == doctest::Approx(1.0));
    if (r > 0) {
      CHECK(grids[r].steps == 4 * grids[r - 1].steps);
      CHECK(grids[r].levels() - 1 == 2 * (grids[r - 1].levels() - 1));
    }
  }
  CHECK_THROWS_AS(make_ladder(sine_benchmark(64, 1, 1.0)), InvalidInput);
  CHECK_THROWS_AS(make_ladder(sine_benchmark(64, 3, 0.0)), InvalidInput);
}

TEST_CASE("benchmark ladder: certified vectors pass, corrupted vector fails") {
  const NormalForm nu = nf("exp(-t-x)");
  std::vector<NumericVector> vectors{n1()};
  for (const VectorField& field : ks_symmetries()) {
    vectors.push_back(prepare(field.label, transfer_dx_terms(conserved_vector(ks(), field, nu), ks()), ks()));
  }
  ConservedVector bad = conserved_vector(ks(), ks_symmetries()[1], nu);
  bad.c2 += nf("u*exp(-t-x)");
  vectors.push_back(prepare("corrupted", bad, ks()));
  const LadderReport rep = run_ladder(sine_benchmark(64, 3, 1.0), vectors);
  REQUIRE(rep.vectors.size() == 5);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_MESSAGE(rep.vectors[i].pass(), rep.vectors[i].label);
    for (double o : rep.vectors[i].residual_orders) CHECK(o >= 1.8);
    for (double o : rep.vectors[i].balance_orders) CHECK(o >= 1.8);
  }
  CHECK_FALSE(rep.vectors[4].pass());
  CHECK_FALSE(rep.pass());
  CHECK(rep.seconds < 60.0);

  // regression lock for the conservation-form vector
  CHECK(rep.vectors[0].residual[0] == doctest::Approx(3.65302e-4).epsilon(1e-4));
  CHECK(rep.vectors[0].residual[1] == doctest::Approx(9.31943e-5).epsilon(1e-4));
  CHECK(rep.vectors[0].residual[2] == doctest::Approx(2.35355e-5).epsilon(1e-4));
  CHECK(rep.vectors[0].balance[0] == doctest::Approx(7.34123e-5).epsilon(1e-4));

  const auto j = to_json(rep);
  CHECK(j["vectors"].size() == 5);
  CHECK(j["pass"] == false);
}

TEST_CASE("residual fields are deterministic and exportable") {
  const auto grids = make_ladder(sine_benchmark(32, 2, 0.25));
  const SolutionField a = solve(sine, grids[0]);
  const SolutionField b = solve(sine, grids[0]);
  CHECK(bitwise_equal(a.values, b.values));
  const ResidualReport r = discrete_divergence_residual(n1(), a, true);
  CHECK(r.field.size() == r.times.size());
  std::ostringstream csv;
  write_residual_csv(csv, r);
  CHECK(csv.str().rfind("t,x,residual\n", 0) == 0);
  const LevelFields lf = level_fields(a, 1);
  CHECK(lf.x.size() == lf.d[0].size());
}
