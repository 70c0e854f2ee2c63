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

#include "jetlaw/numverify/numverify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "jetlaw/calculus.hpp"
#include "jetlaw/error.hpp"
#include "jetlaw/numverify/kernels.hpp"

namespace jetlaw::numverify {

namespace {

constexpr std::size_t kGhost = 2;
constexpr double kBlowup = 1e6;

void fill_periodic_ghosts(double* p, std::size_t n) {
  p[-1] = p[n - 1];
  p[-2] = p[n - 2];
  p[n] = p[0];
  p[n + 1] = p[1];
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void Grid::validate(double max_diffusion) const {
  if (cells < 8) throw InvalidInput("grid needs at least 8 cells, got " + std::to_string(cells));
  if (!(x1 > x0)) throw InvalidInput("grid interval is empty");
  if (!(dt > 0.0) || steps <= 0) throw InvalidInput("time step and step count must be positive");
  if (stride <= 0 || steps % stride != 0) throw InvalidInput("storage stride must divide the step count");
  const double limit = kStabilitySafety * h() * h() / max_diffusion;
  if (dt > limit * (1.0 + 1e-12)) {
    throw InvalidInput("time step " + format_double(dt) + " exceeds the stability limit " + format_double(limit));
  }
}

SolutionField solve(const InitialCondition& initial, const Grid& grid, const BoundaryCondition& boundary) {
  if (!grid.periodic && !boundary) throw InvalidInput("a non-periodic grid needs boundary values");
  const std::size_t n = grid.nodes();
  const double h = grid.h();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = initial(grid.x(i));
  double lo = u[0];
  double hi = u[0];
  for (double v : u) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (1.0 + lo < kParabolicityFloor) throw InvalidInput("initial data violates 1 + u > 0");
  grid.validate(1.0 + hi);

  const KernelTable& k = active_kernels();
  SolutionField sol;
  sol.grid = grid;
  sol.scheme = "centered-2 MOL, RK4";
  sol.values.reserve(grid.levels() * n);
  sol.times.reserve(grid.levels());
  sol.values.insert(sol.values.end(), u.begin(), u.end());
  sol.times.push_back(0.0);

  std::vector<double> stage(n + 2 * kGhost);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), next(n);
  double* sp = stage.data() + kGhost;
  const double inv_2h = 1.0 / (2.0 * h);
  const double inv_h2 = 1.0 / (h * h);

  auto rhs = [&](const double* src, double t, double* out) {
    std::copy(src, src + n, sp);
    if (grid.periodic) {
      fill_periodic_ghosts(sp, n);
      k.ks_rhs(sp, out, n, inv_2h, inv_h2);
    } else {
      sp[0] = boundary(t, grid.x0);
      sp[n - 1] = boundary(t, grid.x1);
      k.ks_rhs(sp + 1, out + 1, n - 2, inv_2h, inv_h2);
      out[0] = 0.0;
      out[n - 1] = 0.0;
    }
  };

  const double dt = grid.dt;
  std::vector<double> tmp(n);
  for (long step = 0; step < grid.steps; ++step) {
    const double t = dt * static_cast<double>(step);
    rhs(u.data(), t, k1.data());
    k.lincomb(u.data(), 0.5 * dt, k1.data(), tmp.data(), n);
    rhs(tmp.data(), t + 0.5 * dt, k2.data());
    k.lincomb(u.data(), 0.5 * dt, k2.data(), tmp.data(), n);
    rhs(tmp.data(), t + 0.5 * dt, k3.data());
    k.lincomb(u.data(), dt, k3.data(), tmp.data(), n);
    rhs(tmp.data(), t + dt, k4.data());
    k.rk4_combine(u.data(), k1.data(), k2.data(), k3.data(), k4.data(), dt / 6.0, next.data(), n);
    const double t_next = dt * static_cast<double>(step + 1);
    if (!grid.periodic) {
      next[0] = boundary(t_next, grid.x0);
      next[n - 1] = boundary(t_next, grid.x1);
    }
    double low = next[0];
    for (double v : next) {
      if (!std::isfinite(v) || std::fabs(v) > kBlowup) {
        throw NumericalAbort(t_next, "solution blew up (|u| > 1e6 or non-finite)");
      }
      low = std::min(low, v);
    }
    if (1.0 + low < kParabolicityFloor) {
      throw NumericalAbort(t_next, "parabolicity lost: min(1+u) = " + format_double(1.0 + low));
    }
    u.swap(next);
    if ((step + 1) % grid.stride == 0) {
      sol.values.insert(sol.values.end(), u.begin(), u.end());
      sol.times.push_back(t_next);
    }
  }
  return sol;
}

CompiledExpr CompiledExpr::compile(const NormalForm& e) {
  CompiledExpr out;
  std::map<std::string, std::size_t> slot_of;
  auto slot_for = [&](const Atom& a) -> std::size_t {
    if (auto it = slot_of.find(a.key()); it != slot_of.end()) return it->second;
    Slot s{SlotKind::T};
    switch (a.kind()) {
      case AtomKind::Variable:
        s.kind = a->direction == Direction::T ? SlotKind::T : SlotKind::X;
        break;
      case AtomKind::Jet:
        if (a->jet.name != "u" || a->jet.t_order != 0 || a->jet.x_order > 3) {
          throw EvaluationError("no grid values for " + a->jet.to_string());
        }
        s.kind = SlotKind::Jet;
        s.order = a->jet.x_order;
        break;
      case AtomKind::Exponential:
      case AtomKind::Denominator:
        s.kind = a.kind() == AtomKind::Exponential ? SlotKind::Exp : SlotKind::Den;
        s.inner = out.inner_.size();
        out.inner_.push_back(compile(*a->inner));
        break;
      case AtomKind::Parameter:
        throw EvaluationError("symbol " + a.text() + " has no numeric value");
      default:
        throw EvaluationError("cannot evaluate " + a.text() + " on the grid");
    }
    out.slots_.push_back(s);
    slot_of.emplace(a.key(), out.slots_.size() - 1);
    return out.slots_.size() - 1;
  };
  for (const auto& [m, c] : e.terms()) {
    Term term{c.get_d(), {}};
    for (const auto& [a, p] : m.factors) term.factors.emplace_back(slot_for(a), p);
    out.terms_.push_back(std::move(term));
  }
  return out;
}

void CompiledExpr::evaluate(const FieldContext& ctx, double* out) const {
  const KernelTable& k = active_kernels();
  const std::size_t n = ctx.n;
  std::vector<std::vector<double>> values(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    std::vector<double>& v = values[s];
    v.resize(n);
    const Slot& slot = slots_[s];
    switch (slot.kind) {
      case SlotKind::T:
        std::fill(v.begin(), v.end(), ctx.t);
        break;
      case SlotKind::X:
        std::copy(ctx.x, ctx.x + n, v.begin());
        break;
      case SlotKind::Jet:
        if (ctx.u[slot.order] == nullptr) throw EvaluationError("derivative order " + std::to_string(slot.order) + " unavailable");
        std::copy(ctx.u[slot.order], ctx.u[slot.order] + n, v.begin());
        break;
      case SlotKind::Exp:
        inner_[slot.inner].evaluate(ctx, v.data());
        for (double& y : v) y = std::exp(y);
        break;
      case SlotKind::Den:
        inner_[slot.inner].evaluate(ctx, v.data());
        break;
    }
  }
  std::fill(out, out + n, 0.0);
  std::vector<double> term(n), power(n);
  for (const Term& t : terms_) {
    std::fill(term.begin(), term.end(), t.coefficient);
    for (const auto& [s, p] : t.factors) {
      const std::vector<double>& base = values[s];
      const int e = std::abs(p);
      if (slots_[s].kind == SlotKind::Exp) {
        for (int r = 0; r < p; ++r) k.mul(term.data(), base.data(), term.data(), n);
        continue;
      }
      std::copy(base.begin(), base.end(), power.begin());
      for (int r = 1; r < e; ++r) k.mul(power.data(), base.data(), power.data(), n);
      if (p < 0) {
        for (double& y : power) y = 1.0 / y;
      }
      k.mul(term.data(), power.data(), term.data(), n);
    }
    k.add(out, term.data(), out, n);
  }
}

NumericVector prepare(const std::string& label, const ConservedVector& c, const NormalForm& equation) {
  EquationReducer reducer(equation);
  return NumericVector{label, CompiledExpr::compile(reducer.reduce(c.c1)), CompiledExpr::compile(reducer.reduce(c.c2))};
}

LevelFields level_fields(const SolutionField& sol, std::size_t level) {
  const KernelTable& k = active_kernels();
  const Grid& g = sol.grid;
  const std::size_t n = sol.nodes();
  const double h = g.h();
  std::vector<double> buf(n + 1 + 2 * kGhost);
  double* p = buf.data() + kGhost;
  std::copy(sol.level(level), sol.level(level) + n, p);
  LevelFields out;
  std::size_t count = 0;
  const double* start = nullptr;
  if (g.periodic) {
    // Closed run 0..n with node n repeating node 0.
    p[n] = p[0];
    p[n + 1] = p[1];
    p[n + 2] = p[2];
    p[-1] = p[n - 1];
    p[-2] = p[n - 2];
    out.first = 0;
    count = n + 1;
    start = p;
  } else {
    out.first = 2;
    count = n - 4;
    start = p + 2;
  }
  out.x.resize(count);
  for (std::size_t i = 0; i < count; ++i) out.x[i] = g.x(out.first + i);
  if (g.periodic) out.x[count - 1] = g.x1;
  for (auto& d : out.d) d.resize(count);
  std::copy(start, start + count, out.d[0].begin());
  k.d1(start, out.d[1].data(), count, 1.0 / (2.0 * h));
  k.d2(start, out.d[2].data(), count, 1.0 / (h * h));
  k.d3(start, out.d[3].data(), count, 1.0 / (2.0 * h * h * h));
  return out;
}

namespace {

FieldContext context(const LevelFields& f, double t) {
  FieldContext ctx;
  ctx.n = f.x.size();
  ctx.t = t;
  ctx.x = f.x.data();
  for (int i = 0; i < 4; ++i) ctx.u[i] = f.d[i].data();
  return ctx;
}

struct Components {
  std::vector<std::vector<double>> c1;
  std::vector<std::vector<double>> c2;
  std::vector<double> x;
};

Components evaluate_components(const NumericVector& v, const SolutionField& sol) {
  Components out;
  for (std::size_t j = 0; j < sol.levels(); ++j) {
    const LevelFields f = level_fields(sol, j);
    const FieldContext ctx = context(f, sol.times[j]);
    out.c1.emplace_back(ctx.n);
    out.c2.emplace_back(ctx.n);
    v.c1.evaluate(ctx, out.c1.back().data());
    v.c2.evaluate(ctx, out.c2.back().data());
    if (j == 0) out.x = f.x;
  }
  return out;
}

}  // namespace

ResidualReport discrete_divergence_residual(const NumericVector& v, const SolutionField& sol, bool keep_field) {
  const KernelTable& k = active_kernels();
  const Components comp = evaluate_components(v, sol);
  const double dtl = sol.grid.level_spacing();
  const double h = sol.grid.h();
  ResidualReport out;
  if (sol.levels() < 3) throw InvalidInput("residual needs at least three stored time levels");
  const std::size_t m = comp.x.size();
  const std::size_t inner = m - 2;
  std::vector<double> dt_part(inner), dx_part(inner), r(inner);
  if (keep_field) out.x.assign(comp.x.begin() + 1, comp.x.end() - 1);
  for (std::size_t j = 1; j + 1 < sol.levels(); ++j) {
    k.sub(comp.c1[j + 1].data() + 1, comp.c1[j - 1].data() + 1, dt_part.data(), inner);
    k.scale(dt_part.data(), 1.0 / (2.0 * dtl), dt_part.data(), inner);
    k.sub(comp.c2[j].data() + 2, comp.c2[j].data(), dx_part.data(), inner);
    k.scale(dx_part.data(), 1.0 / (2.0 * h), dx_part.data(), inner);
    k.add(dt_part.data(), dx_part.data(), r.data(), inner);
    double linf = 0.0;
    double sum = 0.0;
    for (double y : r) {
      linf = std::max(linf, std::fabs(y));
      sum += y * y;
    }
    const double l2 = std::sqrt(h * sum);
    out.times.push_back(sol.times[j]);
    out.linf.push_back(linf);
    out.l2.push_back(l2);
    out.max_linf = std::max(out.max_linf, linf);
    out.max_l2 = std::max(out.max_l2, l2);
    if (keep_field) out.field.push_back(r);
  }
  return out;
}

BalanceReport integral_balance(const NumericVector& v, const SolutionField& sol) {
  const Components comp = evaluate_components(v, sol);
  const double dtl = sol.grid.level_spacing();
  const double h = sol.grid.h();
  const std::size_t m = comp.x.size();
  std::vector<double> q(sol.levels());
  for (std::size_t j = 0; j < sol.levels(); ++j) {
    const std::vector<double>& c = comp.c1[j];
    double s = 0.5 * (c[0] + c[m - 1]);
    for (std::size_t i = 1; i + 1 < m; ++i) s += c[i];
    q[j] = h * s;
  }
  BalanceReport out;
  for (std::size_t j = 1; j + 1 < sol.levels(); ++j) {
    const double flux = comp.c2[j][m - 1] - comp.c2[j][0];
    const double d = (q[j + 1] - q[j - 1]) / (2.0 * dtl) + flux;
    out.times.push_back(sol.times[j]);
    out.defect.push_back(d);
    out.max_defect = std::max(out.max_defect, std::fabs(d));
  }
  return out;
}

double observed_order(double coarse, double fine) {
  if (coarse <= 0.0 || fine <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

bool order_gate(const std::vector<double>& errors, double min_order, double floor, std::vector<double>* orders) {
  bool pass = errors.size() >= 2;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double o = observed_order(errors[i], errors[i + 1]);
    if (orders != nullptr) orders->push_back(o);
    const bool below = errors[i] < floor && errors[i + 1] < floor;
    if (!below && !(o >= min_order)) pass = false;
  }
  return pass;
}

LadderConfig sine_benchmark(int base_cells, int grids, double t_final) {
  LadderConfig c;
  c.base_cells = base_cells;
  c.grids = grids;
  c.t_final = t_final;
  c.x0 = 0.0;
  c.x1 = 2.0 * std::numbers::pi;
  c.initial = [](double x) { return 0.2 + 0.1 * std::sin(x); };
  return c;
}

std::vector<Grid> make_ladder(const LadderConfig& config) {
  if (config.grids < 2) throw InvalidInput("a refinement ladder needs at least two grids");
  if (!(config.t_final > 0.0)) throw InvalidInput("final time must be positive");
  if (!config.initial) throw InvalidInput("no initial condition");
  const double x1 = config.x1 > config.x0 ? config.x1 : config.x0 + 2.0 * std::numbers::pi;
  Grid base;
  base.x0 = config.x0;
  base.x1 = x1;
  base.cells = config.base_cells;
  double top = -1e300;
  for (std::size_t i = 0; i < base.nodes(); ++i) top = std::max(top, config.initial(base.x(i)));
  // Finer grids see the same initial maximum to within sampling; size every
  // step from the finest grid so all of them respect the limit.
  Grid finest = base;
  finest.cells = config.base_cells << (config.grids - 1);
  for (std::size_t i = 0; i < finest.nodes(); ++i) top = std::max(top, config.initial(finest.x(i)));
  const double diffusion = 1.0 + top;
  const double h0 = base.h();
  const long base_levels = std::max<long>(4, static_cast<long>(std::ceil(8.0 * config.t_final / h0)));
  const double k0 = kStabilitySafety * h0 * h0 / diffusion;
  const long base_stride = static_cast<long>(std::ceil(config.t_final / (k0 * static_cast<double>(base_levels))));
  std::vector<Grid> out;
  for (int r = 0; r < config.grids; ++r) {
    Grid g = base;
    g.cells = config.base_cells << r;
    g.stride = base_stride << (2 * r) >> r;  // steps grow 4x, stored levels 2x
    g.steps = base_levels * base_stride << (2 * r);
    g.dt = config.t_final / static_cast<double>(g.steps);
    out.push_back(g);
  }
  return out;
}

bool LadderReport::pass() const {
  return !vectors.empty() && std::all_of(vectors.begin(), vectors.end(), [](const VectorLadder& v) { return v.pass(); });
}

LadderReport run_ladder(const LadderConfig& config, const std::vector<NumericVector>& vectors) {
  const auto start = std::chrono::steady_clock::now();
  LadderReport out;
  out.kernels = active_kernels().name;
  out.grids = make_ladder(config);
  out.vectors.resize(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) out.vectors[i].label = vectors[i].label;
  for (const Grid& g : out.grids) {
    const SolutionField sol = solve(config.initial, g);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      out.vectors[i].residual.push_back(discrete_divergence_residual(vectors[i], sol).max_linf);
      out.vectors[i].balance.push_back(integral_balance(vectors[i], sol).max_defect);
    }
  }
  for (VectorLadder& v : out.vectors) {
    v.residual_pass = order_gate(v.residual, config.min_order, config.floor, &v.residual_orders);
    v.balance_pass = order_gate(v.balance, config.min_order, config.floor, &v.balance_orders);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

nlohmann::json to_json(const LadderReport& report) {
  nlohmann::json grids = nlohmann::json::array();
  for (const Grid& g : report.grids) {
    grids.push_back({{"cells", g.cells},
                     {"h", g.h()},
                     {"dt", g.dt},
                     {"steps", g.steps},
                     {"stored_levels", g.levels()},
                     {"t_final", g.t_final()}});
  }
  nlohmann::json vectors = nlohmann::json::array();
  for (const VectorLadder& v : report.vectors) {
    auto finite = [](const std::vector<double>& xs) {
      nlohmann::json a = nlohmann::json::array();
      for (double x : xs) a.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json("inf"));
      return a;
    };
    vectors.push_back({{"label", v.label},
                       {"residual_linf", finite(v.residual)},
                       {"residual_orders", finite(v.residual_orders)},
                       {"balance_defect", finite(v.balance)},
                       {"balance_orders", finite(v.balance_orders)},
                       {"residual_pass", v.residual_pass},
                       {"balance_pass", v.balance_pass},
                       {"pass", v.pass()}});
  }
  return {{"grids", grids}, {"vectors", vectors}, {"pass", report.pass()}};
}

void write_residual_csv(std::ostream& out, const ResidualReport& report) {
  out << "t,x,residual\n";
  out.precision(17);
  for (std::size_t j = 0; j < report.field.size(); ++j) {
    for (std::size_t i = 0; i < report.field[j].size(); ++i) {
      out << report.times[j] << ',' << report.x[i] << ',' << report.field[j][i] << '\n';
    }
  }
}

double traveling_front(double t, double x) {
  const double xi = x - 0.5 * t;
  // Profile relation for (1+v) v' = v (v-1)/2 with v(0) = 1/2; decreasing in v.
  auto profile = [](double v) { return -2.0 * std::log(v) + 4.0 * std::log1p(-v) + 2.0 * std::log(2.0); };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (profile(mid) > xi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace jetlaw::numverify
