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

#ifndef JETLAW_NUMVERIFY_NUMVERIFY_HPP
#define JETLAW_NUMVERIFY_NUMVERIFY_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "jetlaw/conslaw.hpp"
#include "jetlaw/normal_form.hpp"
#include "json.hpp"

namespace jetlaw::numverify {

inline constexpr double kParabolicityFloor = 1e-6;
inline constexpr double kStabilitySafety = 0.2;

/// Uniform grid on [x0, x1] with time stepping data. Periodic grids have
/// `cells` nodes (x1 identified with x0); Dirichlet grids have cells + 1.
struct Grid {
  double x0 = 0.0;
  double x1 = 0.0;
  int cells = 64;
  bool periodic = true;
  double dt = 0.0;
  long steps = 0;
  long stride = 1;  // store every stride-th step

  [[nodiscard]] double h() const { return (x1 - x0) / cells; }
  [[nodiscard]] std::size_t nodes() const { return periodic ? cells : cells + 1; }
  [[nodiscard]] double x(std::size_t i) const { return x0 + static_cast<double>(i) * h(); }
  [[nodiscard]] double t_final() const { return dt * static_cast<double>(steps); }
  [[nodiscard]] double level_spacing() const { return dt * static_cast<double>(stride); }
  [[nodiscard]] std::size_t levels() const { return static_cast<std::size_t>(steps / stride) + 1; }

  /// Throws InvalidInput unless cells >= 8, dt > 0, stride divides steps and
  /// dt <= 0.2 h^2 / max_diffusion.
  void validate(double max_diffusion) const;
};

using InitialCondition = std::function<double(double x)>;
using BoundaryCondition = std::function<double(double t, double x)>;

struct SolutionField {
  Grid grid;
  std::string scheme;
  std::vector<double> times;
  std::vector<double> values;  // level-major

  [[nodiscard]] std::size_t nodes() const { return grid.nodes(); }
  [[nodiscard]] std::size_t levels() const { return times.size(); }
  [[nodiscard]] const double* level(std::size_t j) const { return values.data() + j * nodes(); }
};

/// Method of lines for u_t = (1+u) u_xx + u_x^2 - u u_x: centered second
/// order differences, classical RK4. Dirichlet grids take boundary values
/// from `boundary`. Throws NumericalAbort on loss of parabolicity
/// (min 1+u < 1e-6) or blow-up, InvalidInput on a bad grid.
SolutionField solve(const InitialCondition& initial, const Grid& grid, const BoundaryCondition& boundary = {});

/// Point values of t, x and u, u_x, u_xx, u_xxx on a run of nodes.
struct FieldContext {
  std::size_t n = 0;
  double t = 0.0;
  const double* x = nullptr;
  const double* u[4] = {nullptr, nullptr, nullptr, nullptr};
};

/// Array evaluator for an expression in t, x and pure x-derivatives of u
/// up to third order.
class CompiledExpr {
 public:
  /// Throws EvaluationError for parameters, function symbols, nu, or
  /// coordinates outside that set.
  static CompiledExpr compile(const NormalForm& e);

  void evaluate(const FieldContext& ctx, double* out) const;

 private:
  enum class SlotKind { T, X, Jet, Exp, Den };
  struct Slot {
    SlotKind kind;
    int order = 0;
    std::size_t inner = 0;
  };
  struct Term {
    double coefficient;
    std::vector<std::pair<std::size_t, int>> factors;
  };
  std::vector<Slot> slots_;
  std::vector<CompiledExpr> inner_;
  std::vector<Term> terms_;
};

/// A vector to check numerically: both components reduced modulo F.
struct NumericVector {
  std::string label;
  CompiledExpr c1;
  CompiledExpr c2;
};

NumericVector prepare(const std::string& label, const ConservedVector& c, const NormalForm& equation);

/// Fields of one stored level on the nodes where all stencils exist. For a
/// periodic grid the run is closed: node `cells` repeats node 0 at x1.
struct LevelFields {
  std::size_t first = 0;  // grid index of the first node
  std::vector<double> x;
  std::vector<double> d[4];
};

LevelFields level_fields(const SolutionField& sol, std::size_t level);

struct ResidualReport {
  std::vector<double> times;
  std::vector<double> linf;
  std::vector<double> l2;
  double max_linf = 0.0;
  double max_l2 = 0.0;
  // Residual values per interior level and node, kept on request.
  std::vector<std::vector<double>> field;
  std::vector<double> x;
};

/// Centered D_t C1 + D_x C2 at interior nodes and interior levels.
ResidualReport discrete_divergence_residual(const NumericVector& v, const SolutionField& sol, bool keep_field = false);

struct BalanceReport {
  std::vector<double> times;
  std::vector<double> defect;
  double max_defect = 0.0;
};

/// dQ/dt + C2(right) - C2(left) with Q the trapezoid integral of C1.
BalanceReport integral_balance(const NumericVector& v, const SolutionField& sol);

double observed_order(double coarse, double fine);

/// True when every consecutive pair improves at order >= min_order, or
/// both errors of the pair are below `floor`.
bool order_gate(const std::vector<double>& errors, double min_order, double floor, std::vector<double>* orders = nullptr);

struct LadderConfig {
  int base_cells = 64;
  int grids = 3;
  double t_final = 1.0;
  double x0 = 0.0;
  double x1 = 0.0;  // 0 means 2 pi
  InitialCondition initial;
  double min_order = 1.8;
  double floor = 1e-10;
};

/// The sine benchmark: u0 = 0.2 + 0.1 sin x on periodic [0, 2 pi].
LadderConfig sine_benchmark(int base_cells = 64, int grids = 3, double t_final = 1.0);

/// Grids with cells doubling, dt divided by four and the stored-level
/// spacing halved, so every grid stores the same coarse time levels.
std::vector<Grid> make_ladder(const LadderConfig& config);

struct VectorLadder {
  std::string label;
  std::vector<double> residual;  // max L-infinity per grid
  std::vector<double> balance;   // max defect per grid
  std::vector<double> residual_orders;
  std::vector<double> balance_orders;
  bool residual_pass = false;
  bool balance_pass = false;
  [[nodiscard]] bool pass() const { return residual_pass && balance_pass; }
};

struct LadderReport {
  std::vector<Grid> grids;
  std::vector<VectorLadder> vectors;
  std::string kernels;
  double seconds = 0.0;
  [[nodiscard]] bool pass() const;
};

LadderReport run_ladder(const LadderConfig& config, const std::vector<NumericVector>& vectors);

nlohmann::json to_json(const LadderReport& report);
void write_residual_csv(std::ostream& out, const ResidualReport& report);

/// Traveling front of u_t = (1+u) u_xx + u_x^2 - u u_x with speed 1/2:
/// u = v(x - t/2), v decreasing from 1 to 0, v(0) = 1/2.
double traveling_front(double t, double x);

}  // namespace jetlaw::numverify

#endif  // JETLAW_NUMVERIFY_NUMVERIFY_HPP
