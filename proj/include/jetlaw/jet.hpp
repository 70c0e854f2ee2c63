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

#ifndef JETLAW_JET_HPP
#define JETLAW_JET_HPP

#include <compare>
#include <string>

namespace jetlaw {

/// Independent variable / total-derivative direction.
enum class Direction { T, X };

inline char direction_letter(Direction d) { return d == Direction::T ? 't' : 'x'; }

/// Derivative coordinate u_{t^a x^b} of a dependent variable. Mixed partials
/// commute, so (a, b) alone identifies the coordinate: u_tx and u_xt are the
/// same JetVar.
struct JetVar {
  std::string name;
  int t_order = 0;
  int x_order = 0;

  [[nodiscard]] int order() const { return t_order + x_order; }
  [[nodiscard]] bool is_base() const { return order() == 0; }

  [[nodiscard]] JetVar derived(Direction d, int times = 1) const {
    JetVar out = *this;
    (d == Direction::T ? out.t_order : out.x_order) += times;
    return out;
  }

  [[nodiscard]] JetVar base() const { return JetVar{name, 0, 0}; }

  [[nodiscard]] std::string to_string() const {
    if (is_base()) return name;
    return name + "_" + std::string(t_order, 't') + std::string(x_order, 'x');
  }

  auto operator<=>(const JetVar&) const = default;
};

inline JetVar jet_u(int t_order = 0, int x_order = 0) { return JetVar{"u", t_order, x_order}; }
inline JetVar jet_nu(int t_order = 0, int x_order = 0) { return JetVar{"nu", t_order, x_order}; }

}  // namespace jetlaw

#endif  // JETLAW_JET_HPP
