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

#include "jetlaw/numverify/kernels.hpp"

namespace jetlaw::numverify {

namespace {

void d1(const double* u, double* out, std::size_t n, double inv_2h) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv_2h;
}

void d2(const double* u, double* out, std::size_t n, double inv_h2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double two_u = u[i] + u[i];
    out[i] = ((u[i + 1] - two_u) + u[i - 1]) * inv_h2;
  }
}

void d3(const double* u, double* out, std::size_t n, double inv_2h3) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u[i + 1] + u[i + 1];
    const double b = u[i - 1] + u[i - 1];
    out[i] = (((u[i + 2] - a) + b) - u[i - 2]) * inv_2h3;
  }
}

void ks_rhs(const double* u, double* out, std::size_t n, double inv_2h, double inv_h2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ux = (u[i + 1] - u[i - 1]) * inv_2h;
    const double two_u = u[i] + u[i];
    const double uxx = ((u[i + 1] - two_u) + u[i - 1]) * inv_h2;
    const double diffusion = (1.0 + u[i]) * uxx;
    out[i] = diffusion + ux * (ux - u[i]);
  }
}

void lincomb(const double* a, double c, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + c * b[i];
}

void rk4_combine(const double* u, const double* k1, const double* k2, const double* k3, const double* k4, double c,
                 double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = k2[i] + k3[i];
    const double s = (k1[i] + (mid + mid)) + k4[i];
    out[i] = u[i] + c * s;
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * a[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", d1, d2, d3, ks_rhs, lincomb, rk4_combine, add, sub, mul, scale};
  return table;
}

}  // namespace jetlaw::numverify
