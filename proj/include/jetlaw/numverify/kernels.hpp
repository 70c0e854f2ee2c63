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

#ifndef JETLAW_NUMVERIFY_KERNELS_HPP
#define JETLAW_NUMVERIFY_KERNELS_HPP

#include <cstddef>
#include <string>

namespace jetlaw::numverify {

// Array kernels. Stencil kernels read u[-2 .. n+1] around the n outputs, so
// callers pass a pointer into a ghost-padded buffer. Every implementation
// performs the same IEEE operations in the same order (no fused multiply-add),
// which makes the variants bitwise interchangeable.
struct KernelTable {
  const char* name;
  // out = (u[i+1] - u[i-1]) * inv_2h
  void (*d1)(const double* u, double* out, std::size_t n, double inv_2h);
  // out = ((u[i+1] - 2 u[i]) + u[i-1]) * inv_h2
  void (*d2)(const double* u, double* out, std::size_t n, double inv_h2);
  // out = (((u[i+2] - 2 u[i+1]) + 2 u[i-1]) - u[i-2]) * inv_2h3
  void (*d3)(const double* u, double* out, std::size_t n, double inv_2h3);
  // Right side of u_t = (1+u) u_xx + u_x (u_x - u) with centered differences.
  void (*ks_rhs)(const double* u, double* out, std::size_t n, double inv_2h, double inv_h2);
  // out = a + c b
  void (*lincomb)(const double* a, double c, const double* b, double* out, std::size_t n);
  // out = u + c (((k1 + 2 (k2 + k3))) + k4)
  void (*rk4_combine)(const double* u, const double* k1, const double* k2, const double* k3, const double* k4,
                      double c, double* out, std::size_t n);
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out = c a
  void (*scale)(const double* a, double c, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();
/// AVX2 when available unless JETLAW_SIMD=scalar is set.
const KernelTable& active_kernels();

}  // namespace jetlaw::numverify

#endif  // JETLAW_NUMVERIFY_KERNELS_HPP
