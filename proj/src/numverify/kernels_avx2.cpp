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

// Built with -mavx2 only. Keep the operation order identical to the scalar
// kernels; the tails reuse the scalar expressions.

#include <immintrin.h>

#include "jetlaw/numverify/kernels.hpp"

namespace jetlaw::numverify {

namespace {

constexpr std::size_t kLanes = 4;

void d1(const double* u, double* out, std::size_t n, double inv_2h) {
  const __m256d s = _mm256_set1_pd(inv_2h);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d r = _mm256_loadu_pd(u + i + 1);
    const __m256d l = _mm256_loadu_pd(u + i - 1);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(r, l), s));
  }
  for (; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv_2h;
}

void d2(const double* u, double* out, std::size_t n, double inv_h2) {
  const __m256d s = _mm256_set1_pd(inv_h2);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d c = _mm256_loadu_pd(u + i);
    const __m256d r = _mm256_loadu_pd(u + i + 1);
    const __m256d l = _mm256_loadu_pd(u + i - 1);
    const __m256d two_u = _mm256_add_pd(c, c);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(r, two_u), l), s));
  }
  for (; i < n; ++i) {
    const double two_u = u[i] + u[i];
    out[i] = ((u[i + 1] - two_u) + u[i - 1]) * inv_h2;
  }
}

void d3(const double* u, double* out, std::size_t n, double inv_2h3) {
  const __m256d s = _mm256_set1_pd(inv_2h3);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d r1 = _mm256_loadu_pd(u + i + 1);
    const __m256d l1 = _mm256_loadu_pd(u + i - 1);
    const __m256d r2 = _mm256_loadu_pd(u + i + 2);
    const __m256d l2 = _mm256_loadu_pd(u + i - 2);
    const __m256d a = _mm256_add_pd(r1, r1);
    const __m256d b = _mm256_add_pd(l1, l1);
    const __m256d v = _mm256_sub_pd(_mm256_add_pd(_mm256_sub_pd(r2, a), b), l2);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(v, s));
  }
  for (; i < n; ++i) {
    const double a = u[i + 1] + u[i + 1];
    const double b = u[i - 1] + u[i - 1];
    out[i] = (((u[i + 2] - a) + b) - u[i - 2]) * inv_2h3;
  }
}

void ks_rhs(const double* u, double* out, std::size_t n, double inv_2h, double inv_h2) {
  const __m256d s1 = _mm256_set1_pd(inv_2h);
  const __m256d s2 = _mm256_set1_pd(inv_h2);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d c = _mm256_loadu_pd(u + i);
    const __m256d r = _mm256_loadu_pd(u + i + 1);
    const __m256d l = _mm256_loadu_pd(u + i - 1);
    const __m256d ux = _mm256_mul_pd(_mm256_sub_pd(r, l), s1);
    const __m256d two_u = _mm256_add_pd(c, c);
    const __m256d uxx = _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(r, two_u), l), s2);
    const __m256d diffusion = _mm256_mul_pd(_mm256_add_pd(one, c), uxx);
    _mm256_storeu_pd(out + i, _mm256_add_pd(diffusion, _mm256_mul_pd(ux, _mm256_sub_pd(ux, c))));
  }
  for (; i < n; ++i) {
    const double ux = (u[i + 1] - u[i - 1]) * inv_2h;
    const double two_u = u[i] + u[i];
    const double uxx = ((u[i + 1] - two_u) + u[i - 1]) * inv_h2;
    const double diffusion = (1.0 + u[i]) * uxx;
    out[i] = diffusion + ux * (ux - u[i]);
  }
}

void lincomb(const double* a, double c, const double* b, double* out, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(cv, _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), prod));
  }
  for (; i < n; ++i) out[i] = a[i] + c * b[i];
}

void rk4_combine(const double* u, const double* k1, const double* k2, const double* k3, const double* k4, double c,
                 double* out, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d mid = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
    const __m256d s =
        _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_add_pd(mid, mid)), _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(cv, s)));
  }
  for (; i < n; ++i) {
    const double mid = k2[i] + k3[i];
    const double s = (k1[i] + (mid + mid)) + k4[i];
    out[i] = u[i] + c * s;
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double c, double* out, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_pd(out + i, _mm256_mul_pd(cv, _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) out[i] = c * a[i];
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", d1, d2, d3, ks_rhs, lincomb, rk4_combine, add, sub, mul, scale};
  return table;
}

}  // namespace jetlaw::numverify
