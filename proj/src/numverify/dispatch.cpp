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

#include <cstdlib>
#include <string_view>

#include "jetlaw/numverify/kernels.hpp"

namespace jetlaw::numverify {

#ifdef JETLAW_HAVE_AVX2
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#ifdef JETLAW_HAVE_AVX2
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return &avx2_kernel_table();
#endif
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("JETLAW_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
    const KernelTable* simd = avx2_kernels();
    return simd != nullptr ? simd : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace jetlaw::numverify
