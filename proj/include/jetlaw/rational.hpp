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

#ifndef JETLAW_RATIONAL_HPP
#define JETLAW_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace jetlaw {

/// Exact coefficient field of the symbolic core.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace jetlaw

#endif  // JETLAW_RATIONAL_HPP
