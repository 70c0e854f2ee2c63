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

#ifndef JETLAW_CONSLAW_HPP
#define JETLAW_CONSLAW_HPP

#include <optional>
#include <string>
#include <vector>

#include "jetlaw/calculus.hpp"
#include "jetlaw/normal_form.hpp"

namespace jetlaw {

struct ConservedVector {
  NormalForm c1;
  NormalForm c2;
  std::string symmetry;      // label of the generating field, empty if none
  std::string substitution;  // printed phi, or "nu" while symbolic
  bool symmetry_verified = true;
  bool transferred = false;
  std::vector<std::string> trail;
};

/// W = eta - xi_t u_t - xi_x u_x.
NormalForm characteristic(const VectorField& field);

/// Components of the reduced Ibragimov formula
///   C^i = W [dL/du_i - D_j dL/du_ij] + D_j(W) dL/du_ij,  L = nu F,
/// with nu kept symbolic. Mixed second derivatives carry a factor 1/2.
ConservedVector conserved_vector(const NormalForm& equation, const VectorField& field);

/// The same with nu replaced by phi. Throws InvalidInput, quoting the
/// residual, when phi does not make the adjoint equation a multiple of F.
ConservedVector conserved_vector(const NormalForm& equation, const VectorField& field, const NormalForm& phi,
                                 const std::string& phi_text = {});

/// D_t C1 + D_x C2 reduced modulo F.
NormalForm divergence_residual(const ConservedVector& c, const NormalForm& equation);
NormalForm divergence_residual(const NormalForm& c1, const NormalForm& c2, const NormalForm& equation);

/// Moves total x-derivatives out of C1: C1 = A + D_x B on solutions, giving
/// (A, C2 + D_t B). Unchanged when nothing can be moved.
ConservedVector transfer_dx_terms(const ConservedVector& c, const NormalForm& equation);

/// Psi with F = u_t + D_x Psi, when F has that form.
std::optional<NormalForm> conservation_form(const NormalForm& equation);

struct TrivialityReport {
  bool trivial = false;
  /// k when the vector is k times the conservation-form law plus a trivial one.
  std::optional<Rational> multiple_of_equation;
  std::string description;
};

TrivialityReport triviality_check(const ConservedVector& c, const NormalForm& equation);

/// True when the two vectors differ by a trivial conserved vector.
bool equivalent_modulo_trivial(const ConservedVector& a, const ConservedVector& b, const NormalForm& equation);

/// pr X(L) + L (D_t xi_t + D_x xi_x) - W E(L) - D_t C1 - D_x C2 with
/// C^i = xi^i L + (reduced formula), nu symbolic. Identically zero.
NormalForm noether_defect(const NormalForm& equation, const VectorField& field);

/// Point symmetries X1 = d_t, X2 = d_x, X3 = t d_t - t d_x - (1+u) d_u.
std::vector<VectorField> ks_symmetries();

struct ReferenceVector {
  std::string label;
  std::string c1;
  std::string c2;
  bool simplified = false;
};

/// Conserved vectors for X1, X2, X3 with nu = exp(-t-x) as published,
/// including the simplified X1 pair.
std::vector<ReferenceVector> ks_reference_vectors();

}  // namespace jetlaw

#endif  // JETLAW_CONSLAW_HPP
