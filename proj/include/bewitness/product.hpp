// Copyright 2026 The bewitness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bewitness/kernel/matrix.hpp"
#include "bewitness/random.hpp"

namespace bewitness {

inline constexpr double kUnitNormTol = 1e-12;

/// psiA (x) phiB with both local factors normalized.
struct ProductVector {
  ComplexVector psiA;
  ComplexVector phiB;

  BipartiteDims dims() const { return {psiA.size(), phiB.size()}; }
  ComplexVector composite() const { return kron(psiA, phiB); }
  /// psiA (x) conj(phiB), conjugation in the standard basis.
  ComplexVector conjugated_composite() const { return kron(psiA, conj(phiB)); }

  friend bool operator==(const ProductVector&, const ProductVector&) = default;
};

/// Throws unless both factors are nonempty and unit norm to kUnitNormTol.
inline void validate(const ProductVector& p) {
  if (p.psiA.empty() || p.phiB.empty()) throw std::invalid_argument("ProductVector: empty local factor");
  const double na = norm(p.psiA);
  const double nb = norm(p.phiB);
  if (std::abs(na - 1.0) > kUnitNormTol || std::abs(nb - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("ProductVector: local factors must be unit vectors (norms " + std::to_string(na) +
                                ", " + std::to_string(nb) + ")");
  }
}

namespace detail {
inline void fix_phase(ComplexVector& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k]) + 1e-12) k = i;
  if (std::abs(v[k]) == 0.0) return;
  const Complex phase = std::conj(v[k]) / std::abs(v[k]);
  for (auto& x : v) x *= phase;
}
}  // namespace detail

/// Removes the local phase freedom: the first largest-magnitude coefficient
/// of each factor is made real positive.
inline ProductVector canonical(ProductVector p) {
  detail::fix_phase(p.psiA);
  detail::fix_phase(p.phiB);
  return p;
}

inline ProductVector random_product_vector(Rng& rng, const BipartiteDims& dims) {
  ProductVector p;
  p.psiA = rng.unit_vector(dims.dA);
  p.phiB = rng.unit_vector(dims.dB);
  return p;
}

/// |<a|b>| of the composite vectors; phase invariant.
inline double composite_overlap(const ProductVector& a, const ProductVector& b) {
  return std::abs(inner(a.psiA, b.psiA)) * std::abs(inner(a.phiB, b.phiB));
}

}  // namespace bewitness
