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

#include <cmath>
#include <vector>

#include "bewitness/bewitness.hpp"

namespace support {

using namespace bewitness;

/// Minimum product-state overlap of the Tiles UPB projector. Computed with
/// 2000-start seesaw, cross-checked by the real-grid oracle (agreement 4e-6,
/// limited by grid resolution) and an independent numpy seesaw.
inline constexpr double kTilesLambda = 0.0284162133357305;

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = Complex(rng.normal(), rng.normal());
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline ComplexVector max_entangled(std::size_t d) {
  ComplexVector v(d * d);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

/// w1 followed by eta_1..eta_5: the product states in the support of rho_1.
inline std::vector<ProductVector> rho1_support_products() {
  std::vector<ProductVector> out{tiles_upb().member(0)};
  for (auto& e : eta_basis_3x3()) out.push_back(e);
  return out;
}

/// The six product states in the support of rho_5, in the listed order.
inline std::vector<ProductVector> rho5_support_products() {
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  auto vec = [](double a, double b, double c) { return ComplexVector{a, b, c}; };
  return {
      {vec(0, 1, 0), vec(0, 1, 0)},
      {vec(r2, r2, 0), vec(0, 0, 1)},
      {vec(1, 0, 0), vec(r2, r2, 0)},
      {vec(0, 0, 1), vec(0, r2, r2)},
      {vec(0, r2, r2), vec(1, 0, 0)},
      {vec(r3, r3, r3), vec(r3, r3, r3)},
  };
}

/// Projector onto range(rho).
inline SubspaceProjector range_projector(const DensityOperator& rho) {
  return {orthonormal_range(rho.matrix(), rho.dims()).projector(), rho.dims()};
}

/// For each reference state, the best |<ref|found>|^2 among `found`.
inline std::vector<double> best_fidelities(const std::vector<ProductVector>& refs, const std::vector<ProductVector>& found) {
  std::vector<double> out;
  for (const auto& r : refs) {
    double best = 0.0;
    for (const auto& f : found) best = std::max(best, std::pow(composite_overlap(r, f), 2));
    out.push_back(best);
  }
  return out;
}

inline std::vector<std::size_t> iota(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

}  // namespace support
