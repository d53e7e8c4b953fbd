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
#include <functional>

#include "bewitness/kernel/matrix.hpp"

namespace bewitness {

/// Singular values of a complex matrix, descending, min(rows, cols) of them.
///
/// One-sided (Hestenes) Jacobi: column pairs are rotated until mutually
/// orthogonal, the column norms are then the singular values.
inline RealVector singular_values(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  ComplexMatrix a = m;

  constexpr int kMaxSweeps = 60;
  constexpr double kOrthTol = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p)
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma{};
        for (std::size_t r = 0; r < rows; ++r) {
          alpha += std::norm(a(r, p));
          beta += std::norm(a(r, q));
          gamma += std::conj(a(r, p)) * a(r, q);
        }
        const double mag = std::abs(gamma);
        if (mag == 0.0 || mag <= kOrthTol * std::sqrt(alpha * beta)) continue;
        rotated = true;

        const Complex phase = gamma / mag;
        const double zeta = (beta - alpha) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);
        for (std::size_t r = 0; r < rows; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = arp * gpp + arq * gqp;
          a(r, q) = arp * gpq + arq * gqq;
        }
      }
    if (!rotated) break;
  }

  RealVector out(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += std::norm(a(r, c));
    out[c] = std::sqrt(acc);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  out.resize(std::min(rows, cols));
  return out;
}

}  // namespace bewitness
