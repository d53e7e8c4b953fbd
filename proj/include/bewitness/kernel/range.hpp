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
#include <span>
#include <vector>

#include "bewitness/kernel/eig.hpp"
#include "bewitness/kernel/matrix.hpp"

namespace bewitness {

/// Relative eigenvalue threshold separating the range from the kernel.
inline constexpr double kDefaultRankTol = 1e-10;

/// Orthonormal vectors spanning a subspace of H_A (x) H_B.
struct SubspaceBasis {
  std::vector<ComplexVector> vectors;
  BipartiteDims dims;

  std::size_t size() const { return vectors.size(); }

  /// sum_k |v_k><v_k|
  ComplexMatrix projector() const {
    const std::size_t D = dims.total();
    ComplexMatrix p(D, D);
    for (const auto& v : vectors) p += outer(v, v);
    return p;
  }

  /// ||v - Pi v||, computed from projection coefficients.
  double distance(std::span<const Complex> v) const {
    ComplexVector rest(v.begin(), v.end());
    for (const auto& b : vectors) {
      const Complex c = inner(b, v);
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= c * b[i];
    }
    return norm(rest);
  }
};

/// Number of eigenvalues with |value| > rank_tol * max|value|.
inline std::size_t numerical_rank(std::span<const double> values, double rank_tol = kDefaultRankTol) {
  double largest = 0.0;
  for (double x : values) largest = std::max(largest, std::abs(x));
  if (largest == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double x) { return std::abs(x) > rank_tol * largest; }));
}

/// Eigenvectors of a Hermitian operator whose eigenvalues exceed rank_tol
/// relative to the largest magnitude. A zero matrix yields an empty basis.
/// Negative eigenvalues count by magnitude, so partially transposed NPT
/// operators are handled too.
inline SubspaceBasis orthonormal_range(const ComplexMatrix& m, const BipartiteDims& dims,
                                       double rank_tol = kDefaultRankTol) {
  const EigenSystem es = hermitian_eig(m);
  double largest = 0.0;
  for (double x : es.values) largest = std::max(largest, std::abs(x));
  SubspaceBasis out{{}, dims};
  if (largest == 0.0) return out;
  for (std::size_t k = 0; k < es.values.size(); ++k)
    if (std::abs(es.values[k]) > rank_tol * largest) out.vectors.push_back(es.vector(k));
  return out;
}

/// Dimension of span{v_k}, from the spectrum of the frame operator sum_k |v_k><v_k|.
inline std::size_t span_rank(std::span<const ComplexVector> vs, std::size_t dim, double rank_tol = kDefaultRankTol) {
  if (vs.empty()) return 0;
  ComplexMatrix frame(dim, dim);
  for (const auto& v : vs) frame += outer(v, v);
  return numerical_rank(hermitian_eig(frame).values, rank_tol);
}

}  // namespace bewitness
