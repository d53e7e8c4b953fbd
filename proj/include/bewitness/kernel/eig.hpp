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
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bewitness/kernel/matrix.hpp"

namespace bewitness {

/// Absolute Hermiticity tolerance for unit-scale inputs; scaled by max|M| above 1.
inline constexpr double kHermitianTol = 1e-12;

/// Spectrum of a Hermitian matrix. Eigenvalues are sorted descending and
/// column k of `vectors` is the eigenvector for `values[k]`.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;

  ComplexVector vector(std::size_t k) const { return vectors.col(k); }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

inline double frobenius(const ComplexMatrix& a) {
  double acc = 0.0;
  for (const auto& x : a.data()) acc += std::norm(x);
  return std::sqrt(acc);
}

// One complex Jacobi rotation zeroing a(p,q). With a(p,q) = |a_pq| e^{i phi},
// G = diag(1, e^{-i phi}) * R(theta) on the (p,q) plane, and a <- G^dag a G.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized before rotating.
///
/// Throws std::invalid_argument for non-square input or when max|M - M^dag|
/// exceeds the Hermiticity tolerance; the message carries the defect.
inline EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square()) {
    std::ostringstream msg;
    msg << "hermitian_eig: matrix is " << m.rows() << "x" << m.cols() << ", not square";
    throw std::invalid_argument(msg.str());
  }
  const double defect = hermitian_defect(m);
  const double scale = std::max(1.0, max_abs(m));
  if (defect > kHermitianTol * scale) {
    std::ostringstream msg;
    msg << "hermitian_eig: matrix is not Hermitian, max|M - M^dag| = " << defect;
    throw std::invalid_argument(msg.str());
  }

  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double total = detail::frobenius(a);
  constexpr int kMaxSweeps = 100;
  double previous_off = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = detail::off_diagonal_norm(a);
    if (off <= 1e-17 * total || off == 0.0 || off >= previous_off) break;
    previous_off = off;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// V diag(values) V^dag
inline ComplexMatrix reconstruct(const EigenSystem& es) {
  const std::size_t n = es.values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * es.values[k];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  return out;
}

}  // namespace bewitness
