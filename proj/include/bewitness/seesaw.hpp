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
#include <cstddef>
#include <stdexcept>

#include "bewitness/kernel/eig.hpp"
#include "bewitness/kernel/matrix.hpp"
#include "bewitness/product.hpp"

// Alternating minimization of <a (x) b| P |a (x) b> over product states.
// With one factor fixed the objective is a quadratic form in the other, so
// each half-step is a closed-form lowest-eigenvector solve and the objective
// never increases.

namespace bewitness {

struct SeesawOptions {
  std::size_t max_alternations = 500;
  /// Stop once an alternation improves the value by at most tol + relative_tol * value.
  double tol = 1e-12;
  double relative_tol = 0.0;
  /// Stop as soon as the value drops to or below this.
  double floor = -1.0;
};

struct SeesawRun {
  ProductVector state;
  double value = 0.0;
  std::size_t alternations = 0;
};

/// (1 (x) <b|) P (1 (x) |b>), a dA x dA matrix.
inline ComplexMatrix contract_b(const ComplexMatrix& p, const BipartiteDims& dims, std::span<const Complex> b) {
  ComplexMatrix out(dims.dA, dims.dA);
  for (std::size_t i = 0; i < dims.dA; ++i)
    for (std::size_t k = 0; k < dims.dA; ++k) {
      Complex acc{};
      for (std::size_t j = 0; j < dims.dB; ++j) {
        const Complex bj = std::conj(b[j]);
        if (bj == Complex{}) continue;
        for (std::size_t l = 0; l < dims.dB; ++l) acc += bj * p(dims.index(i, j), dims.index(k, l)) * b[l];
      }
      out(i, k) = acc;
    }
  return out;
}

/// (<a| (x) 1) P (|a> (x) 1), a dB x dB matrix.
inline ComplexMatrix contract_a(const ComplexMatrix& p, const BipartiteDims& dims, std::span<const Complex> a) {
  ComplexMatrix out(dims.dB, dims.dB);
  for (std::size_t j = 0; j < dims.dB; ++j)
    for (std::size_t l = 0; l < dims.dB; ++l) {
      Complex acc{};
      for (std::size_t i = 0; i < dims.dA; ++i) {
        const Complex ai = std::conj(a[i]);
        if (ai == Complex{}) continue;
        for (std::size_t k = 0; k < dims.dA; ++k) acc += ai * p(dims.index(i, j), dims.index(k, l)) * a[k];
      }
      out(j, l) = acc;
    }
  return out;
}

/// Lowest eigenvector of a small Hermitian matrix. When the lowest eigenvalue
/// is degenerate, the normalized projection of `current` onto that eigenspace
/// is returned, so the iterate moves as little as possible.
inline ComplexVector lowest_eigenvector(const ComplexMatrix& m, std::span<const Complex> current,
                                        double degenerate_tol = 1e-10) {
  const EigenSystem es = hermitian_eig(m);
  const std::size_t n = es.values.size();
  const double lowest = es.values[n - 1];
  ComplexVector proj(n);
  std::size_t multiplicity = 0;
  for (std::size_t k = n; k-- > 0;) {
    if (es.values[k] - lowest > degenerate_tol) break;
    ++multiplicity;
    const ComplexVector v = es.vector(k);
    const Complex c = inner(v, current);
    for (std::size_t i = 0; i < n; ++i) proj[i] += c * v[i];
  }
  if (multiplicity > 1 && norm(proj) > 1e-8) return normalized(proj);
  return es.vector(n - 1);
}

/// ||P v||^2 for the composite vector of `s`; equals <v|P|v> for a projector.
inline double projector_value(const ComplexMatrix& p, const ProductVector& s) {
  const ComplexVector pv = matvec(p, s.composite());
  const double n = norm(pv);
  return n * n;
}

/// One seesaw run from `start`. `p` must be an orthogonal projector on the
/// composite space described by `dims`.
inline SeesawRun seesaw_minimize(const ComplexMatrix& p, const BipartiteDims& dims, ProductVector start,
                                 const SeesawOptions& options = {}) {
  if (p.rows() != dims.total() || p.cols() != dims.total()) {
    throw std::invalid_argument("seesaw_minimize: operator does not match the bipartite dimensions");
  }
  SeesawRun run{std::move(start), 0.0, 0};
  double value = projector_value(p, run.state);
  while (run.alternations < options.max_alternations) {
    run.state.psiA = lowest_eigenvector(contract_b(p, dims, run.state.phiB), run.state.psiA);
    run.state.phiB = lowest_eigenvector(contract_a(p, dims, run.state.psiA), run.state.phiB);
    ++run.alternations;
    const double next = projector_value(p, run.state);
    const double improvement = value - next;
    value = next;
    if (value <= options.floor) break;
    if (improvement <= options.tol + options.relative_tol * value) break;
  }
  run.value = value;
  return run;
}

}  // namespace bewitness
