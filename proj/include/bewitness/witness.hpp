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
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "bewitness/kernel/matrix.hpp"
#include "bewitness/kernel/svd.hpp"
#include "bewitness/product.hpp"
#include "bewitness/random.hpp"
#include "bewitness/states.hpp"
#include "bewitness/upb.hpp"

namespace bewitness {

/// Entanglement is claimed only when Tr(W rho) < -kDetectionMargin, since
/// lambda_hat over-estimates the true minimum overlap.
inline constexpr double kDetectionMargin = 1e-6;
inline constexpr double kSchmidtRankTol = 1e-10;
inline constexpr double kComplementTol = 1e-10;

struct SchmidtSpectrum {
  /// Nonincreasing; sum of squares is 1.
  RealVector coefficients;
  std::size_t rank = 0;

  /// |gamma|^2, the square of the largest coefficient.
  double gamma_sq() const { return coefficients.empty() ? 0.0 : coefficients.front() * coefficients.front(); }
};

/// Schmidt coefficients of a unit composite vector: the singular values of
/// its dA x dB coefficient matrix.
inline SchmidtSpectrum schmidt(std::span<const Complex> psi, const BipartiteDims& dims) {
  if (psi.size() != dims.total()) throw std::invalid_argument("schmidt: vector length does not match dims");
  const double n = norm(psi);
  if (std::abs(n - 1.0) > 1e-10) throw std::invalid_argument("schmidt: vector is not normalized (norm " + std::to_string(n) + ")");
  ComplexMatrix c(dims.dA, dims.dB, ComplexVector(psi.begin(), psi.end()));
  SchmidtSpectrum out;
  out.coefficients = singular_values(c);
  for (double x : out.coefficients)
    if (x > kSchmidtRankTol) ++out.rank;
  return out;
}

enum class WitnessFamily { basic, projector };

inline const char* to_string(WitnessFamily f) { return f == WitnessFamily::basic ? "basic" : "projector"; }

struct WitnessSpec {
  ComplexMatrix op;
  BipartiteDims dims;
  WitnessFamily family = WitnessFamily::basic;
  double lambda_hat = 0.0;
  double detection_threshold = 0.0;
  /// Projector family only.
  std::optional<ComplexVector> phi;
  std::optional<double> gamma_sq;
  /// Set when the witness is valid but weaker than the basic one.
  std::optional<std::string> warning;
};

/// W = P_S - lambda_hat I. Detects rho_G(omega) for omega < lambda_hat.
inline WitnessSpec basic_witness(const UpbSet& s, double lambda_hat) {
  if (!(lambda_hat > 0.0)) throw std::invalid_argument("basic_witness: lambda_hat must be positive");
  const std::size_t D = s.dims().total();
  WitnessSpec w;
  w.op = projector(s).matrix - ComplexMatrix::identity(D) * lambda_hat;
  w.dims = s.dims();
  w.family = WitnessFamily::basic;
  w.lambda_hat = lambda_hat;
  w.detection_threshold = lambda_hat;
  return w;
}

/// Maximally entangled vector sum_i |ii> projected onto the complement of S
/// and renormalized.
inline ComplexVector default_witness_phi(const UpbSet& s) {
  const BipartiteDims& dims = s.dims();
  const std::size_t k = std::min(dims.dA, dims.dB);
  ComplexVector v(dims.total());
  for (std::size_t i = 0; i < k; ++i) v[dims.index(i, i)] = 1.0;
  ComplexVector p = matvec(projector(s).complement().matrix, v);
  if (norm(p) < 1e-8) throw std::invalid_argument("default_witness_phi: maximally entangled vector is orthogonal to the complement");
  return normalized(p);
}

/// W = P_S - (lambda_hat / |gamma|^2) |phi><phi| for a unit phi in the
/// complement of S, with detection threshold lambda / (|gamma|^2 (D - n) + lambda).
inline WitnessSpec projector_witness(const UpbSet& s, double lambda_hat, std::span<const Complex> phi) {
  if (!(lambda_hat > 0.0)) throw std::invalid_argument("projector_witness: lambda_hat must be positive");
  const std::size_t D = s.dims().total();
  if (phi.size() != D) throw std::invalid_argument("projector_witness: phi length does not match D");
  const SubspaceProjector ps = projector(s);
  const double in_span = norm(matvec(ps.matrix, phi));
  if (in_span >= kComplementTol) {
    throw std::invalid_argument("projector_witness: phi is not in the complement of S (||P_S phi|| = " +
                                std::to_string(in_span) + ")");
  }
  const SchmidtSpectrum sp = schmidt(phi, s.dims());
  const double g2 = sp.gamma_sq();
  const double dn = static_cast<double>(D - s.size());

  WitnessSpec w;
  w.op = ps.matrix - outer(phi, phi) * (lambda_hat / g2);
  w.dims = s.dims();
  w.family = WitnessFamily::projector;
  w.lambda_hat = lambda_hat;
  w.detection_threshold = lambda_hat / (g2 * dn + lambda_hat);
  w.phi = ComplexVector(phi.begin(), phi.end());
  w.gamma_sq = g2;
  if (sp.rank < 2) w.warning = "phi is a product vector; the witness is weaker than the basic one";
  return w;
}

/// Tr(W rho)
inline double witness_value(const WitnessSpec& w, const DensityOperator& rho) {
  if (w.dims != rho.dims()) throw std::invalid_argument("witness_value: dimension mismatch");
  return trace_product(w.op, rho.matrix()).real();
}

inline bool is_detected(double witness_value, double margin = kDetectionMargin) { return witness_value < -margin; }

/// True iff the projector witness detects a strictly larger omega-interval
/// than the basic one: |gamma|^2 < (1 - lambda) / (D - n).
inline bool better_witness_condition(double gamma_sq, double lambda_hat, std::size_t D, std::size_t n) {
  if (n >= D) throw std::invalid_argument("better_witness_condition: need n < D");
  return gamma_sq < (1.0 - lambda_hat) / static_cast<double>(D - n);
}

/// min Tr(W sigma) over `samples` Haar-random product states sigma.
inline double min_on_random_product_states(const WitnessSpec& w, std::size_t samples, std::uint64_t seed = kDefaultSeed) {
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const ProductVector p = random_product_vector(rng, w.dims);
    best = std::min(best, expectation(w.op, p.composite()).real());
  }
  return best;
}

}  // namespace bewitness
