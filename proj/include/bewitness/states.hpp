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
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bewitness/kernel/eig.hpp"
#include "bewitness/kernel/matrix.hpp"
#include "bewitness/kernel/range.hpp"
#include "bewitness/upb.hpp"

namespace bewitness {

inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kPptTol = 1e-10;

/// Hermitian, unit-trace, positive semidefinite operator on H_A (x) H_B.
class DensityOperator {
 public:
  DensityOperator(ComplexMatrix matrix, BipartiteDims dims) : matrix_(std::move(matrix)), dims_(dims) {
    const std::size_t D = dims_.total();
    if (matrix_.rows() != D || matrix_.cols() != D) {
      throw std::invalid_argument("DensityOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                                  std::to_string(matrix_.cols()) + ", dims require " + std::to_string(D));
    }
    const double defect = hermitian_defect(matrix_);
    if (defect > kHermitianTol) {
      throw std::invalid_argument("DensityOperator: not Hermitian, max|M - M^dag| = " + std::to_string(defect));
    }
    const double tr = trace(matrix_).real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw std::invalid_argument("DensityOperator: trace " + std::to_string(tr) + " differs from 1");
    }
    const double lowest = hermitian_eig(matrix_).values.back();
    if (lowest < -kPsdTol) {
      throw std::invalid_argument("DensityOperator: negative eigenvalue " + std::to_string(lowest));
    }
  }

  static DensityOperator maximally_mixed(const BipartiteDims& dims) {
    return {ComplexMatrix::identity(dims.total()) * (1.0 / static_cast<double>(dims.total())), dims};
  }
  static DensityOperator pure(std::span<const Complex> psi, const BipartiteDims& dims) {
    const ComplexVector v = normalized(psi);
    return {outer(v, v), dims};
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const BipartiteDims& dims() const { return dims_; }

 private:
  ComplexMatrix matrix_;
  BipartiteDims dims_;
};

/// (I - P_S) / (D - n): the normalized projector onto the complement of S.
inline DensityOperator rho_be(const UpbSet& s) {
  const std::size_t D = s.dims().total();
  if (s.size() >= D) throw std::invalid_argument("rho_be: set spans the whole space, complement is empty");
  ComplexMatrix m = projector(s).complement().matrix;
  m *= 1.0 / static_cast<double>(D - s.size());
  return {std::move(m), s.dims()};
}

/// (omega / |G|) P_G + ((1 - omega) / (D - n)) (I - P_S), with G given as
/// 0-based member indices. G = {i} is the single-member family.
inline DensityOperator rho_g(const UpbSet& s, std::span<const std::size_t> group, double omega) {
  if (group.empty()) throw std::invalid_argument("rho_g: G must be nonempty");
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::invalid_argument("rho_g: omega must lie in [0, 1], got " + std::to_string(omega));
  }
  const std::set<std::size_t> unique(group.begin(), group.end());
  if (unique.size() != group.size()) throw std::invalid_argument("rho_g: G contains repeated indices");
  const std::size_t D = s.dims().total();
  if (s.size() >= D) throw std::invalid_argument("rho_g: set spans the whole space, complement is empty");

  ComplexMatrix m = projector(s, group).matrix * (omega / static_cast<double>(group.size()));
  m += projector(s).complement().matrix * ((1.0 - omega) / static_cast<double>(D - s.size()));
  return {std::move(m), s.dims()};
}

struct PptReport {
  double min_pt_eigenvalue = 0.0;
  bool is_ppt = false;
  /// Spectrum of rho^{T_B}, descending.
  RealVector spectrum;
};

inline PptReport ppt_report(const DensityOperator& rho, double ppt_tol = kPptTol) {
  const EigenSystem es = hermitian_eig(partial_transpose(rho.matrix(), rho.dims()));
  PptReport r;
  r.spectrum = es.values;
  r.min_pt_eigenvalue = es.values.back();
  r.is_ppt = r.min_pt_eigenvalue >= -ppt_tol;
  return r;
}

struct SpectrumAndRank {
  RealVector spectrum;
  std::size_t rank = 0;
};

inline SpectrumAndRank spectrum_and_rank(const DensityOperator& rho, double rank_tol = kDefaultRankTol) {
  SpectrumAndRank out;
  out.spectrum = hermitian_eig(rho.matrix()).values;
  out.rank = numerical_rank(out.spectrum, rank_tol);
  return out;
}

}  // namespace bewitness
