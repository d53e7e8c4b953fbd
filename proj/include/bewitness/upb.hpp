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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bewitness/kernel/matrix.hpp"
#include "bewitness/product.hpp"
#include "bewitness/random.hpp"
#include "bewitness/seesaw.hpp"

namespace bewitness {

inline constexpr double kUpbOrthogonalityTol = 1e-12;
inline constexpr double kRealTol = 1e-14;
inline constexpr double kProjectorOrthogonalityTol = 1e-10;
inline constexpr double kCertificateThreshold = 1e-6;

/// Ordered set of pairwise orthogonal product vectors on a bipartite space.
///
/// Holding a UpbSet means orthogonality, unit norms and n <= D were checked
/// at construction. Unextendibility is not implied; see
/// unextendibility_certificate().
class UpbSet {
 public:
  UpbSet(std::vector<ProductVector> members, BipartiteDims dims) : members_(std::move(members)), dims_(dims) {
    if (members_.size() > dims_.total()) {
      throw std::invalid_argument("UpbSet: " + std::to_string(members_.size()) + " members exceed D = " +
                                  std::to_string(dims_.total()));
    }
    composites_.reserve(members_.size());
    for (const auto& m : members_) {
      validate(m);
      if (m.dims() != dims_) throw std::invalid_argument("UpbSet: member dimensions do not match the set");
      composites_.push_back(m.composite());
    }
    for (std::size_t i = 0; i < composites_.size(); ++i)
      for (std::size_t j = i + 1; j < composites_.size(); ++j) {
        const double ov = std::abs(inner(composites_[i], composites_[j]));
        if (ov >= kUpbOrthogonalityTol) {
          throw std::invalid_argument("UpbSet: members " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                      " are not orthogonal (|<wi|wj>| = " + std::to_string(ov) + ")");
        }
      }
    is_real_ = max_imaginary_part() < kRealTol;
  }

  const std::vector<ProductVector>& members() const { return members_; }
  const ProductVector& member(std::size_t i) const { return members_.at(i); }
  /// Composite vector of member i, psiA (x) phiB.
  const ComplexVector& composite(std::size_t i) const { return composites_.at(i); }
  const std::vector<ComplexVector>& composites() const { return composites_; }
  const BipartiteDims& dims() const { return dims_; }
  std::size_t size() const { return members_.size(); }
  bool is_real() const { return is_real_; }

  /// Largest |Im| over all local coefficients in the standard basis.
  double max_imaginary_part() const {
    double out = 0.0;
    for (const auto& m : members_) {
      for (const auto& x : m.psiA) out = std::max(out, std::abs(x.imag()));
      for (const auto& x : m.phiB) out = std::max(out, std::abs(x.imag()));
    }
    return out;
  }

 private:
  std::vector<ProductVector> members_;
  std::vector<ComplexVector> composites_;
  BipartiteDims dims_;
  bool is_real_ = false;
};

/// Orthogonal projector onto a subspace of H_A (x) H_B.
struct SubspaceProjector {
  ComplexMatrix matrix;
  BipartiteDims dims;

  double trace() const { return bewitness::trace(matrix).real(); }
  SubspaceProjector complement() const {
    return {ComplexMatrix::identity(dims.total()) - matrix, dims};
  }
};

/// sum_k |v_k><v_k| for mutually orthogonal unit vectors. An empty list
/// gives the zero matrix.
inline SubspaceProjector projector(std::span<const ComplexVector> vs, const BipartiteDims& dims) {
  const std::size_t D = dims.total();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != D) throw std::invalid_argument("projector: vector length does not match D");
    if (std::abs(norm(vs[i]) - 1.0) > kProjectorOrthogonalityTol) {
      throw std::invalid_argument("projector: vector " + std::to_string(i + 1) + " is not normalized");
    }
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const double ov = std::abs(inner(vs[i], vs[j]));
      if (ov > kProjectorOrthogonalityTol) {
        throw std::invalid_argument("projector: vectors " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                    " are not orthogonal (overlap " + std::to_string(ov) + ")");
      }
    }
  }
  SubspaceProjector out{ComplexMatrix(D, D), dims};
  for (const auto& v : vs) out.matrix += outer(v, v);
  return out;
}

/// P_S for the whole set.
inline SubspaceProjector projector(const UpbSet& s) { return projector(s.composites(), s.dims()); }

/// Projector onto the span of the members with the given 0-based indices.
inline SubspaceProjector projector(const UpbSet& s, std::span<const std::size_t> indices) {
  std::vector<ComplexVector> vs;
  vs.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= s.size()) throw std::invalid_argument("projector: member index " + std::to_string(i) + " out of range");
    vs.push_back(s.composite(i));
  }
  return projector(vs, s.dims());
}

/// The five-member Tiles UPB of 3 (x) 3, in the usual order w1..w5.
inline UpbSet tiles_upb() {
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  auto vec = [](double a, double b, double c) { return ComplexVector{a, b, c}; };
  std::vector<ProductVector> m{
      {vec(0, 0, 1), vec(0, r2, -r2)},
      {vec(1, 0, 0), vec(r2, -r2, 0)},
      {vec(r2, -r2, 0), vec(0, 0, 1)},
      {vec(0, r2, -r2), vec(1, 0, 0)},
      {vec(r3, r3, r3), vec(r3, r3, r3)},
  };
  return UpbSet(std::move(m), BipartiteDims::square(3));
}

/// Real UPB of d (x) d with d^2 - 4 members: the Tiles UPB in the top-left
/// 3 (x) 3 block, then for k = 3..d-1 the states |0k>,...,|kk>,|k0>,...,|k,k-1>.
inline UpbSet padded_real_upb(std::size_t d) {
  if (d < 3) throw std::invalid_argument("padded_real_upb: local dimension must be at least 3, got " + std::to_string(d));
  const UpbSet tiles = tiles_upb();
  std::vector<ProductVector> m;
  m.reserve(d * d - 4);
  for (const auto& t : tiles.members()) {
    ProductVector p{ComplexVector(d), ComplexVector(d)};
    std::copy(t.psiA.begin(), t.psiA.end(), p.psiA.begin());
    std::copy(t.phiB.begin(), t.phiB.end(), p.phiB.begin());
    m.push_back(std::move(p));
  }
  for (std::size_t k = 3; k < d; ++k) {
    for (std::size_t i = 0; i <= k; ++i) m.push_back({basis_vector(d, i), basis_vector(d, k)});
    for (std::size_t j = 0; j < k; ++j) m.push_back({basis_vector(d, k), basis_vector(d, j)});
  }
  return UpbSet(std::move(m), BipartiteDims::square(d));
}

struct OverlapOptions {
  std::size_t starts = 200;
  double tol = 1e-12;
  std::size_t max_alternations = 500;
  std::uint64_t seed = kDefaultSeed;
};

struct OverlapResult {
  double value = 0.0;
  ProductVector argmin;
  std::size_t best_start = 0;
};

/// Smallest <a b|P|a b> found by multi-start seesaw over product states.
///
/// This is an upper bound on the true minimum. Starting points are drawn in
/// sequence from Rng(seed), so a run with more starts extends a run with
/// fewer and the result is a running minimum; ties keep the earliest start.
inline OverlapResult min_product_overlap(const SubspaceProjector& p, const OverlapOptions& options = {}) {
  if (options.starts == 0) throw std::invalid_argument("min_product_overlap: starts must be positive");
  Rng rng(options.seed);
  SeesawOptions so;
  so.tol = options.tol;
  so.max_alternations = options.max_alternations;
  OverlapResult best;
  bool have = false;
  for (std::size_t s = 0; s < options.starts; ++s) {
    const SeesawRun run = seesaw_minimize(p.matrix, p.dims, random_product_vector(rng, p.dims), so);
    if (!have || run.value < best.value) {
      best = {run.value, canonical(run.state), s};
      have = true;
    }
  }
  return best;
}

struct UnextendibilityCertificate {
  /// lambda_hat > threshold. Numerical evidence only: the seesaw gives an
  /// upper bound on the minimum product-state overlap, not a proof.
  bool is_upb_evidence = false;
  double lambda_hat = 0.0;
  double threshold = kCertificateThreshold;
  ProductVector argmin;
};

inline UnextendibilityCertificate unextendibility_certificate(const UpbSet& s, const OverlapOptions& options = {},
                                                              double threshold = kCertificateThreshold) {
  const OverlapResult r = min_product_overlap(projector(s), options);
  return {r.value > threshold, r.value, threshold, r.argmin};
}

}  // namespace bewitness
