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
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bewitness/kernel/matrix.hpp"
#include "bewitness/kernel/nnls.hpp"
#include "bewitness/kernel/range.hpp"
#include "bewitness/product.hpp"
#include "bewitness/random.hpp"
#include "bewitness/seesaw.hpp"
#include "bewitness/states.hpp"
#include "bewitness/upb.hpp"

namespace bewitness {

/// Five mutually orthogonal product states spanning the support of
/// rho_1(omega) together with w1 (3 (x) 3). Together with w1 these are the
/// only product states in that support.
inline std::vector<ProductVector> eta_basis_3x3() {
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  const double r6 = 1.0 / std::sqrt(6.0);
  auto vec = [](double a, double b, double c) { return ComplexVector{a, b, c}; };
  std::vector<ProductVector> eta{
      {vec(0, r2, -r2), vec(0, 1, 0)},
      {vec(0, r2, r2), vec(r2, -r2, 0)},
      {vec(2 * r6, -r6, -r6), vec(r2, r2, 0)},
      {vec(r3, r3, r3), vec(r6, r6, -2 * r6)},
      {vec(r6, r6, -2 * r6), vec(0, 0, 1)},
  };
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = i; j < eta.size(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(std::abs(inner(eta[i].composite(), eta[j].composite())) - expected) > 1e-12) {
        throw std::logic_error("eta_basis_3x3: basis is not orthonormal");
      }
    }
  return eta;
}

struct ProductStateFindings {
  double projector_trace = 0.0;
  /// Distinct product states found inside the subspace, canonical phases,
  /// ordered by decreasing fidelity then by discovery order.
  std::vector<ProductVector> states;
  /// <s|P|s> for each state.
  RealVector fidelities;

  std::size_t cluster_count() const { return states.size(); }
};

struct SearchOptions {
  std::size_t starts = 2000;
  std::size_t max_alternations = 2000;
  std::uint64_t seed = kDefaultSeed;
  /// Accept a converged point when 1 - <s|P|s> is at most this.
  double fidelity_tol = 1e-9;
  /// Two states are the same cluster when |<s|t>| >= 1 - cluster_tol.
  double cluster_tol = 1e-6;
};

/// Product states lying in the range of a projector, by multi-start seesaw.
///
/// Each start maximizes <s|P|s> by minimizing <s|(I - P)|s>; the complement
/// form keeps the small residual ||(I - P) s|| at full relative precision.
/// Points with fidelity within fidelity_tol of 1 are clustered by
/// phase-invariant overlap. The count is what the search found; it cannot
/// prove that no other product states exist.
inline ProductStateFindings find_product_states(const SubspaceProjector& p, const SearchOptions& options = {}) {
  const double tr = p.trace();
  const double D = static_cast<double>(p.dims.total());
  if (tr > D - 0.5) throw std::invalid_argument("find_product_states: projector is the identity, every product state lies in it");
  if (options.starts == 0) throw std::invalid_argument("find_product_states: starts must be positive");

  const SubspaceProjector q = p.complement();
  SeesawOptions so;
  so.max_alternations = options.max_alternations;
  so.tol = 0.0;
  so.relative_tol = 1e-6;
  so.floor = 1e-28;

  struct Hit {
    ProductVector state;
    double deficit;
    std::size_t start;
  };
  std::vector<Hit> hits;
  Rng rng(options.seed);
  for (std::size_t s = 0; s < options.starts; ++s) {
    const SeesawRun run = seesaw_minimize(q.matrix, q.dims, random_product_vector(rng, q.dims), so);
    if (run.value <= options.fidelity_tol) hits.push_back({canonical(run.state), run.value, s});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.deficit != b.deficit ? a.deficit < b.deficit : a.start < b.start;
  });

  ProductStateFindings out;
  out.projector_trace = tr;
  for (const Hit& h : hits) {
    const bool seen = std::any_of(out.states.begin(), out.states.end(), [&](const ProductVector& rep) {
      return composite_overlap(rep, h.state) >= 1.0 - options.cluster_tol;
    });
    if (seen) continue;
    out.states.push_back(h.state);
    out.fidelities.push_back(1.0 - h.deficit);
  }
  return out;
}

/// Greedy selection of linearly independent candidates, in order. The result
/// spans the same space as the input.
inline std::vector<ProductVector> spanning_subset(std::span<const ProductVector> candidates, double independence_tol = 1e-6) {
  std::vector<ProductVector> out;
  std::vector<ComplexVector> ortho;
  for (const auto& c : candidates) {
    ComplexVector v = c.composite();
    for (const auto& b : ortho) {
      const Complex k = inner(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= k * b[i];
    }
    const double n = norm(v);
    if (n <= independence_tol) continue;
    for (auto& x : v) x /= n;
    ortho.push_back(std::move(v));
    out.push_back(c);
  }
  return out;
}

inline constexpr double kRangeMembershipTol = 1e-9;

struct RcVerdict {
  bool passed = false;
  std::size_t range_dim = 0;
  std::size_t product_span_rank = 0;
  std::size_t pt_range_dim = 0;
  std::size_t conjugated_span_rank = 0;
  /// max over candidates of ||(I - Pi) v|| against range(rho) and, for the
  /// partially conjugated vectors, against range(rho^{T_B}).
  double max_range_distance = 0.0;
  double max_pt_range_distance = 0.0;
};

/// Range criterion for a given family of product vectors psi (x) phi:
/// they lie in and span range(rho), and the vectors psi (x) conj(phi) lie in
/// and span range(rho^{T_B}). An empty family fails unless rho is zero.
inline RcVerdict range_criterion_check(const DensityOperator& rho, std::span<const ProductVector> candidates,
                                       double rank_tol = kDefaultRankTol) {
  const BipartiteDims& dims = rho.dims();
  for (const auto& c : candidates)
    if (c.dims() != dims) throw std::invalid_argument("range_criterion_check: candidate dimensions do not match the state");

  const SubspaceBasis range = orthonormal_range(rho.matrix(), dims, rank_tol);
  const SubspaceBasis pt_range = orthonormal_range(partial_transpose(rho.matrix(), dims), dims, rank_tol);

  std::vector<ComplexVector> plain;
  std::vector<ComplexVector> conjugated;
  for (const auto& c : candidates) {
    plain.push_back(c.composite());
    conjugated.push_back(c.conjugated_composite());
  }

  RcVerdict v;
  v.range_dim = range.size();
  v.pt_range_dim = pt_range.size();
  v.product_span_rank = span_rank(plain, dims.total(), rank_tol);
  v.conjugated_span_rank = span_rank(conjugated, dims.total(), rank_tol);
  for (const auto& x : plain) v.max_range_distance = std::max(v.max_range_distance, range.distance(x));
  for (const auto& x : conjugated) v.max_pt_range_distance = std::max(v.max_pt_range_distance, pt_range.distance(x));

  v.passed = v.product_span_rank == v.range_dim && v.conjugated_span_rank == v.pt_range_dim &&
             v.max_range_distance < kRangeMembershipTol && v.max_pt_range_distance < kRangeMembershipTol;
  return v;
}

/// Isometric real coordinates of a Hermitian D x D matrix: the diagonal,
/// then sqrt(2) Re and sqrt(2) Im of the strict upper triangle. Euclidean
/// distances of images equal Frobenius distances of matrices.
inline RealVector hermitian_vec(const ComplexMatrix& m) {
  const std::size_t D = m.rows();
  RealVector out;
  out.reserve(D * D);
  for (std::size_t i = 0; i < D; ++i) out.push_back(m(i, i).real());
  const double s = std::sqrt(2.0);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = i + 1; j < D; ++j) out.push_back(s * m(i, j).real());
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = i + 1; j < D; ++j) out.push_back(s * m(i, j).imag());
  return out;
}

enum class Feasibility { feasible, infeasible, inconclusive };

inline const char* to_string(Feasibility f) {
  switch (f) {
    case Feasibility::feasible: return "feasible";
    case Feasibility::infeasible: return "infeasible";
    default: return "inconclusive";
  }
}

inline constexpr double kFeasibleResidualTol = 1e-8;
inline constexpr double kInfeasibleResidualTol = 1e-4;
inline constexpr double kWeightSumTol = 1e-8;

struct ConvexDecomposition {
  Feasibility verdict = Feasibility::inconclusive;
  bool feasible = false;
  RealVector weights;
  double residual = 0.0;
  double weight_sum = 0.0;
  bool converged = true;
};

/// Best nonnegative combination sum_i x_i |s_i><s_i| of the pool states
/// approximating rho in Frobenius norm.
///
/// Feasible when the residual is below residual_tol and the weights sum to 1
/// within kWeightSumTol; infeasible when the residual exceeds
/// infeasible_tol; anything in between is reported inconclusive. An empty
/// pool is infeasible with residual ||rho||_F.
inline ConvexDecomposition convex_decomposition_feasibility(const DensityOperator& rho,
                                                            std::span<const ProductVector> pool,
                                                            double residual_tol = kFeasibleResidualTol,
                                                            double infeasible_tol = kInfeasibleResidualTol) {
  const RealVector target = hermitian_vec(rho.matrix());
  ConvexDecomposition out;
  if (pool.empty()) {
    double acc = 0.0;
    for (double x : target) acc += x * x;
    out.residual = std::sqrt(acc);
  } else {
    RealMatrix a(target.size(), pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (pool[k].dims() != rho.dims()) throw std::invalid_argument("convex_decomposition_feasibility: pool state dimensions do not match");
      const ComplexVector v = pool[k].composite();
      const RealVector col = hermitian_vec(outer(v, v));
      for (std::size_t r = 0; r < col.size(); ++r) a(r, k) = col[r];
    }
    const NnlsResult r = nnls(a, target);
    out.weights = r.x;
    out.residual = r.residual;
    out.converged = r.converged;
    out.weight_sum = std::accumulate(r.x.begin(), r.x.end(), 0.0);
  }
  out.feasible = out.residual < residual_tol && std::abs(out.weight_sum - 1.0) < kWeightSumTol;
  if (out.feasible) {
    out.verdict = Feasibility::feasible;
  } else if (out.residual > infeasible_tol) {
    out.verdict = Feasibility::infeasible;
  } else {
    out.verdict = Feasibility::inconclusive;
  }
  return out;
}

}  // namespace bewitness
