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

#include <cmath>

#include "gtest/gtest.h"

#include "bewitness/bewitness.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bewitness;

namespace {

ComplexMatrix gram(const UpbSet& s) {
  ComplexMatrix g(s.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) g(i, j) = inner(s.composite(i), s.composite(j));
  return g;
}

}  // namespace

TEST(tiles_upb, members_in_order) {
  const UpbSet t = tiles_upb();
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.dims(), BipartiteDims::square(3));
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  EXPECT_EQ(t.member(0).psiA, basis_vector(3, 2));
  EXPECT_EQ(t.member(0).phiB, (ComplexVector{0, r2, -r2}));
  EXPECT_EQ(t.member(4).psiA, (ComplexVector{r3, r3, r3}));
  EXPECT_EQ(t.member(4).phiB, (ComplexVector{r3, r3, r3}));
}

TEST(tiles_upb, gram_is_identity) {
  EXPECT_LT(max_abs_diff(gram(tiles_upb()), ComplexMatrix::identity(5)), 1e-15);
}

TEST(padded_real_upb, cardinality_and_orthonormality) {
  for (std::size_t d = 3; d <= 6; ++d) {
    const UpbSet s = padded_real_upb(d);
    EXPECT_EQ(s.size(), d * d - 4) << "d = " << d;
    EXPECT_LT(max_abs_diff(gram(s), ComplexMatrix::identity(s.size())), 1e-12);
    EXPECT_TRUE(s.is_real());
    EXPECT_LT(s.max_imaginary_part(), 1e-14);
  }
}

TEST(padded_real_upb, three_is_tiles) {
  const UpbSet p = padded_real_upb(3);
  const UpbSet t = tiles_upb();
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(p.member(i), t.member(i));
}

TEST(padded_real_upb, four_padding_list) {
  const UpbSet p = padded_real_upb(4);
  const std::pair<std::size_t, std::size_t> expected[] = {{0, 3}, {1, 3}, {2, 3}, {3, 3}, {3, 0}, {3, 1}, {3, 2}};
  for (std::size_t k = 0; k < 7; ++k) {
    EXPECT_EQ(p.member(5 + k).psiA, basis_vector(4, expected[k].first));
    EXPECT_EQ(p.member(5 + k).phiB, basis_vector(4, expected[k].second));
  }
  // Tiles members sit in the top-left block.
  EXPECT_EQ(p.member(0).psiA, basis_vector(4, 2));
  EXPECT_EQ(p.member(0).phiB[3], Complex(0.0));
}

TEST(padded_real_upb, rejects_small_dimension) {
  EXPECT_THROW(padded_real_upb(2), std::invalid_argument);
}

TEST(upb_set, rejects_non_orthogonal_and_oversized) {
  const BipartiteDims dims(2, 2);
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<ProductVector> bad{{basis_vector(2, 0), basis_vector(2, 0)}, {ComplexVector{r2, r2}, basis_vector(2, 0)}};
  EXPECT_THROW(UpbSet(bad, dims), std::invalid_argument);
  std::vector<ProductVector> unnormalized{{ComplexVector{1, 1}, basis_vector(2, 0)}};
  EXPECT_THROW(UpbSet(unnormalized, dims), std::invalid_argument);
  std::vector<ProductVector> many;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) many.push_back({basis_vector(2, i), basis_vector(2, j)});
  many.push_back(many.front());
  EXPECT_THROW(UpbSet(many, dims), std::invalid_argument);
}

TEST(upb_set, complex_members_are_not_real) {
  const double r2 = 1.0 / std::sqrt(2.0);
  const UpbSet s({{ComplexVector{r2, Complex(0, r2)}, basis_vector(2, 0)}}, BipartiteDims(2, 2));
  EXPECT_FALSE(s.is_real());
}

TEST(projector, traces_idempotence_and_errors) {
  const UpbSet t = tiles_upb();
  const SubspaceProjector p = projector(t);
  EXPECT_NEAR(p.trace(), 5.0, 1e-12);
  EXPECT_LT(max_abs_diff(matmul(p.matrix, p.matrix), p.matrix), 1e-10);
  EXPECT_EQ(hermitian_defect(p.matrix), 0.0);
  const SubspaceProjector q = p.complement();
  EXPECT_NEAR(q.trace(), 4.0, 1e-12);
  EXPECT_LT(max_abs_diff(matmul(q.matrix, q.matrix), q.matrix), 1e-10);

  EXPECT_EQ(projector(std::vector<ComplexVector>{}, t.dims()).matrix, ComplexMatrix::zeros(9));
  const std::vector<ComplexVector> skew{basis_vector(9, 0), normalized(ComplexVector{1, 1, 0, 0, 0, 0, 0, 0, 0})};
  EXPECT_THROW(projector(skew, t.dims()), std::invalid_argument);
  const std::size_t out_of_range[] = {5};
  EXPECT_THROW(projector(t, out_of_range), std::invalid_argument);
}

TEST(min_product_overlap, identity_gives_one) {
  const BipartiteDims dims(2, 3);
  OverlapOptions o;
  o.starts = 5;
  EXPECT_NEAR(min_product_overlap({ComplexMatrix::identity(6), dims}, o).value, 1.0, 1e-12);
}

TEST(min_product_overlap, extendible_projector_reaches_zero) {
  const BipartiteDims dims(2, 2);
  const ComplexVector v = basis_vector(4, 0);
  OverlapOptions o;
  o.starts = 10;
  const OverlapResult r = min_product_overlap({outer(v, v), dims}, o);
  EXPECT_LT(r.value, 1e-14);
  EXPECT_LT(projector_value(outer(v, v), r.argmin), 1e-14);
}

TEST(min_product_overlap, rejects_zero_starts) {
  OverlapOptions o;
  o.starts = 0;
  EXPECT_THROW(min_product_overlap(projector(tiles_upb()), o), std::invalid_argument);
}

TEST(min_product_overlap, tiles_golden_value_and_complement_identity) {
  const SubspaceProjector p = projector(tiles_upb());
  const OverlapResult r = min_product_overlap(p);
  EXPECT_NEAR(r.value, support::kTilesLambda, 1e-9);
  EXPECT_NEAR(projector_value(p.matrix, r.argmin), r.value, 1e-14);
  EXPECT_NEAR(projector_value(p.complement().matrix, r.argmin) + r.value, 1.0, 1e-12);
}

TEST(min_product_overlap, running_minimum_in_starts) {
  const SubspaceProjector p = projector(padded_real_upb(4));
  double previous = 2.0;
  for (std::size_t starts : {1, 2, 5, 20, 60}) {
    OverlapOptions o;
    o.starts = starts;
    o.seed = 123;
    const double v = min_product_overlap(p, o).value;
    EXPECT_LE(v, previous) << "starts = " << starts;
    previous = v;
  }
}

TEST(min_product_overlap, stable_across_seeds) {
  const SubspaceProjector p = projector(tiles_upb());
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    OverlapOptions o;
    o.seed = seed;
    EXPECT_NEAR(min_product_overlap(p, o).value, support::kTilesLambda, 1e-6) << "seed " << seed;
  }
}

TEST(min_product_overlap, agrees_with_real_grid) {
  const SubspaceProjector p = projector(tiles_upb());
  const double grid = oracle::real_grid_min_overlap_3x3(p.matrix);
  EXPECT_GE(grid, support::kTilesLambda - 1e-12);
  EXPECT_NEAR(grid, support::kTilesLambda, 1e-4);
}

TEST(unextendibility_certificate, tiles_and_padded_are_upbs) {
  const UnextendibilityCertificate t = unextendibility_certificate(tiles_upb());
  EXPECT_TRUE(t.is_upb_evidence);
  EXPECT_GT(t.lambda_hat, 1e-3);
  const UnextendibilityCertificate p = unextendibility_certificate(padded_real_upb(4));
  EXPECT_TRUE(p.is_upb_evidence);
  EXPECT_GT(p.lambda_hat, 1e-3);
}

TEST(unextendibility_certificate, extendible_set) {
  const UpbSet s({{basis_vector(2, 0), basis_vector(2, 0)}, {basis_vector(2, 0), basis_vector(2, 1)}}, BipartiteDims(2, 2));
  const UnextendibilityCertificate c = unextendibility_certificate(s);
  EXPECT_FALSE(c.is_upb_evidence);
  EXPECT_LT(c.lambda_hat, 1e-14);
  EXPECT_NEAR(std::abs(c.argmin.psiA[1]), 1.0, 1e-7);
}
