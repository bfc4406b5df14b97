// Copyright 2026 The sparsefx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/omp.hpp"

namespace sparsefx::omp {
namespace {

using testing::random_gaussian;
using testing::random_unit_columns;

TEST(Omp, IdentityDictionaryRecoversCoordinates) {
  const DenseMatrix d = DenseMatrix::Identity(6, 6);
  Vector y(6);
  y << 0, 2.5, 0, -1, 0, 0.5;
  const SparseCode c = encode(d, y, 6);
  EXPECT_EQ(c.support, (std::vector<Index>{1, 3, 5}));
  EXPECT_DOUBLE_EQ(c.coeffs[0], 2.5);
  EXPECT_DOUBLE_EQ(c.coeffs[1], -1.0);
  EXPECT_DOUBLE_EQ(c.coeffs[2], 0.5);
  EXPECT_EQ(c.residual_norm, 0.0);
  EXPECT_EQ(c.dense(), y);
}

TEST(Omp, SingleScaledAtom) {
  Rng rng(1);
  const DenseMatrix d = random_unit_columns(10, 20, rng);
  const SparseCode c = encode(d, 3.0 * d.col(5), 1);
  ASSERT_EQ(c.support, std::vector<Index>{5});
  EXPECT_NEAR(c.coeffs[0], 3.0, 1e-12);
  EXPECT_NEAR(c.residual_norm, 0.0, 1e-12);
}

TEST(Omp, ZeroSignalGivesEmptyCode) {
  const DenseMatrix d = DenseMatrix::Identity(3, 3);
  const SparseCode c = encode(d, Vector::Zero(3), 2);
  EXPECT_TRUE(c.support.empty());
  EXPECT_EQ(c.residual_norm, 0.0);
}

TEST(Omp, TiesGoToLowestIndex) {
  DenseMatrix d = DenseMatrix::Identity(2, 2);
  const SparseCode c = encode(d, Vector::Ones(2), 1);
  EXPECT_EQ(c.support, std::vector<Index>{0});
}

TEST(Omp, ResidualToleranceStopsEarly) {
  const DenseMatrix d = DenseMatrix::Identity(4, 4);
  Vector y(4);
  y << 4, 2, 0.01, 0;
  EXPECT_EQ(encode(d, y, 4, 0.1).support, (std::vector<Index>{0, 1}));
}

TEST(Omp, TwoSparseMatchesBruteForce) {
  Rng rng(11);
  const DenseMatrix frame = testing::low_coherence_frame(8, 16, rng);
  ASSERT_LT(testing::mutual_coherence(frame), 1.0 / 3.0);
  for (int t = 0; t < 30; ++t) {
    const DenseMatrix d = testing::scramble_frame(frame, rng);
    const Index i = static_cast<Index>(rng.below(16));
    Index j = static_cast<Index>(rng.below(15));
    if (j >= i) ++j;
    const double a = (rng.below(2) ? 1 : -1) * rng.uniform(0.5, 2.0);
    const double b = (rng.below(2) ? 1 : -1) * rng.uniform(0.5, 2.0);
    const Vector y = a * d.col(i) + b * d.col(j);
    const auto exact = testing::exact_supports(d, y, 2);
    ASSERT_EQ(exact.size(), 1u);
    const SparseCode c = encode(d, y, 2);
    EXPECT_EQ(c.support, exact[0]);
    EXPECT_LT(c.residual_norm, 1e-10);
  }
}

TEST(Omp, NearDuplicateAtomsFallBackToMinimumNorm) {
  const double t = 1e-11;
  DenseMatrix d(2, 2);
  d << 1, std::cos(t),
       0, std::sin(t);
  Vector y(2);
  y << 1, 1e-3;
  const SparseCode c = encode(d, y, 2);
  EXPECT_TRUE(c.rank_deficient);
  for (double v : c.coeffs) EXPECT_TRUE(std::isfinite(v));
  for (double v : c.coeffs) EXPECT_LT(std::abs(v), 10.0);
  EXPECT_NEAR(c.residual_norm, 1e-3, 1e-6);
}

TEST(Omp, Errors) {
  Rng rng(2);
  DenseMatrix d = random_unit_columns(5, 8, rng);
  EXPECT_THROW(encode(d, Vector::Ones(4), 2), DimensionError);
  EXPECT_THROW(encode(d, Vector::Ones(5), 0), ConfigError);
  EXPECT_THROW(encode(d, Vector::Ones(5), 6), ConfigError);
  d.col(3) *= 1.1;
  try {
    encode(d, Vector::Ones(5), 2);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
}

TEST(OmpProperty, ResidualOrthogonalToSelectedAtoms) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Index n = 10 + static_cast<Index>(rng.below(30));
    const Index k = n + static_cast<Index>(rng.below(40));
    const DenseMatrix d = random_unit_columns(n, k, rng);
    const Vector y = random_gaussian(n, 1, rng);
    const Index l = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    const SparseCode c = encode(d, y, l);
    const Vector r = y - d * c.dense();
    EXPECT_NEAR(r.norm(), c.residual_norm, 1e-10);
    for (Index j : c.support) {
      EXPECT_LT(std::abs(d.col(j).dot(r)), 1e-8 * std::max(1.0, y.norm()));
    }
    EXPECT_LE(static_cast<Index>(c.support.size()), l);
    EXPECT_TRUE(std::is_sorted(c.support.begin(), c.support.end()));
    EXPECT_EQ(std::set<Index>(c.support.begin(), c.support.end()).size(),
              c.support.size());
  }
}

TEST(OmpProperty, ResidualNonIncreasingInSparsity) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix d = random_unit_columns(30, 60, rng);
    const Vector y = random_gaussian(30, 1, rng);
    double prev = y.norm();
    for (Index l = 1; l <= 30; ++l) {
      const double cur = encode(d, y, l).residual_norm;
      EXPECT_LE(cur, prev + 1e-12);
      prev = cur;
    }
    EXPECT_LT(prev, 1e-9);
  }
}

TEST(Batch, MatchesPerColumnAndThreadCount) {
  Rng rng(5);
  const DenseMatrix d = random_unit_columns(20, 40, rng);
  const DenseMatrix y = random_gaussian(20, 25, rng);
  std::vector<SparseCode> codes;
  const DenseMatrix x1 = batch_encode(d, y, 5, 0.0, 1, &codes);
  const DenseMatrix x3 = batch_encode(d, y, 5, 0.0, 3);
  EXPECT_EQ(x1, x3);
  ASSERT_EQ(codes.size(), 25u);
  for (Index i = 0; i < 25; ++i) {
    const SparseCode c = encode(d, y.col(i), 5);
    EXPECT_EQ(c.support, codes[i].support);
    EXPECT_EQ(x1.col(i), c.dense());
  }
}

TEST(Batch, AtomsAsSignals) {
  Rng rng(6);
  const DenseMatrix d = random_unit_columns(8, 12, rng);
  const DenseMatrix x = batch_encode(d, d.leftCols(3), 1);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(x(i, i), 1.0, 1e-12);
    EXPECT_EQ((x.col(i).array() != 0.0).count(), 1);
  }
}

TEST(Batch, LargeDictionaryRespectsSparsity) {
  Rng rng(7);
  const DenseMatrix d = random_unit_columns(700, 143, rng);
  const DenseMatrix y = random_gaussian(700, 40, rng);
  const DenseMatrix x = batch_encode(d, y, 21);
  ASSERT_EQ(x.rows(), 143);
  for (Index i = 0; i < x.cols(); ++i) {
    EXPECT_LE((x.col(i).array() != 0.0).count(), 21);
  }
}

TEST(Reconstruction, ErrorsAgreeWithDirectSum) {
  Rng rng(8);
  const DenseMatrix d = random_unit_columns(15, 30, rng);
  const DenseMatrix y = random_gaussian(15, 12, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (Index l = 1; l <= 10; l += 3) {
    const DenseMatrix x = batch_encode(d, y, l);
    const ReconstructionErrors e = reconstruction_errors(d, y, x);
    EXPECT_NEAR(e.total * e.total, testing::sum_squared_residual(d, y, x), 1e-10);
    EXPECT_NEAR(e.per_sample.squaredNorm(), e.total * e.total, 1e-10);
    EXPECT_LE(e.total, prev + 1e-12);
    prev = e.total;
  }
  const ReconstructionErrors zero =
      reconstruction_errors(d, y, DenseMatrix::Zero(30, 12));
  EXPECT_NEAR(zero.total, y.norm(), 1e-12);
  EXPECT_THROW(reconstruction_errors(d, y, DenseMatrix::Zero(29, 12)),
               DimensionError);
}

}  // namespace
}  // namespace sparsefx::omp
