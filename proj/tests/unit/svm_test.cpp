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
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/svm.hpp"
#include "sparsefx/synth.hpp"

namespace sparsefx::svm {
namespace {

using testing::random_gaussian;

// Two Gaussian clouds in dim dimensions, centred at +/- offset * e_1.
void clouds(Index dim, Index per_class, double offset, Rng& rng, DenseMatrix& x,
            std::vector<int>& labels) {
  x = 0.5 * random_gaussian(dim, 2 * per_class, rng);
  labels.assign(static_cast<std::size_t>(2 * per_class), 0);
  for (Index i = 0; i < 2 * per_class; ++i) {
    const bool pos = i % 2 == 0;
    x(0, i) += pos ? offset : -offset;
    labels[i] = pos ? 0 : 1;
  }
}

std::vector<int> signs(const std::vector<int>& labels) {
  std::vector<int> y;
  for (int l : labels) y.push_back(l == 0 ? 1 : -1);
  return y;
}

TEST(Binary, OneDimensionalBoundaryAtZero) {
  DenseMatrix x(1, 2);
  x << -1, 1;
  const std::vector<int> y = {-1, 1};
  const BinarySolution s = train_binary(x, y, 1000.0);
  ASSERT_GT(s.w(0), 0.0);
  EXPECT_NEAR(-s.b / s.w(0), 0.0, 1e-6);
  EXPECT_NEAR(s.w(0), 1.0, 1e-6);
  EXPECT_TRUE(s.converged);
}

TEST(Binary, SingleLabelGivesConstantClassifier) {
  const DenseMatrix x = DenseMatrix::Ones(2, 3);
  const BinarySolution pos = train_binary(x, std::vector<int>{1, 1, 1}, 1.0);
  EXPECT_TRUE(pos.w.isZero(0.0));
  EXPECT_EQ(pos.b, 1.0);
  const BinarySolution neg = train_binary(x, std::vector<int>{-1, -1, -1}, 1.0);
  EXPECT_EQ(neg.b, -1.0);
}

TEST(Binary, PrimalMatchesGridOracle) {
  Rng rng(1);
  for (int t = 0; t < 6; ++t) {
    const Index n = 4 + static_cast<Index>(rng.below(4));
    const DenseMatrix x = random_gaussian(2, n, rng);
    std::vector<int> y(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) y[i] = (x(0, i) + 0.8 * rng.normal() > 0) ? 1 : -1;
    y[0] = 1;
    y[1] = -1;
    const double c = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const BinarySolution s = train_binary(x, y, c);
    const double ours = primal_objective(x, y, s.w, s.b, c);
    const double oracle = testing::svm_grid_optimum(x, y, c);
    EXPECT_LE(ours, oracle * (1 + 1e-3)) << "instance " << t;
    EXPECT_GE(ours, oracle * (1 - 1e-3)) << "instance " << t;
  }
}

TEST(Binary, PrimalObjectiveByHand) {
  DenseMatrix x(2, 2);
  x << 1, 0,
       0, 1;
  const std::vector<int> y = {1, -1};
  Vector w(2);
  w << 1, 0;
  // margins: 1*(1+0)=1 -> 0 loss; -1*(0+0)=0 -> loss 1.
  EXPECT_DOUBLE_EQ(primal_objective(x, y, w, 0.0, 2.0), 0.5 + 2.0);
}

TEST(Binary, Errors) {
  const DenseMatrix x = DenseMatrix::Ones(2, 2);
  EXPECT_THROW(train_binary(x, std::vector<int>{1, -1}, 0.0), ConfigError);
  EXPECT_THROW(train_binary(x, std::vector<int>{1}, 1.0), DimensionError);
  EXPECT_THROW(train_binary(x, std::vector<int>{1, 0}, 1.0), DataError);
}

TEST(Predict, ArgmaxAndTies) {
  LinearSvmModel m;
  m.weights = DenseMatrix::Identity(2, 2);
  m.bias = Vector::Zero(2);
  DenseMatrix x(2, 2);
  x << 2, 1,
       1, 1;
  EXPECT_EQ(predict(m, x), (std::vector<int>{0, 0}));
  x(1, 1) = 1.5;
  EXPECT_EQ(predict(m, x)[1], 1);
  EXPECT_THROW(predict(m, DenseMatrix::Ones(3, 1)), DimensionError);
}

TEST(Predict, AgreesWithDirectScores) {
  Rng rng(2);
  LinearSvmModel m;
  m.weights = random_gaussian(5, 12, rng);
  m.bias = random_gaussian(5, 1, rng);
  const DenseMatrix x = random_gaussian(12, 500, rng);
  const auto p = predict(m, x);
  for (Index i = 0; i < 500; ++i) {
    int best = 0;
    double best_v = -1e300;
    for (int c = 0; c < 5; ++c) {
      double v = m.bias(c);
      for (Index k = 0; k < 12; ++k) v += m.weights(c, k) * x(k, i);
      if (v > best_v) {
        best_v = v;
        best = c;
      }
    }
    EXPECT_EQ(p[i], best);
  }
}

TEST(Train, SeparableDataPerfectlyClassified) {
  Rng rng(3);
  DenseMatrix x;
  std::vector<int> labels;
  clouds(5, 30, 4.0, rng, x, labels);
  for (double c : {100.0, 1000.0}) {
    const LinearSvmModel m = train(x, labels, {"a", "b"}, c);
    EXPECT_EQ(predict(m, x), labels);
  }
}

TEST(Train, ZeroPaddingDoesNotChangeScores) {
  Rng rng(4);
  DenseMatrix x;
  std::vector<int> labels;
  clouds(4, 20, 1.0, rng, x, labels);
  DenseMatrix padded = DenseMatrix::Zero(7, x.cols());
  padded.topRows(4) = x;
  const LinearSvmModel a = train(x, labels, {"a", "b"}, 1.0);
  const LinearSvmModel b = train(padded, labels, {"a", "b"}, 1.0);
  EXPECT_LT((decision_values(a, x) - decision_values(b, padded)).norm(), 1e-9);
  EXPECT_TRUE(b.weights.rightCols(3).isZero(1e-12));
}

TEST(Train, ScaleEquivariance) {
  // Scaling x by s and C by 1/s^2 scales w by 1/s and keeps predictions.
  Rng rng(5);
  DenseMatrix x;
  std::vector<int> labels;
  clouds(3, 25, 0.8, rng, x, labels);
  const LinearSvmModel a = train(x, labels, {"a", "b"}, 1.0);
  const LinearSvmModel b = train(4.0 * x, labels, {"a", "b"}, 1.0 / 16.0);
  EXPECT_EQ(predict(a, x), predict(b, 4.0 * x));
  EXPECT_LT((a.weights - 4.0 * b.weights).norm(), 1e-3 * a.weights.norm());
}

TEST(Train, MulticlassBlobs) {
  synth::BlobSpec spec;
  spec.classes = 4;
  spec.per_class = 25;
  spec.seed = 6;
  const LabeledDataset ds = synth::blobs(spec);
  const LinearSvmModel m = train(ds.features, ds.labels, ds.class_names, 10.0);
  EXPECT_EQ(m.num_classes(), 4);
  EXPECT_EQ(predict(m, ds.features), ds.labels);
}

TEST(Train, Errors) {
  const DenseMatrix x = DenseMatrix::Ones(2, 3);
  EXPECT_THROW(train(x, std::vector<int>{0, 0, 0}, {"a", "b"}, 1.0), DataError);
  EXPECT_THROW(train(x, std::vector<int>{0, 1, 2}, {"a", "b"}, 1.0), DataError);
  EXPECT_THROW(train(x, std::vector<int>{0, 1}, {"a", "b"}, 1.0), DimensionError);
  EXPECT_THROW(train(x, std::vector<int>{0, 1, 0}, {"a", "b"}, -1.0), ConfigError);
}

TEST(Folds, PartitionAndDeterminism) {
  for (Index n : {2, 7, 30}) {
    const auto loo = make_folds(n, CvSpec::leave_one_out());
    EXPECT_EQ(static_cast<Index>(loo.size()), n);
    for (Index k : {2, 3}) {
      if (k > n) continue;
      const auto a = make_folds(n, CvSpec::k_fold(k, 9));
      const auto b = make_folds(n, CvSpec::k_fold(k, 9));
      EXPECT_EQ(a, b);
      ASSERT_EQ(static_cast<Index>(a.size()), k);
      std::multiset<Index> all;
      for (const auto& f : a) {
        EXPECT_FALSE(f.empty());
        all.insert(f.begin(), f.end());
      }
      EXPECT_EQ(static_cast<Index>(all.size()), n);
      EXPECT_EQ(static_cast<Index>(std::set<Index>(all.begin(), all.end()).size()), n);
    }
  }
  EXPECT_THROW(make_folds(3, CvSpec::k_fold(4, 0)), ConfigError);
  EXPECT_THROW(make_folds(3, CvSpec::k_fold(1, 0)), ConfigError);
  EXPECT_THROW(make_folds(1, CvSpec::leave_one_out()), ConfigError);
}

TEST(CvSpecText, ParseAndFormat) {
  EXPECT_EQ(CvSpec::parse("loo", 0).kind, CvSpec::Kind::kLeaveOneOut);
  const CvSpec k = CvSpec::parse("kfold:5", 3);
  EXPECT_EQ(k.kind, CvSpec::Kind::kKFold);
  EXPECT_EQ(k.folds, 5);
  EXPECT_EQ(k.seed, 3u);
  EXPECT_EQ(k.to_string(), "kfold:5");
  EXPECT_EQ(CvSpec::leave_one_out().to_string(), "loo");
  EXPECT_THROW(CvSpec::parse("kfold:x", 0), ConfigError);
  EXPECT_THROW(CvSpec::parse("holdout", 0), ConfigError);
}

TEST(Grid, DefaultGridScoresEveryValue) {
  Rng rng(7);
  DenseMatrix x;
  std::vector<int> labels;
  clouds(4, 15, 0.7, rng, x, labels);
  const GridSearchResult g =
      grid_search(x, labels, 2, default_c_grid(), CvSpec::k_fold(5, 1));
  ASSERT_EQ(g.scores.size(), 5u);
  double best = -1.0;
  for (const auto& p : g.scores) best = std::max(best, p.mean_accuracy);
  double chosen = 0.0;
  for (const auto& p : g.scores) {
    if (p.mean_accuracy == best) {
      chosen = p.C;
      break;
    }
  }
  EXPECT_EQ(g.best_C, chosen);
  const GridSearchResult again =
      grid_search(x, labels, 2, default_c_grid(), CvSpec::k_fold(5, 1));
  EXPECT_EQ(again.best_C, g.best_C);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(again.scores[i].mean_accuracy, g.scores[i].mean_accuracy);
  }
}

TEST(Grid, SingleValueAndErrors) {
  Rng rng(8);
  DenseMatrix x;
  std::vector<int> labels;
  clouds(3, 6, 2.0, rng, x, labels);
  EXPECT_EQ(grid_search(x, labels, 2, {3.0}, CvSpec::leave_one_out()).best_C, 3.0);
  EXPECT_THROW(grid_search(x, labels, 2, {}, CvSpec::leave_one_out()), ConfigError);
  EXPECT_THROW(grid_search(x, labels, 2, {1.0}, CvSpec::k_fold(13, 0)), ConfigError);
}

TEST(CrossValidate, LeaveOneOutOnSeparableData) {
  Rng rng(9);
  DenseMatrix x;
  std::vector<int> labels;
  clouds(3, 10, 5.0, rng, x, labels);
  const CvResult r = cross_validate(x, labels, 2, 10.0, CvSpec::leave_one_out());
  EXPECT_EQ(r.fold_accuracies.size(), 20u);
  EXPECT_DOUBLE_EQ(r.mean_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.std_accuracy, 0.0);
}

}  // namespace
}  // namespace sparsefx::svm
