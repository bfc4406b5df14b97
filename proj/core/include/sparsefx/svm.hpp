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

#ifndef SPARSEFX_SVM_HPP_
#define SPARSEFX_SVM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparsefx/matrix.hpp"

namespace sparsefx::svm {

// One-vs-rest linear SVM. Row c of weights and bias(c) score class c.
struct LinearSvmModel {
  DenseMatrix weights;  // classes x feature_dim
  Vector bias;          // classes
  std::vector<std::string> class_names;
  double C = 1.0;

  int num_classes() const { return static_cast<int>(weights.rows()); }
  Index feature_dim() const { return weights.cols(); }
};

struct SolverOptions {
  // Stop when the maximal KKT violation drops below this value.
  double tolerance = 1e-4;
  // 0 selects max(10^4, 100 * N).
  Index max_iterations = 0;
};

struct BinarySolution {
  Vector w;
  double b = 0.0;
  Vector alpha;
  Index iterations = 0;
  bool converged = true;
};

// Solves min 1/2 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b)) with an
// unregularized bias. y holds +1/-1 per column of x. The dual is optimized by
// pairwise coordinate descent (SMO) with maximal-violating-pair selection;
// the order of operations is fixed, so results are deterministic.
BinarySolution train_binary(const DenseMatrix& x, std::span<const int> y,
                            double C, const SolverOptions& options = {});

double primal_objective(const DenseMatrix& x, std::span<const int> y,
                        const Vector& w, double b, double C);

// Labels index class_names. At least two classes must be present.
LinearSvmModel train(const DenseMatrix& features, std::span<const int> labels,
                     const std::vector<std::string>& class_names, double C,
                     const SolverOptions& options = {});

// classes x N matrix of w_c . x + b_c.
DenseMatrix decision_values(const LinearSvmModel& model,
                            const DenseMatrix& features);

// argmax of the decision values; ties go to the lowest class index.
std::vector<int> predict(const LinearSvmModel& model,
                         const DenseMatrix& features);

struct CvSpec {
  enum class Kind { kLeaveOneOut, kKFold };
  Kind kind = Kind::kLeaveOneOut;
  Index folds = 0;
  std::uint64_t seed = 0;

  static CvSpec leave_one_out() { return {}; }
  static CvSpec k_fold(Index k, std::uint64_t seed) {
    return {Kind::kKFold, k, seed};
  }
  // "loo" or "kfold:<k>".
  static CvSpec parse(const std::string& text, std::uint64_t seed);
  std::string to_string() const;
};

// Held-out sample indices of each fold. Fold membership is a deterministic
// function of (n, spec).
std::vector<std::vector<Index>> make_folds(Index n, const CvSpec& spec);

struct CvResult {
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

CvResult cross_validate(const DenseMatrix& features, std::span<const int> labels,
                        int num_classes, double C, const CvSpec& cv,
                        const SolverOptions& options = {});

struct GridPoint {
  double C = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

struct GridSearchResult {
  double best_C = 0.0;
  std::vector<GridPoint> scores;
};

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  return grid;
}

// Mean CV accuracy for every C; the best is the highest mean, ties going to
// the smaller C.
GridSearchResult grid_search(const DenseMatrix& features,
                             std::span<const int> labels, int num_classes,
                             const std::vector<double>& c_grid,
                             const CvSpec& cv,
                             const SolverOptions& options = {});

}  // namespace sparsefx::svm

#endif  // SPARSEFX_SVM_HPP_
