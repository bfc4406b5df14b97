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

#include "sparsefx/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsefx/errors.hpp"
#include "sparsefx/random.hpp"

namespace sparsefx::svm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 1e-12;

struct DualSolution {
  Vector alpha;
  double rho = 0.0;  // decision value = sum_i alpha_i y_i K(i, .) - rho
  Index iterations = 0;
  bool converged = true;
};

// SMO on the sub-problem made of rows/cols idx of the Gram matrix.
// Working-set selection uses second-order information; ties resolve to the
// lowest index.
DualSolution solve_dual(const DenseMatrix& gram, std::span<const Index> idx,
                        std::span<const int> y, double C,
                        const SolverOptions& options) {
  const Index n = static_cast<Index>(idx.size());
  DualSolution sol;
  sol.alpha = Vector::Zero(n);

  const bool any_pos = std::find(y.begin(), y.end(), +1) != y.end();
  const bool any_neg = std::find(y.begin(), y.end(), -1) != y.end();
  if (!any_pos || !any_neg) {
    // Degenerate single-label problem: w = 0 and the bias sits on the margin.
    sol.rho = any_pos ? -1.0 : 1.0;
    return sol;
  }

  auto kernel = [&](Index a, Index b) { return gram(idx[a], idx[b]); };
  Vector grad = Vector::Constant(n, -1.0);
  Vector diag(n);
  for (Index i = 0; i < n; ++i) diag(i) = kernel(i, i);
  Vector& alpha = sol.alpha;
  auto upper = [&](Index t) { return alpha(t) >= C; };
  auto lower = [&](Index t) { return alpha(t) <= 0.0; };

  const Index max_iter = options.max_iterations > 0
                             ? options.max_iterations
                             : std::max<Index>(10000, 100 * n);
  sol.converged = false;
  Index iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -kInf;
    Index i = -1;
    for (Index t = 0; t < n; ++t) {
      if (y[t] == +1) {
        if (!upper(t) && -grad(t) > gmax) {
          gmax = -grad(t);
          i = t;
        }
      } else if (!lower(t) && grad(t) > gmax) {
        gmax = grad(t);
        i = t;
      }
    }
    double gmax2 = -kInf;
    Index j = -1;
    double best_obj = kInf;
    if (i >= 0) {
      for (Index t = 0; t < n; ++t) {
        const double kit = kernel(i, t);
        if (y[t] == +1) {
          if (lower(t)) continue;
          const double diff = gmax + grad(t);
          gmax2 = std::max(gmax2, grad(t));
          if (diff > 0) {
            double quad = diag(i) + diag(t) - 2.0 * y[i] * kit;
            if (quad <= 0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj < best_obj) {
              best_obj = obj;
              j = t;
            }
          }
        } else {
          if (upper(t)) continue;
          const double diff = gmax - grad(t);
          gmax2 = std::max(gmax2, -grad(t));
          if (diff > 0) {
            double quad = diag(i) + diag(t) + 2.0 * y[i] * kit;
            if (quad <= 0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj < best_obj) {
              best_obj = obj;
              j = t;
            }
          }
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < options.tolerance) {
      sol.converged = true;
      break;
    }

    const double kij = kernel(i, j);
    const double qij = y[i] * y[j] * kij;
    const double old_i = alpha(i);
    const double old_j = alpha(j);
    if (y[i] != y[j]) {
      double quad = diag(i) + diag(j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) {
          alpha(j) = 0;
          alpha(i) = diff;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = -diff;
      }
      if (diff > 0) {
        if (alpha(i) > C) {
          alpha(i) = C;
          alpha(j) = C - diff;
        }
      } else if (alpha(j) > C) {
        alpha(j) = C;
        alpha(i) = C + diff;
      }
    } else {
      double quad = diag(i) + diag(j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > C) {
        if (alpha(i) > C) {
          alpha(i) = C;
          alpha(j) = sum - C;
        }
      } else if (alpha(j) < 0) {
        alpha(j) = 0;
        alpha(i) = sum;
      }
      if (sum > C) {
        if (alpha(j) > C) {
          alpha(j) = C;
          alpha(i) = sum - C;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = sum;
      }
    }
    const double di = alpha(i) - old_i;
    const double dj = alpha(j) - old_j;
    for (Index t = 0; t < n; ++t) {
      grad(t) += y[t] * (y[i] * kernel(i, t) * di + y[j] * kernel(j, t) * dj);
    }
  }
  sol.iterations = iter;

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = kInf;
  double lb = -kInf;
  double sum_free = 0.0;
  Index free = 0;
  for (Index t = 0; t < n; ++t) {
    const double yg = y[t] * grad(t);
    if (upper(t)) {
      if (y[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (lower(t)) {
      if (y[t] == +1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++free;
      sum_free += yg;
    }
  }
  sol.rho = free > 0 ? sum_free / static_cast<double>(free) : (ub + lb) / 2.0;
  return sol;
}

std::vector<int> binary_targets(std::span<const int> labels,
                                std::span<const Index> idx, int positive) {
  std::vector<int> y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    y[k] = labels[idx[k]] == positive ? +1 : -1;
  }
  return y;
}

void check_inputs(const DenseMatrix& features, std::span<const int> labels,
                  int num_classes, double C) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw ConfigError("svm: C must be a positive finite number");
  }
  if (static_cast<Index>(labels.size()) != features.cols()) {
    throw DimensionError("svm: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(features.cols()) +
                         " samples");
  }
  for (int l : labels) {
    if (l < 0 || l >= num_classes) throw DataError("svm: label out of range");
  }
  std::vector<bool> seen(num_classes, false);
  int present = 0;
  for (int l : labels) {
    if (!seen[l]) {
      seen[l] = true;
      ++present;
    }
  }
  if (present < 2) {
    throw DataError("svm: training data must contain at least two classes");
  }
}

// Accuracy of OVR models trained on train_idx and evaluated on test_idx,
// everything expressed through the Gram matrix.
double fold_accuracy(const DenseMatrix& gram, std::span<const int> labels,
                     int num_classes, double C, std::span<const Index> train_idx,
                     std::span<const Index> test_idx,
                     const SolverOptions& options) {
  if (test_idx.empty()) return 0.0;
  DenseMatrix scores(num_classes, static_cast<Index>(test_idx.size()));
  for (int c = 0; c < num_classes; ++c) {
    const auto y = binary_targets(labels, train_idx, c);
    const DualSolution sol = solve_dual(gram, train_idx, y, C, options);
    for (std::size_t t = 0; t < test_idx.size(); ++t) {
      double s = -sol.rho;
      for (std::size_t i = 0; i < train_idx.size(); ++i) {
        const double a = sol.alpha(static_cast<Index>(i));
        if (a != 0.0) s += a * y[i] * gram(train_idx[i], test_idx[t]);
      }
      scores(c, static_cast<Index>(t)) = s;
    }
  }
  Index correct = 0;
  for (std::size_t t = 0; t < test_idx.size(); ++t) {
    const Index col = static_cast<Index>(t);
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
      if (scores(c, col) > scores(best, col)) best = c;
    }
    if (labels[test_idx[t]] == best) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test_idx.size());
}

CvResult cross_validate_gram(const DenseMatrix& gram, std::span<const int> labels,
                             int num_classes, double C,
                             const std::vector<std::vector<Index>>& folds,
                             const SolverOptions& options) {
  const Index n = gram.rows();
  CvResult result;
  std::vector<char> held(n);
  for (const auto& fold : folds) {
    std::fill(held.begin(), held.end(), 0);
    for (Index t : fold) held[t] = 1;
    std::vector<Index> train_idx;
    train_idx.reserve(n - fold.size());
    for (Index i = 0; i < n; ++i) {
      if (!held[i]) train_idx.push_back(i);
    }
    result.fold_accuracies.push_back(
        fold_accuracy(gram, labels, num_classes, C, train_idx, fold, options));
  }
  const double k = static_cast<double>(result.fold_accuracies.size());
  result.mean_accuracy =
      std::accumulate(result.fold_accuracies.begin(),
                      result.fold_accuracies.end(), 0.0) / k;
  double var = 0.0;
  for (double a : result.fold_accuracies) {
    var += (a - result.mean_accuracy) * (a - result.mean_accuracy);
  }
  result.std_accuracy = std::sqrt(var / k);
  return result;
}

}  // namespace

BinarySolution train_binary(const DenseMatrix& x, std::span<const int> y,
                            double C, const SolverOptions& options) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw ConfigError("svm: C must be a positive finite number");
  }
  if (static_cast<Index>(y.size()) != x.cols()) {
    throw DimensionError("svm: label count does not match sample count");
  }
  for (int v : y) {
    if (v != 1 && v != -1) throw DataError("svm: binary targets must be +1/-1");
  }
  const DenseMatrix gram = x.transpose() * x;
  std::vector<Index> idx(y.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  const DualSolution dual = solve_dual(gram, idx, y, C, options);
  BinarySolution out;
  Vector coef(x.cols());
  for (Index i = 0; i < x.cols(); ++i) coef(i) = dual.alpha(i) * y[i];
  out.w = x * coef;
  out.b = -dual.rho;
  out.alpha = dual.alpha;
  out.iterations = dual.iterations;
  out.converged = dual.converged;
  return out;
}

double primal_objective(const DenseMatrix& x, std::span<const int> y,
                        const Vector& w, double b, double C) {
  double loss = 0.0;
  for (Index i = 0; i < x.cols(); ++i) {
    loss += std::max(0.0, 1.0 - y[i] * (w.dot(x.col(i)) + b));
  }
  return 0.5 * w.squaredNorm() + C * loss;
}

LinearSvmModel train(const DenseMatrix& features, std::span<const int> labels,
                     const std::vector<std::string>& class_names, double C,
                     const SolverOptions& options) {
  const int k = static_cast<int>(class_names.size());
  check_inputs(features, labels, k, C);
  const DenseMatrix gram = features.transpose() * features;
  std::vector<Index> idx(labels.size());
  std::iota(idx.begin(), idx.end(), Index{0});

  LinearSvmModel model;
  model.class_names = class_names;
  model.C = C;
  model.weights = DenseMatrix::Zero(k, features.rows());
  model.bias = Vector::Zero(k);
  for (int c = 0; c < k; ++c) {
    const auto y = binary_targets(labels, idx, c);
    const DualSolution dual = solve_dual(gram, idx, y, C, options);
    Vector coef(features.cols());
    for (Index i = 0; i < features.cols(); ++i) coef(i) = dual.alpha(i) * y[i];
    model.weights.row(c) = (features * coef).transpose();
    model.bias(c) = -dual.rho;
  }
  if (!model.weights.allFinite() || !model.bias.allFinite()) {
    throw NumericalError("svm: training produced non-finite parameters");
  }
  return model;
}

DenseMatrix decision_values(const LinearSvmModel& model,
                            const DenseMatrix& features) {
  if (features.rows() != model.feature_dim()) {
    throw DimensionError("svm: model expects " +
                         std::to_string(model.feature_dim()) +
                         " features, got " + std::to_string(features.rows()));
  }
  DenseMatrix scores = model.weights * features;
  scores.colwise() += model.bias;
  return scores;
}

std::vector<int> predict(const LinearSvmModel& model,
                         const DenseMatrix& features) {
  const DenseMatrix scores = decision_values(model, features);
  std::vector<int> out(static_cast<std::size_t>(features.cols()));
  for (Index j = 0; j < scores.cols(); ++j) {
    int best = 0;
    for (int c = 1; c < scores.rows(); ++c) {
      if (scores(c, j) > scores(best, j)) best = c;
    }
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

CvSpec CvSpec::parse(const std::string& text, std::uint64_t seed) {
  if (text == "loo") return leave_one_out();
  const std::string prefix = "kfold:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const long k = std::stol(text.substr(prefix.size()), &used);
      if (used == text.size() - prefix.size() && k >= 2) return k_fold(k, seed);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("invalid cross-validation mode '" + text +
                    "' (expected 'loo' or 'kfold:<k>' with k >= 2)");
}

std::string CvSpec::to_string() const {
  return kind == Kind::kLeaveOneOut ? "loo" : "kfold:" + std::to_string(folds);
}

std::vector<std::vector<Index>> make_folds(Index n, const CvSpec& spec) {
  if (n < 2) throw ConfigError("cross-validation needs at least two samples");
  std::vector<std::vector<Index>> folds;
  if (spec.kind == CvSpec::Kind::kLeaveOneOut) {
    for (Index i = 0; i < n; ++i) folds.push_back({i});
    return folds;
  }
  if (spec.folds < 2) throw ConfigError("k-fold cross-validation needs k >= 2");
  if (spec.folds > n) {
    throw ConfigError("k-fold cross-validation with " +
                      std::to_string(spec.folds) + " folds exceeds " +
                      std::to_string(n) + " samples");
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(spec.seed);
  rng.shuffle(std::span<Index>(perm));
  folds.resize(static_cast<std::size_t>(spec.folds));
  for (std::size_t p = 0; p < perm.size(); ++p) {
    folds[p % folds.size()].push_back(perm[p]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult cross_validate(const DenseMatrix& features, std::span<const int> labels,
                        int num_classes, double C, const CvSpec& cv,
                        const SolverOptions& options) {
  check_inputs(features, labels, num_classes, C);
  const auto folds = make_folds(features.cols(), cv);
  const DenseMatrix gram = features.transpose() * features;
  return cross_validate_gram(gram, labels, num_classes, C, folds, options);
}

GridSearchResult grid_search(const DenseMatrix& features,
                             std::span<const int> labels, int num_classes,
                             const std::vector<double>& c_grid,
                             const CvSpec& cv, const SolverOptions& options) {
  if (c_grid.empty()) throw ConfigError("grid search: empty C grid");
  for (double c : c_grid) check_inputs(features, labels, num_classes, c);
  const auto folds = make_folds(features.cols(), cv);
  const DenseMatrix gram = features.transpose() * features;
  GridSearchResult result;
  double best = -1.0;
  for (double c : c_grid) {
    const CvResult r =
        cross_validate_gram(gram, labels, num_classes, c, folds, options);
    result.scores.push_back({c, r.mean_accuracy, r.std_accuracy});
    if (r.mean_accuracy > best ||
        (r.mean_accuracy == best && c < result.best_C)) {
      best = r.mean_accuracy;
      result.best_C = c;
    }
  }
  return result;
}

}  // namespace sparsefx::svm
