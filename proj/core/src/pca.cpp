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

#include "sparsefx/pca.hpp"

#include <Eigen/SVD>

#include "sparsefx/errors.hpp"

namespace sparsefx::rffd {

DenseMatrix PcaModel::transform(const DenseMatrix& data) const {
  if (data.rows() != mean.size()) {
    throw DimensionError("pca: data has " + std::to_string(data.rows()) +
                         " features, model expects " +
                         std::to_string(mean.size()));
  }
  return components * (data.colwise() - mean);
}

DenseMatrix PcaModel::reconstruct(const DenseMatrix& scores) const {
  if (scores.rows() != components.rows()) {
    throw DimensionError("pca: score dimension mismatch");
  }
  DenseMatrix out = components.transpose() * scores;
  out.colwise() += mean;
  return out;
}

PcaModel fit_pca(const DenseMatrix& data, Index m) {
  const Index d = data.rows();
  const Index n = data.cols();
  if (m < 1 || m > std::min(d, n)) {
    throw ConfigError("pca: m=" + std::to_string(m) + " outside [1, " +
                      std::to_string(std::min(d, n)) + "]");
  }
  PcaModel model;
  model.mean = data.rowwise().mean();
  const DenseMatrix centered = data.colwise() - model.mean;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  model.total_variance = centered.squaredNorm() / denom;

  // Left singular vectors of the centred data are the covariance
  // eigenvectors; squared singular values / (N - 1) are the eigenvalues.
  Eigen::BDCSVD<DenseMatrix> svd(centered, Eigen::ComputeThinU);
  DenseMatrix dirs = svd.matrixU().leftCols(m);
  for (Index j = 0; j < m; ++j) {
    Index arg = 0;
    dirs.col(j).cwiseAbs().maxCoeff(&arg);
    if (dirs(arg, j) < 0) dirs.col(j) *= -1.0;
  }
  model.components = dirs.transpose();
  model.variances = svd.singularValues().head(m).array().square() / denom;
  return model;
}

LabeledDataset pca_project(const LabeledDataset& ds, Index m) {
  ds.validate();
  const PcaModel model = fit_pca(ds.features, m);
  LabeledDataset out = ds;
  out.features = model.transform(ds.features);
  return out;
}

}  // namespace sparsefx::rffd
