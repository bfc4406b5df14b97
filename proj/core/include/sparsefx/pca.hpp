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

#ifndef SPARSEFX_PCA_HPP_
#define SPARSEFX_PCA_HPP_

#include "sparsefx/dataset.hpp"
#include "sparsefx/matrix.hpp"

namespace sparsefx::rffd {

// Principal-component baseline for the random projection.
struct PcaModel {
  Vector mean;            // d
  DenseMatrix components; // m x d, rows are principal directions
  Vector variances;       // m, descending
  double total_variance = 0.0;

  DenseMatrix transform(const DenseMatrix& data) const;
  DenseMatrix reconstruct(const DenseMatrix& scores) const;
  double retained_variance() const { return variances.sum(); }
};

// Requires 1 <= m <= min(d, N). Sample covariance uses N - 1 (N when N = 1).
// Each direction is signed so its largest-magnitude entry is positive.
PcaModel fit_pca(const DenseMatrix& data, Index m);

LabeledDataset pca_project(const LabeledDataset& ds, Index m);

}  // namespace sparsefx::rffd

#endif  // SPARSEFX_PCA_HPP_
