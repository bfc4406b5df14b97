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

#ifndef SPARSEFX_MATRIX_HPP_
#define SPARSEFX_MATRIX_HPP_

#include <Eigen/Core>

namespace sparsefx {

// Column-major real matrix. A sample is always one contiguous column.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

}  // namespace sparsefx

#endif  // SPARSEFX_MATRIX_HPP_
