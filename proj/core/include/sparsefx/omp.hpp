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

#ifndef SPARSEFX_OMP_HPP_
#define SPARSEFX_OMP_HPP_

#include <vector>

#include <Eigen/Core>

#include "sparsefx/matrix.hpp"

namespace sparsefx::omp {

// Sparse representation of one signal over a K-atom dictionary.
struct SparseCode {
  std::vector<Index> support;  // strictly increasing
  std::vector<double> coeffs;  // aligned with support
  Index dict_size = 0;
  double residual_norm = 0.0;
  // Set when a selected atom was linearly dependent on the rest of the
  // support; coefficients then come from minimum-norm least squares.
  bool rank_deficient = false;

  Vector dense() const;
};

// Throws DataError naming the first atom whose norm is not 1 within tol.
void check_unit_atoms(const DenseMatrix& dict, double tol = 1e-6);

// Orthogonal Matching Pursuit. Each step adds the unselected atom with the
// largest |<d_j, r>| (lowest index on ties), refits least squares on the
// support through an incrementally updated QR factorization and updates the
// residual. Stops after L atoms, when |r| <= residual_tol, or when the
// residual is numerically orthogonal to every atom.
SparseCode encode(const DenseMatrix& dict, const Eigen::Ref<const Vector>& signal,
                  Index sparsity, double residual_tol = 0.0);

// Encodes every column of signals; returns the dense K x N code matrix.
// If codes is non-null it receives the per-column SparseCode.
DenseMatrix batch_encode(const DenseMatrix& dict, const DenseMatrix& signals,
                         Index sparsity, double residual_tol = 0.0,
                         unsigned threads = 1,
                         std::vector<SparseCode>* codes = nullptr);

struct ReconstructionErrors {
  Vector per_sample;  // |y_i - D x_i|_2
  double total = 0.0; // |Y - D X|_F
};

ReconstructionErrors reconstruction_errors(const DenseMatrix& dict,
                                           const DenseMatrix& signals,
                                           const DenseMatrix& codes);

}  // namespace sparsefx::omp

#endif  // SPARSEFX_OMP_HPP_
