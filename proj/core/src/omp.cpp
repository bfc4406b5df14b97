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

#include "sparsefx/omp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/QR>

#include "sparsefx/errors.hpp"
#include "sparsefx/parallel.hpp"

namespace sparsefx::omp {
namespace {

// Below this the new Gram-Schmidt direction is treated as zero (atoms are
// unit norm, so the threshold is absolute).
constexpr double kDependentAtom = 1e-10;
// |<d_j, r>| <= kOrthogonal * |r| for every j means no atom can reduce r.
constexpr double kOrthogonal = 1e-12;

void check_sparsity(const DenseMatrix& dict, Index sparsity) {
  const Index limit = std::min(dict.rows(), dict.cols());
  if (sparsity < 1 || sparsity > limit) {
    throw ConfigError("omp: sparsity " + std::to_string(sparsity) +
                      " outside [1, " + std::to_string(limit) + "]");
  }
}

SparseCode encode_unchecked(const DenseMatrix& dict,
                            const Eigen::Ref<const Vector>& signal,
                            Index sparsity, double residual_tol) {
  const Index n = dict.rows();
  const Index k_atoms = dict.cols();
  SparseCode code;
  code.dict_size = k_atoms;

  DenseMatrix q(n, sparsity);
  DenseMatrix r = DenseMatrix::Zero(sparsity, sparsity);
  Vector qty(sparsity);
  std::vector<Index> order;       // atoms in selection order
  std::vector<Index> qr_atoms;    // atoms represented in the QR factors
  std::vector<char> selected(static_cast<std::size_t>(k_atoms), 0);
  Vector residual = signal;
  Index rank = 0;

  while (static_cast<Index>(order.size()) < sparsity) {
    const double rnorm = residual.norm();
    if (rnorm <= residual_tol) break;
    const Vector corr = dict.transpose() * residual;
    Index best = -1;
    double best_abs = -1.0;
    for (Index j = 0; j < k_atoms; ++j) {
      if (selected[j]) continue;
      const double a = std::abs(corr(j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best < 0 || best_abs <= kOrthogonal * rnorm) break;
    selected[best] = 1;
    order.push_back(best);

    // Classical Gram-Schmidt, applied twice for orthogonality.
    Vector v = dict.col(best);
    Vector h = Vector::Zero(rank);
    for (int pass = 0; pass < 2 && rank > 0; ++pass) {
      const Vector proj = q.leftCols(rank).transpose() * v;
      v -= q.leftCols(rank) * proj;
      h += proj;
    }
    const double diag = v.norm();
    if (diag <= kDependentAtom) {
      code.rank_deficient = true;
      continue;
    }
    q.col(rank) = v / diag;
    r.col(rank).head(rank) = h;
    r(rank, rank) = diag;
    qty(rank) = q.col(rank).dot(signal);
    residual -= q.col(rank) * q.col(rank).dot(residual);
    qr_atoms.push_back(best);
    ++rank;
  }

  Vector coeffs_in_order(static_cast<Index>(order.size()));
  if (!code.rank_deficient) {
    coeffs_in_order = r.topLeftCorner(rank, rank)
                          .triangularView<Eigen::Upper>()
                          .solve(qty.head(rank));
  } else {
    DenseMatrix sub(n, static_cast<Index>(order.size()));
    for (std::size_t k = 0; k < order.size(); ++k) {
      sub.col(static_cast<Index>(k)) = dict.col(order[k]);
    }
    Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(sub.rows(),
                                                            sub.cols());
    cod.setThreshold(kDependentAtom);
    cod.compute(sub);
    coeffs_in_order = cod.solve(signal);
    residual = signal - sub * coeffs_in_order;
  }

  std::vector<std::size_t> perm(order.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
  for (std::size_t p : perm) {
    code.support.push_back(order[p]);
    code.coeffs.push_back(coeffs_in_order(static_cast<Index>(p)));
  }
  code.residual_norm = residual.norm();
  return code;
}

}  // namespace

Vector SparseCode::dense() const {
  Vector x = Vector::Zero(dict_size);
  for (std::size_t k = 0; k < support.size(); ++k) x(support[k]) = coeffs[k];
  return x;
}

void check_unit_atoms(const DenseMatrix& dict, double tol) {
  for (Index j = 0; j < dict.cols(); ++j) {
    const double norm = dict.col(j).norm();
    if (!(std::abs(norm - 1.0) <= tol)) {
      std::ostringstream msg;
      msg << "dictionary atom " << j << " has norm " << norm
          << "; atoms must be unit length";
      throw DataError(msg.str());
    }
  }
}

SparseCode encode(const DenseMatrix& dict, const Eigen::Ref<const Vector>& signal,
                  Index sparsity, double residual_tol) {
  if (signal.size() != dict.rows()) {
    throw DimensionError("omp: signal length " + std::to_string(signal.size()) +
                         " does not match dictionary rows " +
                         std::to_string(dict.rows()));
  }
  if (!(residual_tol >= 0.0)) throw ConfigError("omp: residual_tol must be >= 0");
  check_sparsity(dict, sparsity);
  check_unit_atoms(dict);
  return encode_unchecked(dict, signal, sparsity, residual_tol);
}

DenseMatrix batch_encode(const DenseMatrix& dict, const DenseMatrix& signals,
                         Index sparsity, double residual_tol, unsigned threads,
                         std::vector<SparseCode>* codes) {
  if (signals.rows() != dict.rows()) {
    throw DimensionError("omp: signals have " + std::to_string(signals.rows()) +
                         " rows, dictionary has " + std::to_string(dict.rows()));
  }
  if (!(residual_tol >= 0.0)) throw ConfigError("omp: residual_tol must be >= 0");
  check_sparsity(dict, sparsity);
  check_unit_atoms(dict);

  const Index n = signals.cols();
  DenseMatrix out = DenseMatrix::Zero(dict.cols(), n);
  std::vector<SparseCode> local(codes ? static_cast<std::size_t>(n) : 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    const Index col = static_cast<Index>(i);
    try {
      SparseCode c = encode_unchecked(dict, signals.col(col), sparsity, residual_tol);
      for (std::size_t k = 0; k < c.support.size(); ++k) {
        out(c.support[k], col) = c.coeffs[k];
      }
      if (codes) local[i] = std::move(c);
    } catch (const Error& e) {
      throw NumericalError("omp: column " + std::to_string(col) + ": " + e.what());
    }
  });
  if (!out.allFinite()) throw NumericalError("omp: non-finite coefficients");
  if (codes) *codes = std::move(local);
  return out;
}

ReconstructionErrors reconstruction_errors(const DenseMatrix& dict,
                                           const DenseMatrix& signals,
                                           const DenseMatrix& codes) {
  if (dict.rows() != signals.rows() || dict.cols() != codes.rows() ||
      signals.cols() != codes.cols()) {
    std::ostringstream msg;
    msg << "reconstruction: shapes D " << dict.rows() << "x" << dict.cols()
        << ", Y " << signals.rows() << "x" << signals.cols() << ", X "
        << codes.rows() << "x" << codes.cols() << " are not conformable";
    throw DimensionError(msg.str());
  }
  const DenseMatrix residual = signals - dict * codes;
  ReconstructionErrors out;
  out.per_sample = residual.colwise().norm().transpose();
  out.total = residual.norm();
  return out;
}

}  // namespace sparsefx::omp
