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

#ifndef SPARSEFX_KSVD_HPP_
#define SPARSEFX_KSVD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sparsefx/matrix.hpp"

namespace sparsefx::ksvd {

enum class UnusedAtomPolicy { kReplaceWithWorstSignal, kKeep };

struct KsvdConfig {
  Index max_iters = 50;
  // Stop once (previous - current) < rel_tol * previous objective.
  double rel_tol = 1e-4;
  UnusedAtomPolicy unused_atoms = UnusedAtomPolicy::kReplaceWithWorstSignal;
  // Only consulted when a replacement has to pick among perfectly
  // reconstructed signals.
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct IterationLog {
  Index iteration = 0;
  // |Y - DX|_F^2 after the OMP stage, before the atom sweep.
  double objective_before_sweep = 0.0;
  // |Y - DX|_F^2 after the atom sweep.
  double objective = 0.0;
  Index atoms_replaced = 0;
};

// Unit-norm atoms as columns, plus the sparsity level they were trained for.
struct Dictionary {
  DenseMatrix atoms;
  Index sparsity = 0;
  std::vector<std::string> class_names;
  std::vector<IterationLog> training_log;

  Index dim() const { return atoms.rows(); }
  Index size() const { return atoms.cols(); }
};

// Uses the training columns themselves, each scaled to unit norm.
Dictionary init_dictionary(const DenseMatrix& train);

// |Y - DX|_F^2.
double objective(const DenseMatrix& dict, const DenseMatrix& signals,
                 const DenseMatrix& codes);

// Leading singular triplet of a matrix by power iteration on M M^T started
// from start (which must be nonzero). left is unit norm, sign-aligned with
// start; right = M^T left (singular value folded in).
struct RankOne {
  Vector left;
  Vector right;
  Index iterations = 0;
};
RankOne rank_one_approximation(const DenseMatrix& m, const Vector& start,
                               double tol = 1e-10, Index max_iters = 1000);

// One pass over all atoms in ascending order. For atom j, the signals whose
// code uses j form the restricted residual E_j; atom j and its coefficient
// row are replaced by the rank-one fit of E_j. Atoms used by no signal are
// handled according to cfg.unused_atoms. Codes keep their support.
// Returns the number of replaced atoms.
Index update_atoms(DenseMatrix& dict, DenseMatrix& codes,
                   const DenseMatrix& signals, const KsvdConfig& cfg,
                   std::uint64_t sweep_seed);

struct KsvdResult {
  Dictionary dictionary;
  DenseMatrix codes;  // K x N, consistent with the returned atoms
};

// Alternates batch OMP at sparsity L with update_atoms until max_iters, a
// zero objective, or a relative decrease below rel_tol.
KsvdResult refine(const Dictionary& initial, const DenseMatrix& signals,
                  Index sparsity, const KsvdConfig& cfg);

}  // namespace sparsefx::ksvd

#endif  // SPARSEFX_KSVD_HPP_
