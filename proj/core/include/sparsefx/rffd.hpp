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

#ifndef SPARSEFX_RFFD_HPP_
#define SPARSEFX_RFFD_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sparsefx/dataset.hpp"
#include "sparsefx/matrix.hpp"
#include "sparsefx/svm.hpp"

namespace sparsefx::rffd {

// Produces a rows x cols matrix of raw (unnormalized) entries for a seed.
// The default draws i.i.d. N(0, 1); tests substitute fixed patterns.
using MatrixSource =
    std::function<DenseMatrix(Index rows, Index cols, std::uint64_t seed)>;

DenseMatrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed);

// A random projection R (m x d) whose rows are unit-length projection
// directions, together with how it fared in the search.
struct ProjectionCandidate {
  DenseMatrix projection;
  Index dim = 0;
  Index index = 0;
  std::uint64_t seed = 0;
  bool quality_ok = false;
  std::optional<double> cv_accuracy;
};

ProjectionCandidate generate_candidate(Index d, Index m, std::uint64_t seed,
                                       const MatrixSource& source = {});

// A = R * X.
DenseMatrix project(const DenseMatrix& projection, const DenseMatrix& data);

// True iff every projected feature (row of A) has l2 norm > threshold.
bool quality_check(const DenseMatrix& projected, double threshold);

// 1e-8 * |X|_F / sqrt(m * N): flags only numerically dead features.
double default_quality_threshold(const DenseMatrix& data, Index m);

std::uint64_t candidate_seed(std::uint64_t master, Index m, Index index);

struct RffdConfig {
  std::vector<Index> dims;
  Index candidates_per_dim = 10;
  std::optional<double> quality_threshold;
  svm::CvSpec cv = svm::CvSpec::leave_one_out();
  double svm_C = 1.0;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  MatrixSource source;

  void validate(Index d) const;
};

// One row of report.csv.
struct CandidateScore {
  Index m = 0;
  Index index = 0;
  std::uint64_t seed = 0;
  bool quality_ok = false;
  std::optional<double> cv_accuracy;
  bool winner_for_m = false;
  bool global_winner = false;
};

struct SearchResult {
  ProjectionCandidate best;
  LabeledDataset projected;
  std::vector<CandidateScore> report;  // ordered by (position of m in dims, index)
};

// Generates candidates_per_dim projections for every m, drops those failing
// the quality check, scores the rest by cross-validated linear-SVM accuracy
// and keeps the best (ties: smaller m, then lower candidate index).
SearchResult search(const LabeledDataset& ds, const RffdConfig& cfg);

}  // namespace sparsefx::rffd

#endif  // SPARSEFX_RFFD_HPP_
