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

#ifndef SPARSEFX_REPORTS_HPP_
#define SPARSEFX_REPORTS_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sparsefx/config.hpp"
#include "sparsefx/ksvd.hpp"
#include "sparsefx/omp.hpp"
#include "sparsefx/rffd.hpp"
#include "sparsefx/svm.hpp"

namespace sparsefx {

// report.csv: m,candidate_index,seed,quality_ok,cv_accuracy,winner_for_m,global_winner
void write_rffd_report(std::span<const rffd::CandidateScore> rows,
                       const std::filesystem::path& path);
std::vector<rffd::CandidateScore> read_rffd_report(const std::filesystem::path& path);

// training_log.csv: iteration,objective,atoms_replaced
void write_training_log(std::span<const ksvd::IterationLog> log,
                        const std::filesystem::path& path);

// grid_report.csv: C,mean_accuracy,std_accuracy
void write_grid_report(const svm::GridSearchResult& grid,
                       const std::filesystem::path& path);

// codes_stats.csv: split,sample_index,support_size,residual_norm
void write_codes_stats(std::span<const omp::SparseCode> train,
                       std::span<const omp::SparseCode> test,
                       const std::filesystem::path& path);

// Everything needed to classify new images: projection, dictionary,
// OVR weights and the scalar settings (meta.json).
struct ModelBundle {
  DenseMatrix projection;
  ksvd::Dictionary dictionary;
  svm::LinearSvmModel svm;
  SeedSet seeds;
};

void save_model_bundle(const ModelBundle& bundle, const std::filesystem::path& dir);
ModelBundle load_model_bundle(const std::filesystem::path& dir);

// Writes reconstruction_error.csv (recomputed from dictionary.smx,
// test_projected.smx and test_codes.smx) and rffd_curves.csv (quality-passing
// rows of report.csv). Throws DataError if the bundle is incomplete.
void emit_plots_data(const std::filesystem::path& dir);

inline constexpr const char* kIncompleteMarker = "INCOMPLETE";

}  // namespace sparsefx

#endif  // SPARSEFX_REPORTS_HPP_
