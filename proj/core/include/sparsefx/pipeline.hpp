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

#ifndef SPARSEFX_PIPELINE_HPP_
#define SPARSEFX_PIPELINE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "sparsefx/config.hpp"
#include "sparsefx/dataset.hpp"
#include "sparsefx/ksvd.hpp"
#include "sparsefx/metrics.hpp"
#include "sparsefx/omp.hpp"
#include "sparsefx/rffd.hpp"
#include "sparsefx/svm.hpp"

namespace sparsefx {

struct PipelineResult {
  SeedSet seeds;
  Index train_size = 0;
  Index test_size = 0;
  rffd::SearchResult rffd;
  DenseMatrix test_projected;
  ksvd::Dictionary dictionary;
  Index sparsity = 0;
  DenseMatrix train_codes;
  DenseMatrix test_codes;
  std::vector<omp::SparseCode> train_code_details;
  std::vector<omp::SparseCode> test_code_details;
  svm::GridSearchResult grid;
  svm::LinearSvmModel model;
  std::vector<int> test_labels;
  std::vector<int> predicted;
  RecognitionRates rates;
  std::vector<std::pair<std::string, double>> stage_timings_ms;
};

// Loads the configured manifests and runs the full chain:
// split -> projection search -> dictionary init -> K-SVD -> OMP codes ->
// SVM grid search and training -> evaluation. Outputs go to cfg.out_dir.
// On failure the directory receives an INCOMPLETE marker naming the stage
// and the error is rethrown with the stage prepended.
PipelineResult run_pipeline(const PipelineConfig& cfg);
PipelineResult run_pipeline(const LabeledDataset& ds, const PipelineConfig& cfg);

// results.json text (schema 1). Without timings, stage_timings_ms is an
// empty object.
std::string results_json(const PipelineResult& result, bool with_timings);

}  // namespace sparsefx

#endif  // SPARSEFX_PIPELINE_HPP_
