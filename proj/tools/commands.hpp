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

#ifndef SPARSEFX_TOOLS_COMMANDS_HPP_
#define SPARSEFX_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsefx/config.hpp"

namespace sparsefx::cli {

// Flags shared by every subcommand. Precedence: flags > --set > --config
// file > built-in defaults.
struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;  // key=value
  std::vector<std::string> manifests;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

PipelineConfig resolve_config(const CommonOptions& options);

struct ProjectOptions {
  std::string method = "rffd";  // rffd | pca
  long dim = 0;                 // pca only; 0 = smallest rffd.dims entry
};

struct SynthOptions {
  std::string kind = "blobs";  // blobs | dictionary
  // dictionary
  long n = 20, K = 50, L = 3, N = 1500;
  double noise = 0.0;
  // blobs
  int classes = 3;
  long per_class = 80, width = 6, height = 10, subjects = 20;
  double sigma = 0.02, separation = 10.0;
};

void ingest(const PipelineConfig& cfg);
void project(const PipelineConfig& cfg, const ProjectOptions& options);
void train_dict(const PipelineConfig& cfg);
void encode(const PipelineConfig& cfg);
void train_svm(const PipelineConfig& cfg);
void evaluate(const PipelineConfig& cfg);
void pipeline(const PipelineConfig& cfg);
void synth(const PipelineConfig& cfg, const SynthOptions& options);

}  // namespace sparsefx::cli

#endif  // SPARSEFX_TOOLS_COMMANDS_HPP_
