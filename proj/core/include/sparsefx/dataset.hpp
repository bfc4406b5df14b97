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

#ifndef SPARSEFX_DATASET_HPP_
#define SPARSEFX_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparsefx/matrix.hpp"

namespace sparsefx {

// Feature matrix (d x N, one sample per column) with per-sample class labels
// and optional subject identities.
struct LabeledDataset {
  DenseMatrix features;
  std::vector<int> labels;
  // Empty when the source carried no identity column.
  std::vector<std::string> identities;
  std::vector<std::string> class_names;

  Index dim() const { return features.rows(); }
  Index size() const { return features.cols(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
  bool has_identities() const { return !identities.empty(); }

  // Throws DataError when the invariants do not hold. Splits may legally
  // produce an empty partition, hence allow_empty.
  void validate(bool allow_empty = false) const;

  LabeledDataset select(std::span<const Index> columns) const;
  std::vector<Index> class_counts() const;
};

struct ManifestOptions {
  // Target (width, height); every image is resampled when set. Needed when
  // concatenating corpora with different crop sizes.
  std::optional<std::pair<Index, Index>> resize;
  unsigned threads = 1;
};

// Reads a CSV manifest with header "path,label[,identity]". Relative paths
// are resolved against the manifest's directory. Class names are ordered by
// first appearance.
LabeledDataset load_manifest(const std::filesystem::path& manifest,
                             const ManifestOptions& options = {});

// Loads several manifests and concatenates them, merging class names.
LabeledDataset load_manifests(std::span<const std::filesystem::path> manifests,
                              const ManifestOptions& options = {});

LabeledDataset concatenate(const LabeledDataset& a, const LabeledDataset& b);

struct SplitSpec {
  Index per_class_train = 0;
  Index per_class_test = 0;
  bool identity_disjoint = false;
  std::uint64_t shuffle_seed = 0;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
};

// Picks exactly per_class_train / per_class_test samples of every class.
// With identity_disjoint, subjects are first partitioned so that no subject
// appears on both sides. Both partitions come out shuffled.
Split split(const LabeledDataset& ds, const SplitSpec& spec);

// A dataset on disk: <prefix>.smx holds the features, <prefix>.json the
// labels, identities and class names.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir,
                  const std::string& prefix);
LabeledDataset load_dataset(const std::filesystem::path& dir,
                            const std::string& prefix);

}  // namespace sparsefx

#endif  // SPARSEFX_DATASET_HPP_
