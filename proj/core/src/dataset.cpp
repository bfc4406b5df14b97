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

#include "sparsefx/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/image_io.hpp"
#include "sparsefx/matrix_io.hpp"
#include "sparsefx/parallel.hpp"
#include "sparsefx/random.hpp"

namespace sparsefx {

void LabeledDataset::validate(bool allow_empty) const {
  if (!allow_empty && (size() < 1 || dim() < 1)) {
    throw DataError("dataset must have at least one sample and one feature");
  }
  if (static_cast<Index>(labels.size()) != size()) {
    throw DataError("dataset has " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(size()) + " samples");
  }
  if (has_identities() && static_cast<Index>(identities.size()) != size()) {
    throw DataError("dataset identity count does not match sample count");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes()) {
      throw DataError("sample " + std::to_string(i) + " has label " +
                      std::to_string(labels[i]) + " outside the " +
                      std::to_string(num_classes()) + " known classes");
    }
  }
  if (!features.allFinite()) throw DataError("dataset features are not finite");
}

LabeledDataset LabeledDataset::select(std::span<const Index> columns) const {
  LabeledDataset out;
  out.class_names = class_names;
  out.features.resize(dim(), static_cast<Index>(columns.size()));
  out.labels.reserve(columns.size());
  if (has_identities()) out.identities.reserve(columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const Index c = columns[k];
    out.features.col(static_cast<Index>(k)) = features.col(c);
    out.labels.push_back(labels[c]);
    if (has_identities()) out.identities.push_back(identities[c]);
  }
  return out;
}

std::vector<Index> LabeledDataset::class_counts() const {
  std::vector<Index> counts(class_names.size(), 0);
  for (int l : labels) ++counts[l];
  return counts;
}

LabeledDataset load_manifest(const std::filesystem::path& manifest,
                             const ManifestOptions& options) {
  const csv::Table table = csv::read(manifest);
  const std::string name = manifest.string();
  const int path_col = table.column("path");
  const int label_col = table.column("label");
  const int identity_col = table.column("identity");
  if (path_col < 0) throw DataError(name + ": manifest has no 'path' column");
  if (label_col < 0) throw DataError(name + ": manifest has no 'label' column");
  if (table.rows.empty()) throw DataError(name + ": manifest has no rows");

  const auto base = manifest.parent_path();
  const std::size_t n = table.rows.size();
  auto where = [&](std::size_t r) {
    return name + " row " + std::to_string(r + 1) + " (line " +
           std::to_string(table.line_numbers[r]) + ")";
  };

  LabeledDataset ds;
  std::map<std::string, int> class_index;
  std::vector<std::filesystem::path> paths(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    if (row[path_col].empty()) throw DataError(where(r) + ": empty path");
    if (row[label_col].empty()) throw DataError(where(r) + ": empty label");
    std::filesystem::path p(row[path_col]);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::is_regular_file(p)) {
      throw DataError(where(r) + ": missing file " + p.string());
    }
    paths[r] = p;
    auto [it, inserted] = class_index.try_emplace(
        row[label_col], static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(row[label_col]);
    ds.labels.push_back(it->second);
    if (identity_col >= 0) ds.identities.push_back(row[identity_col]);
  }

  std::vector<GrayImage> images(n);
  std::vector<std::string> failures(n);
  parallel_for(n, options.threads, [&](std::size_t r) {
    try {
      images[r] = read_gray_image(paths[r]);
      if (options.resize) {
        images[r] = resize_bilinear(images[r], options.resize->first,
                                    options.resize->second);
      }
    } catch (const Error& e) {
      failures[r] = e.what();
    }
  });
  for (std::size_t r = 0; r < n; ++r) {
    if (!failures[r].empty()) throw DataError(where(r) + ": " + failures[r]);
  }

  const Index w = images[0].width;
  const Index h = images[0].height;
  ds.features.resize(w * h, static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (images[r].width != w || images[r].height != h) {
      std::ostringstream msg;
      msg << where(r) << ": image is " << images[r].width << "x"
          << images[r].height << ", expected " << w << "x" << h
          << " (set a common resize to mix crop sizes)";
      throw DataError(msg.str());
    }
    ds.features.col(static_cast<Index>(r)) = flatten_columnwise(images[r]);
  }
  ds.validate();
  return ds;
}

LabeledDataset concatenate(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("cannot concatenate datasets with feature dimensions " +
                         std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()) +
                         "; resize images to a common crop size");
  }
  LabeledDataset out;
  out.class_names = a.class_names;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < a.class_names.size(); ++i) {
    index[a.class_names[i]] = static_cast<int>(i);
  }
  std::vector<int> remap(b.class_names.size());
  for (std::size_t i = 0; i < b.class_names.size(); ++i) {
    auto [it, inserted] =
        index.try_emplace(b.class_names[i], static_cast<int>(out.class_names.size()));
    if (inserted) out.class_names.push_back(b.class_names[i]);
    remap[i] = it->second;
  }
  out.features.resize(a.dim(), a.size() + b.size());
  out.features << a.features, b.features;
  out.labels = a.labels;
  for (int l : b.labels) out.labels.push_back(remap[l]);
  if (a.has_identities() || b.has_identities()) {
    out.identities = a.has_identities()
                         ? a.identities
                         : std::vector<std::string>(a.labels.size());
    if (b.has_identities()) {
      out.identities.insert(out.identities.end(), b.identities.begin(),
                            b.identities.end());
    } else {
      out.identities.resize(out.labels.size());
    }
  }
  return out;
}

LabeledDataset load_manifests(std::span<const std::filesystem::path> manifests,
                              const ManifestOptions& options) {
  if (manifests.empty()) throw ConfigError("no manifest given");
  LabeledDataset ds = load_manifest(manifests[0], options);
  for (std::size_t i = 1; i < manifests.size(); ++i) {
    ds = concatenate(ds, load_manifest(manifests[i], options));
  }
  return ds;
}

namespace {

std::vector<std::vector<Index>> members_by_class(const LabeledDataset& ds) {
  std::vector<std::vector<Index>> members(ds.class_names.size());
  for (Index i = 0; i < ds.size(); ++i) members[ds.labels[i]].push_back(i);
  return members;
}

// Partitions subject identities into a test group and a train group so that
// every class keeps enough samples on each side. Returns false if no
// partition was found.
bool partition_identities(const LabeledDataset& ds, const SplitSpec& spec,
                          Rng& rng, std::set<std::string>& test_ids) {
  std::map<std::string, std::vector<Index>> per_identity;
  for (Index i = 0; i < ds.size(); ++i) {
    auto& counts = per_identity[ds.identities[i]];
    counts.resize(ds.class_names.size(), 0);
    ++counts[ds.labels[i]];
  }
  std::vector<std::string> ids;
  for (const auto& [id, counts] : per_identity) ids.push_back(id);
  const std::size_t classes = ds.class_names.size();
  const std::vector<Index> totals = ds.class_counts();

  constexpr int kAttempts = 256;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    rng.shuffle(std::span<std::string>(ids));
    test_ids.clear();
    std::vector<Index> test_need(classes, spec.per_class_test);
    std::vector<Index> test_have(classes, 0);
    for (const auto& id : ids) {
      const auto& counts = per_identity[id];
      bool useful = false;
      for (std::size_t c = 0; c < classes; ++c) {
        if (test_need[c] > 0 && counts[c] > 0) useful = true;
      }
      if (!useful) continue;
      test_ids.insert(id);
      for (std::size_t c = 0; c < classes; ++c) {
        test_have[c] += counts[c];
        test_need[c] = std::max<Index>(0, test_need[c] - counts[c]);
      }
    }
    if (std::any_of(test_need.begin(), test_need.end(),
                    [](Index v) { return v > 0; })) {
      return false;
    }
    bool ok = true;
    for (std::size_t c = 0; c < classes; ++c) {
      if (totals[c] - test_have[c] < spec.per_class_train) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

Split split(const LabeledDataset& ds, const SplitSpec& spec) {
  ds.validate();
  if (spec.per_class_train < 0 || spec.per_class_test < 0) {
    throw ConfigError("split: per-class counts must be non-negative");
  }
  const auto members = members_by_class(ds);
  for (std::size_t c = 0; c < members.size(); ++c) {
    const Index need = spec.per_class_train + spec.per_class_test;
    if (static_cast<Index>(members[c].size()) < need) {
      throw DataError("split: class '" + ds.class_names[c] + "' has " +
                      std::to_string(members[c].size()) + " samples, " +
                      std::to_string(need) + " requested");
    }
  }

  Rng rng(spec.shuffle_seed);
  std::vector<Index> train_cols;
  std::vector<Index> test_cols;
  if (!spec.identity_disjoint) {
    for (auto idx : members) {
      rng.shuffle(std::span<Index>(idx));
      train_cols.insert(train_cols.end(), idx.begin(),
                        idx.begin() + spec.per_class_train);
      test_cols.insert(test_cols.end(), idx.begin() + spec.per_class_train,
                       idx.begin() + spec.per_class_train + spec.per_class_test);
    }
  } else {
    if (!ds.has_identities()) {
      throw ConfigError("split: identity-disjoint split requested but the "
                        "dataset has no identity column");
    }
    std::set<std::string> test_ids;
    if (!partition_identities(ds, spec, rng, test_ids)) {
      throw DataError("split: identity-disjoint split infeasible for " +
                      std::to_string(spec.per_class_train) + " train / " +
                      std::to_string(spec.per_class_test) +
                      " test samples per class");
    }
    for (const auto& idx : members) {
      std::vector<Index> in_train;
      std::vector<Index> in_test;
      for (Index i : idx) {
        (test_ids.count(ds.identities[i]) ? in_test : in_train).push_back(i);
      }
      rng.shuffle(std::span<Index>(in_train));
      rng.shuffle(std::span<Index>(in_test));
      train_cols.insert(train_cols.end(), in_train.begin(),
                        in_train.begin() + spec.per_class_train);
      test_cols.insert(test_cols.end(), in_test.begin(),
                       in_test.begin() + spec.per_class_test);
    }
  }
  rng.shuffle(std::span<Index>(train_cols));
  rng.shuffle(std::span<Index>(test_cols));
  return {ds.select(train_cols), ds.select(test_cols)};
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir,
                  const std::string& prefix) {
  ds.validate(/*allow_empty=*/true);
  std::filesystem::create_directories(dir);
  nlohmann::json meta;
  meta["dim"] = ds.dim();
  meta["size"] = ds.size();
  meta["class_names"] = ds.class_names;
  meta["labels"] = ds.labels;
  meta["identities"] = ds.identities;
  if (ds.size() > 0) save_matrix(ds.features, dir / (prefix + ".smx"));
  std::ofstream out(dir / (prefix + ".json"), std::ios::trunc);
  if (!out) throw DataError("cannot write " + (dir / (prefix + ".json")).string());
  out << meta.dump(2) << '\n';
}

LabeledDataset load_dataset(const std::filesystem::path& dir,
                            const std::string& prefix) {
  const auto meta_path = dir / (prefix + ".json");
  std::ifstream in(meta_path);
  if (!in) throw DataError("cannot open " + meta_path.string());
  LabeledDataset ds;
  try {
    const auto meta = nlohmann::json::parse(in);
    ds.class_names = meta.at("class_names").get<std::vector<std::string>>();
    ds.labels = meta.at("labels").get<std::vector<int>>();
    ds.identities = meta.at("identities").get<std::vector<std::string>>();
    const Index size = meta.at("size").get<Index>();
    const Index dim = meta.at("dim").get<Index>();
    if (size > 0) {
      ds.features = load_matrix(dir / (prefix + ".smx"));
      if (ds.features.rows() != dim || ds.features.cols() != size) {
        throw DimensionError(meta_path.string() +
                             ": matrix shape disagrees with metadata");
      }
    } else {
      ds.features.resize(dim, 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(meta_path.string() + ": " + e.what());
  }
  ds.validate(/*allow_empty=*/true);
  return ds;
}

}  // namespace sparsefx
