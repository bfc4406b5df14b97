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

#ifndef SPARSEFX_CONFIG_HPP_
#define SPARSEFX_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparsefx/dataset.hpp"
#include "sparsefx/ksvd.hpp"
#include "sparsefx/rffd.hpp"
#include "sparsefx/svm.hpp"

namespace sparsefx {

// Sparsity given either as an absolute atom count ("21") or as a percentage
// of the dictionary size ("15%", resolved as floor(pct * K / 100)).
struct SparsityLevel {
  bool percentage = true;
  double value = 15.0;

  static SparsityLevel parse(const std::string& text);
  std::string to_string() const;
  // Throws ConfigError if the result is < 1.
  Index resolve(Index atoms) const;
};

// Every stream seed used by a run, all derived from the master seed.
struct SeedSet {
  std::uint64_t master = 0;
  std::uint64_t split = 0;
  std::uint64_t rffd = 0;
  std::uint64_t rffd_cv = 0;
  std::uint64_t ksvd = 0;
  std::uint64_t svm_cv = 0;

  static SeedSet derive(std::uint64_t master);
};

inline rffd::RffdConfig default_rffd_config() {
  rffd::RffdConfig c;
  c.dims = {600, 650, 700, 750, 800, 900, 1000};
  return c;
}

struct PipelineConfig {
  std::vector<std::filesystem::path> manifests;
  std::optional<std::pair<Index, Index>> resize;
  SplitSpec split{20, 10, true, 0};
  rffd::RffdConfig rffd = default_rffd_config();
  SparsityLevel sparsity;
  ksvd::KsvdConfig ksvd;
  std::vector<double> c_grid = svm::default_c_grid();
  svm::CvSpec svm_cv = svm::CvSpec::leave_one_out();
  std::filesystem::path out_dir = "out";
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  // When false, results.json carries an empty stage_timings_ms object so
  // repeated runs are byte-identical.
  bool record_timings = true;

  // Copies the derived seeds into the split, rffd, ksvd and cv settings.
  SeedSet apply_seeds();
};

// Plain "key = value" lines; '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text, const std::string& source);
ConfigMap load_config_file(const std::filesystem::path& path);

// Overlays the recognised keys of values onto base. Unknown keys and
// malformed values raise ConfigError.
PipelineConfig apply_config(const ConfigMap& values, PipelineConfig base = {});

// The keys understood by apply_config.
const std::vector<std::string>& known_config_keys();

}  // namespace sparsefx

#endif  // SPARSEFX_CONFIG_HPP_
