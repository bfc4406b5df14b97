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

#ifndef SPARSEFX_METRICS_HPP_
#define SPARSEFX_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sparsefx {

using CountMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// counts(true, predicted).
struct ConfusionMatrix {
  CountMatrix counts;
  std::vector<std::string> class_names;

  std::int64_t total() const { return counts.sum(); }
};

struct RecognitionRates {
  ConfusionMatrix confusion;
  // Empty for classes without test samples.
  std::vector<std::optional<double>> per_class;
  // Unweighted mean over the classes that have test samples.
  double average = 0.0;
};

RecognitionRates confusion_and_rates(std::span<const int> truth,
                                     std::span<const int> predicted,
                                     const std::vector<std::string>& class_names);

}  // namespace sparsefx

#endif  // SPARSEFX_METRICS_HPP_
