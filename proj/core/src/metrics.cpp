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

#include "sparsefx/metrics.hpp"

#include "sparsefx/errors.hpp"

namespace sparsefx {

RecognitionRates confusion_and_rates(std::span<const int> truth,
                                     std::span<const int> predicted,
                                     const std::vector<std::string>& class_names) {
  if (truth.size() != predicted.size()) {
    throw DimensionError("confusion: " + std::to_string(truth.size()) +
                         " true labels vs " + std::to_string(predicted.size()) +
                         " predictions");
  }
  const int k = static_cast<int>(class_names.size());
  RecognitionRates out;
  out.confusion.class_names = class_names;
  out.confusion.counts = CountMatrix::Zero(k, k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= k || predicted[i] < 0 || predicted[i] >= k) {
      throw DataError("confusion: label out of range at sample " +
                      std::to_string(i));
    }
    ++out.confusion.counts(truth[i], predicted[i]);
  }
  double sum = 0.0;
  int present = 0;
  out.per_class.resize(k);
  for (int c = 0; c < k; ++c) {
    const std::int64_t row = out.confusion.counts.row(c).sum();
    if (row == 0) continue;
    const double rate =
        static_cast<double>(out.confusion.counts(c, c)) / static_cast<double>(row);
    out.per_class[c] = rate;
    sum += rate;
    ++present;
  }
  if (present == 0) throw DataError("confusion: no test samples");
  out.average = sum / present;
  return out;
}

}  // namespace sparsefx
