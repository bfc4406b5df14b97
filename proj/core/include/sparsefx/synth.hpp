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

#ifndef SPARSEFX_SYNTH_HPP_
#define SPARSEFX_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "sparsefx/dataset.hpp"
#include "sparsefx/matrix.hpp"

namespace sparsefx::synth {

// Planted sparse model Y = D X + noise.
struct SynthSpec {
  Index n = 0;  // signal dimension
  Index K = 0;  // atoms
  Index L = 0;  // nonzeros per signal
  Index N = 0;  // signals
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // When set, every nonzero coefficient takes this value instead of a
  // random sign times U[0.5, 1.5].
  std::optional<double> fixed_coefficient;

  void validate() const;
};

struct SynthData {
  DenseMatrix dictionary;  // n x K, unit-norm columns
  DenseMatrix codes;       // K x N, exactly L nonzeros per column
  DenseMatrix signals;     // n x N
};

SynthData generate(const SynthSpec& spec);

// Isotropic Gaussian classes whose means are pairwise at least
// separation * sigma apart. Samples are laid out as height x width images
// (dim = width * height) with intensities around 0.5.
struct BlobSpec {
  int classes = 3;
  Index width = 6;
  Index height = 10;
  Index per_class = 80;
  // Identities cycle through this many subjects inside each class.
  Index subjects = 20;
  double sigma = 0.02;
  double separation = 10.0;
  std::uint64_t seed = 0;

  Index dim() const { return width * height; }
  void validate() const;
};

LabeledDataset blobs(const BlobSpec& spec);

// Writes one 16-bit PGM per sample plus manifest.csv into dir and returns the
// manifest path.
std::filesystem::path write_image_corpus(const LabeledDataset& ds, Index width,
                                         Index height,
                                         const std::filesystem::path& dir);

}  // namespace sparsefx::synth

#endif  // SPARSEFX_SYNTH_HPP_
