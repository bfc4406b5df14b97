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

#include "sparsefx/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "csv.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/image_io.hpp"
#include "sparsefx/random.hpp"

namespace sparsefx::synth {

void SynthSpec::validate() const {
  if (n < 1 || K < 1 || N < 1) {
    throw ConfigError("synth: n, K and N must all be >= 1");
  }
  if (L < 1 || L > K) throw ConfigError("synth: need 1 <= L <= K");
  if (!(noise_sigma >= 0.0)) throw ConfigError("synth: noise_sigma must be >= 0");
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthData out;
  out.dictionary.resize(spec.n, spec.K);
  for (Index j = 0; j < spec.K; ++j) {
    double norm = 0.0;
    do {
      for (Index i = 0; i < spec.n; ++i) out.dictionary(i, j) = rng.normal();
      norm = out.dictionary.col(j).norm();
    } while (!(norm > 0.0));
    out.dictionary.col(j) /= norm;
  }

  out.codes = DenseMatrix::Zero(spec.K, spec.N);
  std::vector<Index> atoms(static_cast<std::size_t>(spec.K));
  for (Index i = 0; i < spec.N; ++i) {
    std::iota(atoms.begin(), atoms.end(), Index{0});
    // Partial Fisher-Yates: the first L entries are a uniform L-subset.
    for (Index k = 0; k < spec.L; ++k) {
      const Index pick = k + static_cast<Index>(rng.below(spec.K - k));
      std::swap(atoms[k], atoms[pick]);
    }
    for (Index k = 0; k < spec.L; ++k) {
      double value;
      if (spec.fixed_coefficient) {
        value = *spec.fixed_coefficient;
      } else {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        value = sign * rng.uniform(0.5, 1.5);
      }
      out.codes(atoms[k], i) = value;
    }
  }

  out.signals = out.dictionary * out.codes;
  if (spec.noise_sigma > 0.0) {
    for (Index i = 0; i < out.signals.size(); ++i) {
      out.signals.data()[i] += spec.noise_sigma * rng.normal();
    }
  }
  return out;
}

void BlobSpec::validate() const {
  if (classes < 2) throw ConfigError("blobs: need at least two classes");
  if (width < 1 || height < 1) throw ConfigError("blobs: empty image size");
  if (per_class < 1 || subjects < 1) {
    throw ConfigError("blobs: per_class and subjects must be >= 1");
  }
  if (!(sigma > 0.0) || !(separation > 0.0)) {
    throw ConfigError("blobs: sigma and separation must be > 0");
  }
}

LabeledDataset blobs(const BlobSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const Index d = spec.dim();

  DenseMatrix directions(d, spec.classes);
  for (int c = 0; c < spec.classes; ++c) {
    for (Index i = 0; i < d; ++i) directions(i, c) = rng.normal();
    directions.col(c).normalize();
  }
  double closest = std::numeric_limits<double>::infinity();
  for (int a = 0; a < spec.classes; ++a) {
    for (int b = a + 1; b < spec.classes; ++b) {
      closest = std::min(closest, (directions.col(a) - directions.col(b)).norm());
    }
  }
  if (!(closest > 0.0)) throw NumericalError("blobs: coincident class means");
  const double scale = spec.separation * spec.sigma / closest;

  LabeledDataset ds;
  for (int c = 0; c < spec.classes; ++c) {
    ds.class_names.push_back("class" + std::to_string(c));
  }
  ds.features.resize(d, spec.classes * spec.per_class);
  Index col = 0;
  for (int c = 0; c < spec.classes; ++c) {
    const Vector mean = Vector::Constant(d, 0.5) + scale * directions.col(c);
    for (Index s = 0; s < spec.per_class; ++s, ++col) {
      for (Index i = 0; i < d; ++i) {
        ds.features(i, col) =
            std::clamp(mean(i) + spec.sigma * rng.normal(), 0.0, 1.0);
      }
      ds.labels.push_back(c);
      ds.identities.push_back("subject" + std::to_string(s % spec.subjects));
    }
  }
  return ds;
}

std::filesystem::path write_image_corpus(const LabeledDataset& ds, Index width,
                                         Index height,
                                         const std::filesystem::path& dir) {
  if (ds.dim() != width * height) {
    throw DimensionError("corpus: feature dimension does not match image size");
  }
  std::filesystem::create_directories(dir / "images");
  const auto manifest = dir / "manifest.csv";
  std::ofstream out(manifest, std::ios::trunc);
  if (!out) throw DataError("cannot write " + manifest.string());
  out << "path,label" << (ds.has_identities() ? ",identity" : "") << '\n';
  for (Index i = 0; i < ds.size(); ++i) {
    std::ostringstream name;
    name << "images/img_" << std::setw(5) << std::setfill('0') << i << ".pgm";
    write_pgm(unflatten_columnwise(ds.features.col(i), width, height),
              dir / name.str());
    out << name.str() << ',' << csv::escape(ds.class_names[ds.labels[i]]);
    if (ds.has_identities()) out << ',' << csv::escape(ds.identities[i]);
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + manifest.string());
  return manifest;
}

}  // namespace sparsefx::synth
