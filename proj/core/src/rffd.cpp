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

#include "sparsefx/rffd.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sparsefx/errors.hpp"
#include "sparsefx/parallel.hpp"
#include "sparsefx/random.hpp"

namespace sparsefx::rffd {

DenseMatrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix m(rows, cols);
  double* v = m.data();
  for (Index i = 0; i < m.size(); ++i) v[i] = rng.normal();
  return m;
}

ProjectionCandidate generate_candidate(Index d, Index m, std::uint64_t seed,
                                       const MatrixSource& source) {
  if (m < 1 || d < 1 || m > d) {
    throw ConfigError("projection: need 1 <= m <= d (m=" + std::to_string(m) +
                      ", d=" + std::to_string(d) + ")");
  }
  ProjectionCandidate c;
  c.dim = m;
  c.seed = seed;
  c.projection = source ? source(m, d, seed) : gaussian_matrix(m, d, seed);
  if (c.projection.rows() != m || c.projection.cols() != d) {
    throw DimensionError("projection source returned a matrix of wrong shape");
  }
  for (Index r = 0; r < m; ++r) {
    const double norm = c.projection.row(r).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw NumericalError("projection row " + std::to_string(r) +
                           " cannot be normalized");
    }
    c.projection.row(r) /= norm;
  }
  return c;
}

DenseMatrix project(const DenseMatrix& projection, const DenseMatrix& data) {
  if (projection.cols() != data.rows()) {
    throw DimensionError("project: R has " + std::to_string(projection.cols()) +
                         " columns but data has " + std::to_string(data.rows()) +
                         " rows");
  }
  return projection * data;
}

bool quality_check(const DenseMatrix& projected, double threshold) {
  for (Index r = 0; r < projected.rows(); ++r) {
    if (!(projected.row(r).norm() > threshold)) return false;
  }
  return true;
}

double default_quality_threshold(const DenseMatrix& data, Index m) {
  const double scale = std::sqrt(static_cast<double>(m) *
                                 static_cast<double>(std::max<Index>(1, data.cols())));
  return 1e-8 * data.norm() / scale;
}

std::uint64_t candidate_seed(std::uint64_t master, Index m, Index index) {
  return derive_seed(master, static_cast<std::uint64_t>(m),
                     static_cast<std::uint64_t>(index));
}

void RffdConfig::validate(Index d) const {
  if (dims.empty()) throw ConfigError("rffd: no candidate dimensions given");
  std::set<Index> seen;
  for (Index m : dims) {
    if (m < 1 || m > d) {
      throw ConfigError("rffd: candidate dimension " + std::to_string(m) +
                        " outside [1, " + std::to_string(d) + "]");
    }
    if (!seen.insert(m).second) {
      throw ConfigError("rffd: duplicate candidate dimension " +
                        std::to_string(m));
    }
  }
  if (candidates_per_dim < 1) {
    throw ConfigError("rffd: candidates per dimension must be >= 1");
  }
  if (quality_threshold && !(*quality_threshold >= 0.0)) {
    throw ConfigError("rffd: quality threshold must be >= 0");
  }
  if (!(svm_C > 0.0)) throw ConfigError("rffd: svm C must be > 0");
}

SearchResult search(const LabeledDataset& ds, const RffdConfig& cfg) {
  ds.validate();
  cfg.validate(ds.dim());
  {
    const auto counts = ds.class_counts();
    const auto present = std::count_if(counts.begin(), counts.end(),
                                       [](Index c) { return c > 0; });
    if (present < 2) throw DataError("rffd: need at least two classes");
  }

  const Index per_dim = cfg.candidates_per_dim;
  const std::size_t total = cfg.dims.size() * static_cast<std::size_t>(per_dim);
  std::vector<CandidateScore> report(total);

  // Each task owns slot i; reduction below runs in fixed (m, index) order.
  parallel_for(total, cfg.threads, [&](std::size_t i) {
    const Index m = cfg.dims[i / per_dim];
    const Index index = static_cast<Index>(i % per_dim);
    CandidateScore& row = report[i];
    row.m = m;
    row.index = index;
    row.seed = candidate_seed(cfg.master_seed, m, index);
    const ProjectionCandidate cand =
        generate_candidate(ds.dim(), m, row.seed, cfg.source);
    const DenseMatrix a = project(cand.projection, ds.features);
    const double threshold = cfg.quality_threshold
                                 ? *cfg.quality_threshold
                                 : default_quality_threshold(ds.features, m);
    row.quality_ok = quality_check(a, threshold) && a.allFinite();
    if (row.quality_ok) {
      row.cv_accuracy = svm::cross_validate(a, ds.labels, ds.num_classes(),
                                            cfg.svm_C, cfg.cv)
                            .mean_accuracy;
    }
  });

  std::ptrdiff_t global = -1;
  for (std::size_t k = 0; k < cfg.dims.size(); ++k) {
    std::ptrdiff_t local = -1;
    for (Index j = 0; j < per_dim; ++j) {
      const std::size_t i = k * per_dim + static_cast<std::size_t>(j);
      if (!report[i].cv_accuracy) continue;
      if (local < 0 || *report[i].cv_accuracy > *report[local].cv_accuracy) {
        local = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (local < 0) continue;
    report[local].winner_for_m = true;
    if (global < 0) {
      global = local;
      continue;
    }
    const auto& cur = report[local];
    const auto& best = report[global];
    if (*cur.cv_accuracy > *best.cv_accuracy ||
        (*cur.cv_accuracy == *best.cv_accuracy && cur.m < best.m)) {
      global = local;
    }
  }
  if (global < 0) {
    throw NumericalError("rffd: every candidate failed the quality check");
  }
  report[global].global_winner = true;

  SearchResult result;
  const CandidateScore& win = report[global];
  result.best = generate_candidate(ds.dim(), win.m, win.seed, cfg.source);
  result.best.index = win.index;
  result.best.quality_ok = true;
  result.best.cv_accuracy = win.cv_accuracy;
  result.projected = ds;
  result.projected.features = project(result.best.projection, ds.features);
  result.report = std::move(report);
  return result;
}

}  // namespace sparsefx::rffd
