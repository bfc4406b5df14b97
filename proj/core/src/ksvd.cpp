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

#include "sparsefx/ksvd.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "sparsefx/errors.hpp"
#include "sparsefx/omp.hpp"
#include "sparsefx/random.hpp"

namespace sparsefx::ksvd {

void KsvdConfig::validate() const {
  if (max_iters < 1) throw ConfigError("ksvd: max_iters must be >= 1");
  if (!(rel_tol >= 0.0)) throw ConfigError("ksvd: rel_tol must be >= 0");
}

Dictionary init_dictionary(const DenseMatrix& train) {
  if (train.rows() < 1 || train.cols() < 1) {
    throw DimensionError("ksvd: empty training matrix");
  }
  Dictionary dict;
  dict.atoms = train;
  for (Index j = 0; j < train.cols(); ++j) {
    const double norm = train.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DataError("ksvd: training column " + std::to_string(j) +
                      " is zero and cannot seed an atom");
    }
    dict.atoms.col(j) /= norm;
  }
  return dict;
}

double objective(const DenseMatrix& dict, const DenseMatrix& signals,
                 const DenseMatrix& codes) {
  if (dict.rows() != signals.rows() || dict.cols() != codes.rows() ||
      signals.cols() != codes.cols()) {
    throw DimensionError("ksvd objective: shapes are not conformable");
  }
  return (signals - dict * codes).squaredNorm();
}

RankOne rank_one_approximation(const DenseMatrix& m, const Vector& start,
                               double tol, Index max_iters) {
  RankOne out;
  const double start_norm = start.norm();
  if (!(start_norm > 0.0)) throw NumericalError("rank-one: zero start vector");
  Vector u = start / start_norm;
  for (Index it = 0; it < max_iters; ++it) {
    out.iterations = it + 1;
    const Vector next = m * (m.transpose() * u);
    const double norm = next.norm();
    if (!(norm > 0.0)) break;  // u is orthogonal to the range of m
    const Vector un = next / norm;
    const double change = (un - u).norm();
    u = un;
    if (change < tol) break;
  }
  if (u.dot(start) < 0.0) u = -u;
  out.left = u;
  out.right = m.transpose() * u;
  return out;
}

Index update_atoms(DenseMatrix& dict, DenseMatrix& codes,
                   const DenseMatrix& signals, const KsvdConfig& cfg,
                   std::uint64_t sweep_seed) {
  const Index k_atoms = dict.cols();
  const Index n_signals = signals.cols();
  DenseMatrix residual = signals - dict * codes;
  std::set<Index> used_for_replacement;
  Rng rng(sweep_seed);
  Index replaced = 0;

  for (Index j = 0; j < k_atoms; ++j) {
    std::vector<Index> users;
    for (Index i = 0; i < n_signals; ++i) {
      if (codes(j, i) != 0.0) users.push_back(i);
    }

    if (users.empty()) {
      if (cfg.unused_atoms == UnusedAtomPolicy::kKeep) continue;
      // Worst-reconstructed signal not yet used as a replacement this sweep.
      Index worst = -1;
      double worst_err = -1.0;
      for (Index i = 0; i < n_signals; ++i) {
        if (used_for_replacement.count(i) || !(signals.col(i).norm() > 0.0)) {
          continue;
        }
        const double e = residual.col(i).squaredNorm();
        if (e > worst_err) {
          worst_err = e;
          worst = i;
        }
      }
      if (worst < 0) continue;
      if (worst_err == 0.0) {
        // Everything is reconstructed exactly; pick any usable signal.
        std::vector<Index> pool;
        for (Index i = 0; i < n_signals; ++i) {
          if (!used_for_replacement.count(i) && signals.col(i).norm() > 0.0) {
            pool.push_back(i);
          }
        }
        worst = pool[rng.below(pool.size())];
      }
      used_for_replacement.insert(worst);
      dict.col(j) = signals.col(worst) / signals.col(worst).norm();
      ++replaced;
      continue;
    }

    const Index m = static_cast<Index>(users.size());
    DenseMatrix restricted(dict.rows(), m);
    for (Index k = 0; k < m; ++k) {
      restricted.col(k) =
          residual.col(users[k]) + dict.col(j) * codes(j, users[k]);
    }
    const Vector old_atom = dict.col(j);
    const RankOne fit = rank_one_approximation(restricted, old_atom);
    dict.col(j) = fit.left;
    for (Index k = 0; k < m; ++k) {
      codes(j, users[k]) = fit.right(k);
      residual.col(users[k]) = restricted.col(k) - fit.left * fit.right(k);
    }
  }
  return replaced;
}

KsvdResult refine(const Dictionary& initial, const DenseMatrix& signals,
                  Index sparsity, const KsvdConfig& cfg) {
  cfg.validate();
  if (signals.rows() != initial.dim()) {
    throw DimensionError("ksvd: signals have " + std::to_string(signals.rows()) +
                         " rows, dictionary atoms have " +
                         std::to_string(initial.dim()));
  }
  omp::check_unit_atoms(initial.atoms, 1e-6);

  KsvdResult result;
  result.dictionary = initial;
  result.dictionary.sparsity = sparsity;
  result.dictionary.training_log.clear();
  DenseMatrix& dict = result.dictionary.atoms;
  DenseMatrix& codes = result.codes;

  double previous = std::numeric_limits<double>::infinity();
  for (Index it = 1; it <= cfg.max_iters; ++it) {
    codes = omp::batch_encode(dict, signals, sparsity, 0.0, cfg.threads);
    IterationLog log;
    log.iteration = it;
    log.objective_before_sweep = objective(dict, signals, codes);
    log.atoms_replaced = update_atoms(dict, codes, signals, cfg,
                                      derive_seed(cfg.seed, static_cast<std::uint64_t>(it)));
    log.objective = objective(dict, signals, codes);
    if (!std::isfinite(log.objective) || !dict.allFinite()) {
      throw NumericalError("ksvd: non-finite values at iteration " +
                           std::to_string(it));
    }
    result.dictionary.training_log.push_back(log);
    if (log.objective == 0.0) break;
    if (std::isfinite(previous) &&
        previous - log.objective < cfg.rel_tol * previous) {
      break;
    }
    previous = log.objective;
  }
  return result;
}

}  // namespace sparsefx::ksvd
