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

#include <benchmark/benchmark.h>

#include "sparsefx/rffd.hpp"

namespace {

using namespace sparsefx;

// Candidate generation and projection at the 138x128 crop size.
void BM_GenerateCandidate(benchmark::State& state) {
  const Index m = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rffd::generate_candidate(17664, m, seed++));
  }
}
BENCHMARK(BM_GenerateCandidate)->Arg(600)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
  const rffd::ProjectionCandidate c = rffd::generate_candidate(17664, 700, 1);
  const DenseMatrix x = rffd::gaussian_matrix(17664, 143, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rffd::project(c.projection, x));
  }
}
BENCHMARK(BM_Project)->Unit(benchmark::kMillisecond);

}  // namespace
