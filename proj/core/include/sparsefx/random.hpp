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

#ifndef SPARSEFX_RANDOM_HPP_
#define SPARSEFX_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace sparsefx {

std::uint64_t splitmix64(std::uint64_t x);

// Mixes a master seed with up to two integers (e.g. target dimension and
// candidate index) into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0);

// Mixes a master seed with a textual tag ("split", "ksvd", ...).
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

// Seeded generator with platform-independent output. The engine is
// std::mt19937_64; the distributions are implemented here because the
// standard ones are not specified bit-for-bit across library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Box-Muller).
  double normal();
  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sparsefx

#endif  // SPARSEFX_RANDOM_HPP_
