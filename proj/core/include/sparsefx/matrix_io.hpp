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

#ifndef SPARSEFX_MATRIX_IO_HPP_
#define SPARSEFX_MATRIX_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sparsefx/matrix.hpp"

namespace sparsefx {

// SMX1 binary matrix format:
//   bytes  0-3   magic "SMX1"
//   bytes  4-7   rows, uint32 little-endian
//   bytes  8-11  cols, uint32 little-endian
//   bytes 12-15  reserved, zero
//   then rows*cols IEEE-754 binary64 values, little-endian, column-major.
inline constexpr std::size_t kSmxHeaderBytes = 16;

// Both directions reject empty matrices and non-finite entries with
// DimensionError / DataError. Round trips are bit-exact.
std::vector<std::uint8_t> encode_smx(const DenseMatrix& m);
DenseMatrix decode_smx(std::span<const std::uint8_t> bytes);

void save_matrix(const DenseMatrix& m, const std::filesystem::path& path);
DenseMatrix load_matrix(const std::filesystem::path& path);

}  // namespace sparsefx

#endif  // SPARSEFX_MATRIX_IO_HPP_
