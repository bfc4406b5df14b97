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

#include "sparsefx/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "sparsefx/errors.hpp"

namespace sparsefx {
namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'M', 'X', '1'};

void put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32(const std::uint8_t* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

void put_f64(std::uint8_t* out, double d) {
  auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(bits >> (8 * i));
}

double get_f64(const std::uint8_t* in) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_smx(const DenseMatrix& m) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (m.rows() == 0 || m.cols() == 0) {
    std::ostringstream msg;
    msg << "SMX1: refusing to write empty " << m.rows() << "x" << m.cols()
        << " matrix";
    throw DimensionError(msg.str());
  }
  if (static_cast<std::uint64_t>(m.rows()) > kMax ||
      static_cast<std::uint64_t>(m.cols()) > kMax) {
    throw DimensionError("SMX1: dimension exceeds 32-bit range");
  }
  if (!m.allFinite()) throw DataError("SMX1: matrix contains NaN or Inf");

  const std::size_t count = static_cast<std::size_t>(m.size());
  std::vector<std::uint8_t> out(kSmxHeaderBytes + 8 * count, 0);
  std::memcpy(out.data(), kMagic, 4);
  put_u32(out.data() + 4, static_cast<std::uint32_t>(m.rows()));
  put_u32(out.data() + 8, static_cast<std::uint32_t>(m.cols()));
  const double* values = m.data();  // column-major
  for (std::size_t i = 0; i < count; ++i) {
    put_f64(out.data() + kSmxHeaderBytes + 8 * i, values[i]);
  }
  return out;
}

DenseMatrix decode_smx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSmxHeaderBytes) {
    throw DataError("SMX1: truncated header (" + std::to_string(bytes.size()) +
                    " bytes)");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw DataError("SMX1: bad magic");
  }
  const std::uint32_t rows = get_u32(bytes.data() + 4);
  const std::uint32_t cols = get_u32(bytes.data() + 8);
  if (get_u32(bytes.data() + 12) != 0) {
    throw DataError("SMX1: reserved header field is not zero");
  }
  if (rows == 0 || cols == 0) {
    throw DimensionError("SMX1: empty " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " matrix");
  }
  const std::uint64_t count = std::uint64_t{rows} * cols;
  if (count > (std::numeric_limits<std::size_t>::max() - kSmxHeaderBytes) / 8 ||
      count > static_cast<std::uint64_t>(std::numeric_limits<Index>::max())) {
    throw DimensionError("SMX1: dimension overflow");
  }
  const std::size_t expected = kSmxHeaderBytes + 8 * static_cast<std::size_t>(count);
  if (bytes.size() < expected) {
    throw DataError("SMX1: truncated payload (expected " +
                    std::to_string(expected) + " bytes, got " +
                    std::to_string(bytes.size()) + ")");
  }
  if (bytes.size() > expected) {
    throw DataError("SMX1: trailing bytes after payload");
  }
  DenseMatrix m(rows, cols);
  double* values = m.data();
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = get_f64(bytes.data() + kSmxHeaderBytes + 8 * i);
  }
  if (!m.allFinite()) throw DataError("SMX1: payload contains NaN or Inf");
  return m;
}

void save_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
  const auto bytes = encode_smx(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_smx(bytes);
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace sparsefx
