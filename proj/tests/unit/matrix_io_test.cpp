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

#include <cstring>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/matrix_io.hpp"

namespace sparsefx {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("sparsefx_mio_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool bit_identical(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

std::uint32_t read_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

TEST(Smx, SmallMatrixLayout) {
  DenseMatrix m(2, 3);
  m << 1, 3, 5,
       2, 4, 6;  // column-major storage is 1..6
  const auto bytes = encode_smx(m);
  ASSERT_EQ(bytes.size(), 16u + 48u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SMX1");
  EXPECT_EQ(read_u32(bytes, 4), 2u);
  EXPECT_EQ(read_u32(bytes, 8), 3u);
  EXPECT_EQ(read_u32(bytes, 12), 0u);
  for (int k = 0; k < 6; ++k) {
    double v;
    std::memcpy(&v, bytes.data() + 16 + 8 * k, 8);
    EXPECT_EQ(v, k + 1.0);
  }
  // 1.0 little-endian: 00 00 00 00 00 00 f0 3f
  EXPECT_EQ(bytes[16 + 6], 0xf0);
  EXPECT_EQ(bytes[16 + 7], 0x3f);
  EXPECT_TRUE(bit_identical(decode_smx(bytes), m));
}

TEST(Smx, LargeFileRoundTrip) {
  Rng rng(7);
  const DenseMatrix m = testing::random_gaussian(700, 143, rng);
  const fs::path dir = temp_dir("large");
  save_matrix(m, dir / "a.smx");
  EXPECT_EQ(fs::file_size(dir / "a.smx"), 16u + 8u * 700u * 143u);
  EXPECT_TRUE(bit_identical(load_matrix(dir / "a.smx"), m));
}

TEST(Smx, EmptyMatrixRejected) {
  EXPECT_THROW(encode_smx(DenseMatrix(0, 0)), DimensionError);
  EXPECT_THROW(encode_smx(DenseMatrix(0, 4)), DimensionError);
  std::vector<std::uint8_t> header = {'S', 'M', 'X', '1', 0, 0, 0, 0,
                                      0,   0,   0,   0,   0, 0, 0, 0};
  EXPECT_THROW(decode_smx(header), DimensionError);
}

TEST(Smx, NonFiniteRejected) {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(encode_smx(m), DataError);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(encode_smx(m), DataError);

  auto bytes = encode_smx(DenseMatrix::Ones(1, 1));
  const double inf = std::numeric_limits<double>::infinity();
  std::memcpy(bytes.data() + 16, &inf, 8);
  EXPECT_THROW(decode_smx(bytes), DataError);
}

TEST(Smx, MalformedInputRejected) {
  const auto good = encode_smx(DenseMatrix::Ones(3, 2));
  auto bad_magic = good;
  bad_magic[3] = '2';
  EXPECT_THROW(decode_smx(bad_magic), DataError);

  auto reserved = good;
  reserved[13] = 1;
  EXPECT_THROW(decode_smx(reserved), DataError);

  auto truncated = good;
  truncated.pop_back();
  EXPECT_THROW(decode_smx(truncated), DataError);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(decode_smx(trailing), DataError);

  EXPECT_THROW(decode_smx(std::span<const std::uint8_t>(good.data(), 10)),
               DataError);
  EXPECT_THROW(load_matrix("/nonexistent/sparsefx.smx"), DataError);
}

TEST(Smx, HugeHeaderDoesNotAllocate) {
  std::vector<std::uint8_t> header = {'S',  'M',  'X',  '1',  0xff, 0xff,
                                      0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
                                      0,    0,    0,    0};
  EXPECT_THROW(decode_smx(header), DataError);
}

// Arbitrary shapes and awkward values (signed zeros, subnormals, extremes)
// must survive bit-for-bit.
TEST(SmxProperty, RandomRoundTripsAreBitExact) {
  Rng rng(2026);
  const double specials[] = {0.0,
                             -0.0,
                             std::numeric_limits<double>::denorm_min(),
                             -std::numeric_limits<double>::min(),
                             std::numeric_limits<double>::max(),
                             -std::numeric_limits<double>::max(),
                             std::numeric_limits<double>::epsilon()};
  for (int t = 0; t < 300; ++t) {
    const Index rows = 1 + static_cast<Index>(rng.below(40));
    const Index cols = 1 + static_cast<Index>(rng.below(40));
    DenseMatrix m = testing::random_gaussian(rows, cols, rng) *
                    std::pow(10.0, rng.uniform(-200, 200));
    for (Index k = 0; k < m.size(); ++k) {
      if (rng.below(5) == 0) m.data()[k] = specials[rng.below(7)];
    }
    const auto bytes = encode_smx(m);
    ASSERT_EQ(bytes.size(), kSmxHeaderBytes + 8 * static_cast<std::size_t>(m.size()));
    ASSERT_TRUE(bit_identical(decode_smx(bytes), m)) << "trial " << t;
  }
}

}  // namespace
}  // namespace sparsefx
