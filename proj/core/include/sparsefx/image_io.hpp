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

#ifndef SPARSEFX_IMAGE_IO_HPP_
#define SPARSEFX_IMAGE_IO_HPP_

#include <filesystem>
#include <vector>

#include "sparsefx/matrix.hpp"

namespace sparsefx {

// Grayscale image with intensities scaled to [0, 1] by the bit-depth
// maximum of the source file. Pixels are stored row-major.
struct GrayImage {
  Index width = 0;
  Index height = 0;
  std::vector<double> pixels;

  double at(Index x, Index y) const { return pixels[y * width + x]; }
};

// Decodes binary/ASCII PGM (8 or 16 bit) and grayscale PNG, chosen by the
// file's magic bytes. Colour images are rejected.
GrayImage read_gray_image(const std::filesystem::path& path);

// Writes a binary PGM with the given maxval (255 or 65535).
void write_pgm(const GrayImage& image, const std::filesystem::path& path,
               int maxval = 65535);

GrayImage resize_bilinear(const GrayImage& image, Index width, Index height);

// Flattens column-wise: entry x * height + y holds pixel (x, y).
Vector flatten_columnwise(const GrayImage& image);
GrayImage unflatten_columnwise(const Vector& column, Index width,
                               Index height);

}  // namespace sparsefx

#endif  // SPARSEFX_IMAGE_IO_HPP_
