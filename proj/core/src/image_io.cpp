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

#include "sparsefx/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sparsefx/errors.hpp"

namespace sparsefx {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PgmCursor {
 public:
  PgmCursor(const std::vector<std::uint8_t>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  // Header token parser: skips whitespace and '#' comments.
  long next_int() {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw DataError(name_ + ": malformed PGM header");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000L) throw DataError(name_ + ": PGM value too large");
    }
    return v;
  }

  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw DataError(name_ + ": malformed PGM header");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 2;
};

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes,
                     const std::string& name) {
  const bool binary = bytes[1] == '5';
  PgmCursor cursor(bytes, name);
  const long width = cursor.next_int();
  const long height = cursor.next_int();
  const long maxval = cursor.next_int();
  if (width <= 0 || height <= 0) throw DataError(name + ": empty PGM image");
  if (maxval <= 0 || maxval > 65535) {
    throw DataError(name + ": PGM maxval out of range");
  }
  GrayImage img;
  img.width = width;
  img.height = height;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  img.pixels.resize(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    cursor.skip_single_space();
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() - cursor.pos() < count * bpp) {
      throw DataError(name + ": truncated PGM pixel data");
    }
    const std::uint8_t* p = bytes.data() + cursor.pos();
    for (std::size_t i = 0; i < count; ++i) {
      long v = bpp == 1 ? p[i] : (p[2 * i] << 8) | p[2 * i + 1];
      if (v > maxval) throw DataError(name + ": PGM sample exceeds maxval");
      img.pixels[i] = v * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = cursor.next_int();
      if (v > maxval) throw DataError(name + ": PGM sample exceeds maxval");
      img.pixels[i] = v * scale;
    }
  }
  return img;
}

GrayImage decode_png(const std::vector<std::uint8_t>& bytes,
                     const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw DataError(name + ": " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_COLOR) {
    png_image_free(&image);
    throw DataError(name + ": colour PNG; grayscale input required");
  }
  const bool wide = (image.format & PNG_FORMAT_FLAG_LINEAR) != 0;
  image.format = wide ? PNG_FORMAT_LINEAR_Y : PNG_FORMAT_GRAY;
  GrayImage img;
  img.width = image.width;
  img.height = image.height;
  const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
  img.pixels.resize(count);
  if (wide) {
    std::vector<std::uint16_t> buffer(count);
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
      throw DataError(name + ": " + image.message);
    }
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = buffer[i] / 65535.0;
  } else {
    std::vector<std::uint8_t> buffer(count);
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
      throw DataError(name + ": " + image.message);
    }
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = buffer[i] / 255.0;
  }
  return img;
}

}  // namespace

GrayImage read_gray_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string name = path.string();
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2')) {
    return decode_pgm(bytes, name);
  }
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return decode_png(bytes, name);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6')) {
    throw DataError(name + ": colour PPM; grayscale input required");
  }
  throw DataError(name + ": unsupported image format (expected PGM or PNG)");
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path,
               int maxval) {
  if (maxval != 255 && maxval != 65535) {
    throw ConfigError("write_pgm: maxval must be 255 or 65535");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width << ' ' << image.height << '\n' << maxval << '\n';
  for (double v : image.pixels) {
    const long q = std::lround(std::clamp(v, 0.0, 1.0) * maxval);
    if (maxval == 255) {
      out.put(static_cast<char>(q));
    } else {
      out.put(static_cast<char>(q >> 8));
      out.put(static_cast<char>(q & 0xff));
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

GrayImage resize_bilinear(const GrayImage& image, Index width, Index height) {
  if (width <= 0 || height <= 0) throw ConfigError("resize: empty target size");
  if (width == image.width && height == image.height) return image;
  GrayImage out;
  out.width = width;
  out.height = height;
  out.pixels.resize(static_cast<std::size_t>(width * height));
  // Pixel-centre alignment.
  const double sx = static_cast<double>(image.width) / width;
  const double sy = static_cast<double>(image.height) / height;
  for (Index y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0,
                                 static_cast<double>(image.height - 1));
    const Index y0 = static_cast<Index>(fy);
    const Index y1 = std::min(y0 + 1, image.height - 1);
    const double wy = fy - y0;
    for (Index x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0,
                                   static_cast<double>(image.width - 1));
      const Index x0 = static_cast<Index>(fx);
      const Index x1 = std::min(x0 + 1, image.width - 1);
      const double wx = fx - x0;
      const double top = (1 - wx) * image.at(x0, y0) + wx * image.at(x1, y0);
      const double bottom = (1 - wx) * image.at(x0, y1) + wx * image.at(x1, y1);
      out.pixels[y * width + x] = (1 - wy) * top + wy * bottom;
    }
  }
  return out;
}

Vector flatten_columnwise(const GrayImage& image) {
  Vector v(image.width * image.height);
  for (Index x = 0; x < image.width; ++x) {
    for (Index y = 0; y < image.height; ++y) {
      v(x * image.height + y) = image.at(x, y);
    }
  }
  return v;
}

GrayImage unflatten_columnwise(const Vector& column, Index width,
                               Index height) {
  if (column.size() != width * height) {
    throw DimensionError("unflatten: column length does not match image size");
  }
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<std::size_t>(width * height));
  for (Index x = 0; x < width; ++x) {
    for (Index y = 0; y < height; ++y) {
      img.pixels[y * width + x] = column(x * height + y);
    }
  }
  return img;
}

}  // namespace sparsefx
