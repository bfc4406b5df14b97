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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <gtest/gtest.h>
#include <png.h>

#include "oracles.hpp"
#include "sparsefx/dataset.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/image_io.hpp"

namespace sparsefx {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("sparsefx_ds_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

GrayImage ramp(Index w, Index h, double scale = 1.0) {
  GrayImage img{w, h, std::vector<double>(static_cast<std::size_t>(w * h))};
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      img.pixels[y * w + x] =
          scale * static_cast<double>((x * 7 + y * 3) % 256) / 255.0;
    }
  }
  return img;
}

// Writes count images of the given size and a manifest with cycling labels.
fs::path make_corpus(const fs::path& dir, Index w, Index h, int count,
                     int classes, int subjects) {
  std::string manifest = "path,label,identity\n";
  for (int i = 0; i < count; ++i) {
    const std::string name = "img" + std::to_string(i) + ".pgm";
    GrayImage img = ramp(w, h);
    img.pixels[static_cast<std::size_t>(i) % img.pixels.size()] = 1.0;
    write_pgm(img, dir / name, 255);
    manifest += name + ",c" + std::to_string(i % classes) + ",s" +
                std::to_string(i % subjects) + "\n";
  }
  write_text(dir / "manifest.csv", manifest);
  return dir / "manifest.csv";
}

TEST(Image, Pgm8And16BitScaleToUnitInterval) {
  const fs::path dir = temp_dir("pgm");
  write_text(dir / "a.pgm", std::string("P5\n2 1\n255\n") + '\x00' + '\xff');
  GrayImage a = read_gray_image(dir / "a.pgm");
  EXPECT_EQ(a.width, 2);
  EXPECT_EQ(a.height, 1);
  EXPECT_DOUBLE_EQ(a.pixels[0], 0.0);
  EXPECT_DOUBLE_EQ(a.pixels[1], 1.0);

  write_text(dir / "b.pgm", "P2\n# comment\n1 2\n65535\n65535 32768\n");
  GrayImage b = read_gray_image(dir / "b.pgm");
  EXPECT_DOUBLE_EQ(b.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.at(0, 1), 32768.0 / 65535.0);

  const GrayImage r = ramp(5, 4);
  write_pgm(r, dir / "c.pgm", 65535);
  const GrayImage c = read_gray_image(dir / "c.pgm");
  for (std::size_t i = 0; i < r.pixels.size(); ++i) {
    EXPECT_NEAR(c.pixels[i], r.pixels[i], 1.0 / 65535.0);
  }
}

TEST(Image, GrayscalePng) {
  const fs::path dir = temp_dir("png");
  const std::uint8_t px[6] = {0, 51, 102, 153, 204, 255};
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = 3;
  image.height = 2;
  image.format = PNG_FORMAT_GRAY;
  ASSERT_TRUE(png_image_write_to_file(&image, (dir / "g.png").c_str(), 0, px,
                                      3, nullptr));
  const GrayImage g = read_gray_image(dir / "g.png");
  ASSERT_EQ(g.width, 3);
  ASSERT_EQ(g.height, 2);
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(g.pixels[i], px[i] / 255.0);

  png_image rgb{};
  rgb.version = PNG_IMAGE_VERSION;
  rgb.width = 1;
  rgb.height = 1;
  rgb.format = PNG_FORMAT_RGB;
  const std::uint8_t c[3] = {255, 0, 0};
  ASSERT_TRUE(png_image_write_to_file(&rgb, (dir / "c.png").c_str(), 0, c, 3,
                                      nullptr));
  EXPECT_THROW(read_gray_image(dir / "c.png"), DataError);
}

TEST(Image, RejectsColourAndGarbage) {
  const fs::path dir = temp_dir("bad");
  write_text(dir / "c.ppm", std::string("P6\n1 1\n255\n") + "abc");
  EXPECT_THROW(read_gray_image(dir / "c.ppm"), DataError);
  write_text(dir / "g.pgm", "not an image");
  EXPECT_THROW(read_gray_image(dir / "g.pgm"), DataError);
  write_text(dir / "t.pgm", std::string("P5\n4 4\n255\n") + "ab");
  EXPECT_THROW(read_gray_image(dir / "t.pgm"), DataError);
}

TEST(Image, ColumnwiseFlattening) {
  const GrayImage img = ramp(4, 3);
  const Vector v = flatten_columnwise(img);
  ASSERT_EQ(v.size(), 12);
  for (Index x = 0; x < 4; ++x) {
    for (Index y = 0; y < 3; ++y) EXPECT_EQ(v(x * 3 + y), img.at(x, y));
  }
  const GrayImage back = unflatten_columnwise(v, 4, 3);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Image, ResizeKeepsConstantsAndCorners) {
  GrayImage flat{7, 5, std::vector<double>(35, 0.25)};
  const GrayImage r = resize_bilinear(flat, 3, 9);
  EXPECT_EQ(r.width, 3);
  EXPECT_EQ(r.height, 9);
  for (double p : r.pixels) EXPECT_NEAR(p, 0.25, 1e-15);
  const GrayImage same = resize_bilinear(ramp(6, 4), 6, 4);
  EXPECT_EQ(same.pixels, ramp(6, 4).pixels);
}

TEST(Manifest, SingleBlackImage) {
  const fs::path dir = temp_dir("single");
  write_pgm(GrayImage{2, 2, {0, 0, 0, 0}}, dir / "z.pgm", 255);
  write_text(dir / "m.csv", "path,label\nz.pgm,HA\n");
  const LabeledDataset ds = load_manifest(dir / "m.csv");
  EXPECT_EQ(ds.dim(), 4);
  EXPECT_EQ(ds.size(), 1);
  EXPECT_TRUE(ds.features.isZero(0.0));
  EXPECT_EQ(ds.class_names, std::vector<std::string>{"HA"});
  EXPECT_FALSE(ds.has_identities());
}

TEST(Manifest, ClassOrderAndColumnLayout) {
  const fs::path dir = temp_dir("order");
  const GrayImage img = ramp(3, 2);
  write_pgm(img, dir / "a.pgm", 65535);
  write_text(dir / "m.csv",
             "label,path,identity\nSU,a.pgm,p1\nAN,a.pgm,p2\nSU,a.pgm,p1\n");
  const LabeledDataset ds = load_manifest(dir / "m.csv");
  EXPECT_EQ(ds.class_names, (std::vector<std::string>{"SU", "AN"}));
  EXPECT_EQ(ds.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(ds.identities, (std::vector<std::string>{"p1", "p2", "p1"}));
  for (Index x = 0; x < 3; ++x) {
    for (Index y = 0; y < 2; ++y) {
      EXPECT_NEAR(ds.features(x * 2 + y, 1), img.at(x, y), 1.0 / 65535.0);
    }
  }
}

TEST(Manifest, ErrorsNameTheRow) {
  const fs::path dir = temp_dir("errors");
  write_pgm(ramp(2, 2), dir / "a.pgm", 255);
  write_pgm(ramp(3, 2), dir / "b.pgm", 255);
  write_text(dir / "missing.csv", "path,label\na.pgm,x\nnope.pgm,y\n");
  try {
    load_manifest(dir / "missing.csv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  write_text(dir / "mixed.csv", "path,label\na.pgm,x\nb.pgm,y\n");
  EXPECT_THROW(load_manifest(dir / "mixed.csv"), DataError);
  ManifestOptions opts;
  opts.resize = std::make_pair(Index{4}, Index{4});
  EXPECT_EQ(load_manifest(dir / "mixed.csv", opts).dim(), 16);

  write_text(dir / "nolabel.csv", "path\na.pgm\n");
  EXPECT_THROW(load_manifest(dir / "nolabel.csv"), DataError);
  write_text(dir / "empty.csv", "path,label\n");
  EXPECT_THROW(load_manifest(dir / "empty.csv"), DataError);
  EXPECT_THROW(load_manifest(dir / "absent.csv"), DataError);
}

TEST(Manifest, LoadingIsDeterministicAcrossThreads) {
  const fs::path dir = temp_dir("det");
  const fs::path m = make_corpus(dir, 5, 4, 30, 3, 5);
  ManifestOptions four;
  four.threads = 4;
  const LabeledDataset a = load_manifest(m);
  const LabeledDataset b = load_manifest(m, four);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
}

TEST(Manifest, SevenClassCorpusShape) {
  const fs::path dir = temp_dir("seven");
  const fs::path m = make_corpus(dir, 138, 128, 213, 7, 10);
  const LabeledDataset ds = load_manifest(m);
  EXPECT_EQ(ds.dim(), 17664);
  EXPECT_EQ(ds.size(), 213);
  EXPECT_EQ(ds.num_classes(), 7);
}

TEST(Manifest, SixClassCorpusShape) {
  const fs::path dir = temp_dir("six");
  const fs::path m = make_corpus(dir, 239, 200, 480, 6, 80);
  const LabeledDataset ds = load_manifest(m);
  EXPECT_EQ(ds.dim(), 47800);
  EXPECT_EQ(ds.size(), 480);
}

TEST(Manifest, MultipleManifestsMergeClasses) {
  const fs::path d1 = temp_dir("m1");
  const fs::path d2 = temp_dir("m2");
  write_pgm(ramp(2, 2), d1 / "a.pgm", 255);
  write_pgm(ramp(4, 4), d2 / "b.pgm", 255);
  write_text(d1 / "m.csv", "path,label\na.pgm,HA\na.pgm,SA\n");
  write_text(d2 / "m.csv", "path,label\nb.pgm,SU\nb.pgm,HA\n");
  const std::vector<fs::path> both = {d1 / "m.csv", d2 / "m.csv"};
  EXPECT_THROW(load_manifests(both), DataError);
  ManifestOptions opts;
  opts.resize = std::make_pair(Index{3}, Index{3});
  const LabeledDataset ds = load_manifests(both, opts);
  EXPECT_EQ(ds.size(), 4);
  EXPECT_EQ(ds.class_names, (std::vector<std::string>{"HA", "SA", "SU"}));
  EXPECT_EQ(ds.labels, (std::vector<int>{0, 1, 2, 0}));
}

// Labels-only dataset: sizes[c] samples of class c, identities cycling
// through subjects (offset per class so subjects span classes).
LabeledDataset synthetic(const std::vector<int>& sizes, int subjects) {
  LabeledDataset ds;
  int total = 0;
  for (int s : sizes) total += s;
  ds.features = DenseMatrix(2, total);
  int col = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    ds.class_names.push_back("c" + std::to_string(c));
    for (int i = 0; i < sizes[c]; ++i, ++col) {
      ds.features(0, col) = col;
      ds.features(1, col) = static_cast<double>(c);
      ds.labels.push_back(static_cast<int>(c));
      ds.identities.push_back("s" + std::to_string(i % subjects));
    }
  }
  return ds;
}

std::vector<Index> counts(const LabeledDataset& ds) { return ds.class_counts(); }

TEST(Split, SevenClassCounts) {
  const LabeledDataset ds = synthetic({30, 30, 31, 31, 30, 31, 30}, 10);
  const Split s = split(ds, {20, 10, false, 1});
  EXPECT_EQ(s.train.size(), 140);
  EXPECT_EQ(s.test.size(), 70);
  for (Index c : counts(s.train)) EXPECT_EQ(c, 20);
  for (Index c : counts(s.test)) EXPECT_EQ(c, 10);
}

TEST(Split, SixClassIdentityDisjointCounts) {
  const LabeledDataset ds = synthetic({80, 80, 80, 80, 80, 80}, 40);
  const Split s = split(ds, {60, 20, true, 3});
  EXPECT_EQ(s.train.size(), 360);
  EXPECT_EQ(s.test.size(), 120);
  std::set<std::string> train_ids(s.train.identities.begin(),
                                  s.train.identities.end());
  for (const auto& id : s.test.identities) EXPECT_EQ(train_ids.count(id), 0u);
}

TEST(Split, WholeClassInTrainLeavesEmptyTest) {
  const LabeledDataset ds = synthetic({5, 5}, 5);
  const Split s = split(ds, {5, 0, false, 0});
  EXPECT_EQ(s.train.size(), 10);
  EXPECT_EQ(s.test.size(), 0);
}

TEST(Split, Errors) {
  const LabeledDataset ds = synthetic({30, 12}, 10);
  EXPECT_THROW(split(ds, {20, 10, false, 0}), DataError);
  EXPECT_THROW(split(ds, {-1, 1, false, 0}), ConfigError);
  // 3 samples per subject per class: 10 test samples need 4 subjects, which
  // leaves 18 for training.
  const LabeledDataset tight = synthetic({30, 30}, 10);
  EXPECT_THROW(split(tight, {20, 10, true, 0}), DataError);
  LabeledDataset anon = tight;
  anon.identities.clear();
  EXPECT_THROW(split(anon, {5, 5, true, 0}), ConfigError);
}

TEST(Split, SeedControlsOrder) {
  const LabeledDataset ds = synthetic({40, 40, 40}, 20);
  const Split a = split(ds, {20, 10, true, 9});
  const Split b = split(ds, {20, 10, true, 9});
  const Split c = split(ds, {20, 10, true, 10});
  EXPECT_EQ(a.train.features, b.train.features);
  EXPECT_EQ(a.test.features, b.test.features);
  EXPECT_NE(a.train.features, c.train.features);
}

TEST(SplitProperty, ExactCountsDisjointIdentitiesNoOverlap) {
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    const int classes = 2 + static_cast<int>(rng.below(5));
    const int subjects = 6 + static_cast<int>(rng.below(20));
    std::vector<int> sizes;
    for (int c = 0; c < classes; ++c) {
      sizes.push_back(30 + static_cast<int>(rng.below(20)));
    }
    const LabeledDataset ds = synthetic(sizes, subjects);
    const Index tr = 1 + static_cast<Index>(rng.below(10));
    const Index te = 1 + static_cast<Index>(rng.below(8));
    const bool disjoint = rng.below(2) == 1;
    Split s;
    try {
      s = split(ds, {tr, te, disjoint, rng.next()});
    } catch (const DataError&) {
      continue;  // infeasible identity partition
    }
    for (Index c : counts(s.train)) ASSERT_EQ(c, tr);
    for (Index c : counts(s.test)) ASSERT_EQ(c, te);
    // Column 0 of the features is the original sample index.
    std::set<double> seen;
    for (Index j = 0; j < s.train.size(); ++j) seen.insert(s.train.features(0, j));
    for (Index j = 0; j < s.test.size(); ++j) {
      ASSERT_EQ(seen.count(s.test.features(0, j)), 0u);
    }
    if (disjoint) {
      std::set<std::string> ids(s.train.identities.begin(),
                                s.train.identities.end());
      for (const auto& id : s.test.identities) ASSERT_EQ(ids.count(id), 0u);
    }
  }
}

TEST(DatasetIo, RoundTrip) {
  const fs::path dir = temp_dir("io");
  LabeledDataset ds = synthetic({3, 4}, 2);
  save_dataset(ds, dir, "train");
  const LabeledDataset back = load_dataset(dir, "train");
  EXPECT_EQ(back.features, ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.identities, ds.identities);
  EXPECT_EQ(back.class_names, ds.class_names);

  const Split s = split(ds, {3, 0, false, 0});
  save_dataset(s.test, dir, "test");
  const LabeledDataset empty = load_dataset(dir, "test");
  EXPECT_EQ(empty.size(), 0);
  EXPECT_EQ(empty.dim(), 2);
  EXPECT_THROW(load_dataset(dir, "nothing"), DataError);
}

}  // namespace
}  // namespace sparsefx
