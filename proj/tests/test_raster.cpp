/**
 * Copyright 2026 The Matte Forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "forge/png_io.hpp"
#include "forge/random.hpp"
#include "forge/raster.hpp"
#include "test_util.hpp"

using namespace forge;

TEST(Raster, StoresInterleavedSamples) {
  Rgb8 r(3, 2);
  r.at(2, 1, 0) = 7;
  r.at(2, 1, 2) = 9;
  EXPECT_EQ(r.samples().size(), 18u);
  EXPECT_EQ(r.samples()[(1 * 3 + 2) * 3 + 0], 7);
  EXPECT_EQ(r.pixel(2, 1)[2], 9);
  EXPECT_EQ(r.pixel_count(), 6u);
}

TEST(Raster, AlphaDecodeIsValueOver255) {
  Gray8 g(256, 1);
  for (int x = 0; x < 256; ++x) g.at(x, 0) = static_cast<std::uint8_t>(x);
  const auto a = decode_alpha(g);
  for (int x = 0; x < 256; ++x) EXPECT_DOUBLE_EQ(a.at(x, 0), x / 255.0);
  EXPECT_EQ(encode_alpha(a), g);
}

TEST(Raster, QuantizeClampsAndRounds) {
  EXPECT_EQ(quantize_byte(-3.0), 0);
  EXPECT_EQ(quantize_byte(300.0), 255);
  EXPECT_EQ(quantize_byte(127.5), 128);
  EXPECT_EQ(quantize_byte(127.49), 127);
  EXPECT_EQ(quantize_unit(1.5), 255);
  EXPECT_EQ(quantize_unit(0.5), 128);
}

TEST(Raster, ResizeToSameSizeIsIdentity) {
  Rng rng = make_rng({3});
  Rgb8 src(7, 5);
  for (auto& v : src.samples()) v = static_cast<std::uint8_t>(uniform_index(rng, 256));
  EXPECT_EQ(to_bytes(resize_bilinear(src, 7, 5)), src);
}

TEST(Raster, ResizeOfConstantIsConstant) {
  Gray8 src(9, 4, 77);
  const auto out = resize_bilinear(src, 23, 13);
  for (double v : out.samples()) EXPECT_DOUBLE_EQ(v, 77.0);
}

TEST(Raster, DoubleUpsampleInterpolatesBetweenCenters) {
  // Target centers map to source u = (x + 0.5) / 4 - 0.5, clamped to [0, 1].
  Gray8 src(2, 1);
  src.at(0, 0) = 0;
  src.at(1, 0) = 100;
  const auto out = resize_bilinear(src, 8, 1);
  const double expected[] = {0, 0, 12.5, 37.5, 62.5, 87.5, 100, 100};
  for (int x = 0; x < 8; ++x) {
    const double u = (x + 0.5) * 0.25 - 0.5;
    const double clamped = std::clamp(u, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(out.at(x, 0), 100.0 * clamped) << x;
    EXPECT_DOUBLE_EQ(out.at(x, 0), expected[x]) << x;
  }
}

TEST(PngIo, RoundTripsRgbGrayAndRgba) {
  testutil::TempDir dir("png");
  Rng rng = make_rng({11});
  Rgb8 rgb(13, 9);
  Gray8 gray(13, 9);
  for (auto& v : rgb.samples()) v = static_cast<std::uint8_t>(uniform_index(rng, 256));
  for (auto& v : gray.samples()) v = static_cast<std::uint8_t>(uniform_index(rng, 256));
  write_png(dir / "nested/rgb.png", rgb);
  write_png(dir / "gray.png", gray);
  EXPECT_EQ(read_rgb_png(dir / "nested/rgb.png"), rgb);
  EXPECT_EQ(read_gray_png(dir / "gray.png"), gray);
  EXPECT_FALSE(png_has_alpha(dir / "gray.png"));
}

TEST(PngIo, MissingFileIsIoError) {
  try {
    read_rgb_png("/nonexistent/forge.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = make_rng({1, 2, 3});
  Rng b = make_rng({1, 2, 3});
  Rng c = make_rng({1, 2, 4});
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}

TEST(Random, UniformIndexCoversRange) {
  Rng rng = make_rng({5});
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[uniform_index(rng, 7)];
  for (int h : hits) EXPECT_GT(h, 800);
  for (int i = 0; i < 1000; ++i) {
    const auto v = uniform_int(rng, -2, 2);
    EXPECT_GE(v, -2);
    EXPECT_LE(v, 2);
  }
}

TEST(Random, ShuffleIsAPermutation) {
  Rng rng = make_rng({9});
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  shuffle(w, rng);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Random, WeightedIndexFollowsWeights) {
  Rng rng = make_rng({17});
  const double weights[] = {7, 2, 1};
  std::vector<int> hits(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hits[weighted_index(weights, rng)];
  EXPECT_NEAR(hits[0] / double(n), 0.7, 0.01);
  EXPECT_NEAR(hits[1] / double(n), 0.2, 0.01);
  EXPECT_NEAR(hits[2] / double(n), 0.1, 0.01);
}

TEST(Random, UnitIsHalfOpen) {
  Rng rng = make_rng({21});
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_unit(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
