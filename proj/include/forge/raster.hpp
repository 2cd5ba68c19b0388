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
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "forge/error.hpp"

namespace forge {

/// Dense interleaved raster, row-major, `Channels` samples per pixel.
template <class T, int Channels>
class Raster {
 public:
  static_assert(Channels > 0);
  using value_type = T;
  static constexpr int channels = Channels;

  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(checked_size(width, height), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }

  std::span<T> pixel(int x, int y) noexcept { return {data_.data() + index(x, y, 0), Channels}; }
  std::span<const T> pixel(int x, int y) const noexcept {
    return {data_.data() + index(x, y, 0), Channels};
  }

  std::span<T> samples() noexcept { return data_; }
  std::span<const T> samples() const noexcept { return data_; }

  bool same_size(int w, int h) const noexcept { return width_ == w && height_ == h; }
  template <class U, int C>
  bool same_size(const Raster<U, C>& other) const noexcept {
    return same_size(other.width(), other.height());
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static std::size_t checked_size(int w, int h) {
    if (w < 0 || h < 0) throw Error(Errc::size_mismatch, "negative raster dimensions");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * Channels;
  }
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * Channels + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Rgb8 = Raster<std::uint8_t, 3>;
using Gray8 = Raster<std::uint8_t, 1>;
using RgbF = Raster<double, 3>;
using AlphaMap = Raster<double, 1>;

inline std::uint8_t quantize_unit(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

inline std::uint8_t quantize_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

/// 8-bit grayscale to [0,1] (value/255).
inline AlphaMap decode_alpha(const Gray8& gray) {
  AlphaMap out(gray.width(), gray.height());
  auto src = gray.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / 255.0;
  return out;
}

inline Gray8 encode_alpha(const AlphaMap& alpha) {
  Gray8 out(alpha.width(), alpha.height());
  auto src = alpha.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_unit(src[i]);
  return out;
}

template <int C>
Raster<double, C> to_double(const Raster<std::uint8_t, C>& in) {
  Raster<double, C> out(in.width(), in.height());
  auto src = in.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

template <int C>
Raster<std::uint8_t, C> to_bytes(const Raster<double, C>& in) {
  Raster<std::uint8_t, C> out(in.width(), in.height());
  auto src = in.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_byte(src[i]);
  return out;
}

/// Bilinear sample at continuous source coordinate (u, v), pixel centers at
/// integer positions, edges clamped.
template <class T, int C>
std::array<double, C> sample_bilinear(const Raster<T, C>& src, double u, double v) {
  const double uc = std::clamp(u, 0.0, static_cast<double>(src.width() - 1));
  const double vc = std::clamp(v, 0.0, static_cast<double>(src.height() - 1));
  const int x0 = static_cast<int>(std::floor(uc));
  const int y0 = static_cast<int>(std::floor(vc));
  const int x1 = std::min(x0 + 1, src.width() - 1);
  const int y1 = std::min(y0 + 1, src.height() - 1);
  const double fx = uc - x0;
  const double fy = vc - y0;
  std::array<double, C> out{};
  for (int c = 0; c < C; ++c) {
    const double top = (1.0 - fx) * src.at(x0, y0, c) + fx * src.at(x1, y0, c);
    const double bottom = (1.0 - fx) * src.at(x0, y1, c) + fx * src.at(x1, y1, c);
    out[c] = (1.0 - fy) * top + fy * bottom;
  }
  return out;
}

/// Resample to (width, height) by bilinear interpolation, aligning pixel
/// centers of source and target.
template <class T, int C>
Raster<double, C> resize_bilinear(const Raster<T, C>& src, int width, int height) {
  Raster<double, C> out(width, height);
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double v = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5) * sx - 0.5;
      const auto s = sample_bilinear(src, u, v);
      for (int c = 0; c < C; ++c) out.at(x, y, c) = s[c];
    }
  }
  return out;
}

}  // namespace forge
