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

// Thin wrappers over the libpng "simplified" API. Only 8-bit gray, RGB and
// RGBA are handled; that is all the dataset format uses.

#include <png.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <utility>

#include "forge/error.hpp"
#include "forge/raster.hpp"

namespace forge {

namespace detail {

struct PngReader {
  png_image image;

  explicit PngReader(const std::filesystem::path& path) {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
      std::string msg = image.message;
      png_image_free(&image);
      throw Error(Errc::io_error, "cannot decode PNG '" + path.string() + "': " + msg);
    }
  }
  ~PngReader() { png_image_free(&image); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  bool has_alpha() const { return (image.format & PNG_FORMAT_FLAG_ALPHA) != 0; }

  template <class R>
  R finish(png_uint_32 format, const std::filesystem::path& path) {
    image.format = format;
    R out(static_cast<int>(image.width), static_cast<int>(image.height));
    if (!png_image_finish_read(&image, nullptr, out.samples().data(), 0, nullptr)) {
      throw Error(Errc::io_error, "cannot decode PNG '" + path.string() + "': " + image.message);
    }
    return out;
  }
};

template <int C>
void write_png_raw(const std::filesystem::path& path, const Raster<std::uint8_t, C>& raster,
                   png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = format;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, raster.samples().data(), 0,
                               nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(Errc::io_error, "cannot write PNG '" + path.string() + "': " + msg);
  }
}

}  // namespace detail

inline Rgb8 read_rgb_png(const std::filesystem::path& path) {
  detail::PngReader reader(path);
  return reader.finish<Rgb8>(PNG_FORMAT_RGB, path);
}

inline Gray8 read_gray_png(const std::filesystem::path& path) {
  detail::PngReader reader(path);
  return reader.finish<Gray8>(PNG_FORMAT_GRAY, path);
}

/// Splits a 32-bit RGBA PNG into color and alpha planes. Color is returned
/// as stored, i.e. not premultiplied.
inline std::pair<Rgb8, Gray8> read_rgba_png(const std::filesystem::path& path) {
  detail::PngReader reader(path);
  auto rgba = reader.finish<Raster<std::uint8_t, 4>>(PNG_FORMAT_RGBA, path);
  Rgb8 rgb(rgba.width(), rgba.height());
  Gray8 alpha(rgba.width(), rgba.height());
  for (int y = 0; y < rgba.height(); ++y) {
    for (int x = 0; x < rgba.width(); ++x) {
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = rgba.at(x, y, c);
      alpha.at(x, y) = rgba.at(x, y, 3);
    }
  }
  return {std::move(rgb), std::move(alpha)};
}

inline bool png_has_alpha(const std::filesystem::path& path) {
  detail::PngReader reader(path);
  return reader.has_alpha();
}

inline void write_png(const std::filesystem::path& path, const Rgb8& raster) {
  detail::write_png_raw(path, raster, PNG_FORMAT_RGB);
}

inline void write_png(const std::filesystem::path& path, const Gray8& raster) {
  detail::write_png_raw(path, raster, PNG_FORMAT_GRAY);
}

}  // namespace forge
