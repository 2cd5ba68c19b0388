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

// Alpha compositing of a planned layout over a background with the over
// operator, producing each entity's visible (occlusion-attenuated) matte.

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "forge/catalog.hpp"
#include "forge/error.hpp"
#include "forge/layout.hpp"
#include "forge/raster.hpp"

namespace forge {

struct CompositeResult {
  /// Composite in [0,255] floating point and its 8-bit quantization.
  RgbF image;
  Rgb8 image8;
  /// Canvas-sized layers, one per placement, zero outside its box.
  std::vector<AlphaMap> layer_alphas;
  std::vector<AlphaMap> visible_alphas;
  std::vector<RgbF> layer_colors;
};

namespace detail {

inline void render_layer(const Entity& entity, const Placement& p, int canvas_w, int canvas_h,
                         AlphaMap& alpha_out, RgbF& color_out) {
  alpha_out = AlphaMap(canvas_w, canvas_h, 0.0);
  color_out = RgbF(canvas_w, canvas_h, 0.0);
  const auto alpha = resize_bilinear(entity.alpha, p.width, p.height);
  const auto color = resize_bilinear(entity.rgb, p.width, p.height);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const int cx = p.offset_x + x;
      const int cy = p.offset_y + y;
      alpha_out.at(cx, cy) = std::clamp(alpha.at(x, y), 0.0, 1.0);
      for (int c = 0; c < 3; ++c) color_out.at(cx, cy, c) = color.at(x, y, c);
    }
  }
}

}  // namespace detail

/// Pixel = sum_i vis_i * F_i + (1 - sum_i vis_i) * B, sums taken in
/// placement order. `composite` uses exactly this arithmetic, so feeding its
/// own outputs back reproduces the image bit for bit.
inline RgbF recomposite(std::span<const AlphaMap> visible_alphas, std::span<const RgbF> colors,
                        const Rgb8& background) {
  if (visible_alphas.size() != colors.size()) {
    throw Error(Errc::size_mismatch, "visible alpha and color layer counts differ");
  }
  const int w = background.width();
  const int h = background.height();
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (!visible_alphas[i].same_size(w, h) || !colors[i].same_size(w, h)) {
      throw Error(Errc::size_mismatch, "layer size differs from background");
    }
  }
  RgbF out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double coverage = 0.0;
      for (const auto& v : visible_alphas) coverage += v.at(x, y);
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < colors.size(); ++i) {
          acc += visible_alphas[i].at(x, y) * colors[i].at(x, y, c);
        }
        out.at(x, y, c) = acc + (1.0 - coverage) * background.at(x, y, c);
      }
    }
  }
  return out;
}

/// `entities[i]` supplies the pixels for `layout.placements[i]`.
inline CompositeResult composite(const SceneLayout& layout, std::span<const Entity* const> entities,
                                 const Rgb8& background) {
  if (!background.same_size(layout.canvas_w, layout.canvas_h)) {
    throw Error(Errc::size_mismatch, "background " + std::to_string(background.width()) + "x" +
                                         std::to_string(background.height()) +
                                         " vs canvas " + std::to_string(layout.canvas_w) + "x" +
                                         std::to_string(layout.canvas_h));
  }
  if (entities.size() != layout.placements.size()) {
    throw Error(Errc::size_mismatch, "entity count differs from placement count");
  }
  const std::size_t n = entities.size();
  const int w = layout.canvas_w;
  const int h = layout.canvas_h;

  CompositeResult out;
  out.layer_alphas.resize(n);
  out.layer_colors.resize(n);
  out.visible_alphas.assign(n, AlphaMap(w, h, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = layout.placements[i];
    if (entities[i]->id() != p.entity_id) {
      throw Error(Errc::size_mismatch, "entity '" + entities[i]->id() +
                                           "' does not match placement '" + p.entity_id + "'");
    }
    if (!p.bbox().inside(w, h)) {
      throw Error(Errc::size_mismatch, "placement '" + p.entity_id + "' leaves the canvas");
    }
    detail::render_layer(*entities[i], p, w, h, out.layer_alphas[i], out.layer_colors[i]);
  }

  // Front to back: each layer keeps what the layers above let through.
  std::vector<std::size_t> front_to_back(n);
  std::iota(front_to_back.begin(), front_to_back.end(), std::size_t{0});
  std::stable_sort(front_to_back.begin(), front_to_back.end(), [&](auto a, auto b) {
    return layout.placements[a].z > layout.placements[b].z;
  });
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double transmit = 1.0;
      for (auto i : front_to_back) {
        const double a = out.layer_alphas[i].at(x, y);
        out.visible_alphas[i].at(x, y) = a * transmit;
        transmit *= (1.0 - a);
      }
    }
  }

  out.image = recomposite(out.visible_alphas, out.layer_colors, background);
  out.image8 = to_bytes(out.image);
  return out;
}

}  // namespace forge
