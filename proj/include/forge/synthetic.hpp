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

// Procedural entities and backgrounds for tests, demos and the toy-asset
// tool. Each entity is a soft-edged ellipse or rounded box in one flat color
// with mild per-pixel noise, so the color annotation is predictable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/attributes.hpp"
#include "forge/builder.hpp"
#include "forge/catalog.hpp"
#include "forge/css_colors.hpp"
#include "forge/random.hpp"
#include "forge/raster.hpp"
#include "forge/tables.hpp"

namespace forge {

struct SyntheticAsset {
  EntityMetadata meta;
  Rgb8 rgb;
  Gray8 alpha;
};

/// A flat-colored blob of the given size. `color` is the fill; noise of at
/// most +-3 per channel is added.
inline SyntheticAsset synthetic_asset(const EntityMetadata& meta, const NamedColor& color, int width,
                                      int height, Rng& rng) {
  SyntheticAsset a{meta, Rgb8(width, height), Gray8(width, height)};
  const bool ellipse = coin(rng);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double rx = width / 2.0;
  const double ry = height / 2.0;
  const auto& base = color.rgb;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = (x - cx) / rx;
      const double dy = (y - cy) / ry;
      // Signed distance proxy: 1 at the boundary, softened over ~2 px.
      const double d = ellipse ? std::sqrt(dx * dx + dy * dy) : std::max(std::abs(dx), std::abs(dy));
      const double edge = 2.0 / std::min(rx, ry);
      const double alpha = std::clamp((1.0 - d) / edge + 0.5, 0.0, 1.0);
      a.alpha.at(x, y) = quantize_unit(alpha);
      for (int c = 0; c < 3; ++c) {
        const int noise = static_cast<int>(uniform_int(rng, -3, 3));
        a.rgb.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(base[c] + noise, 0, 255));
      }
    }
  }
  return a;
}

struct ToyPoolSpec {
  int humans = 25;
  int animals = 5;
  int objects = 5;
  int min_size = 40;
  int max_size = 90;
};

inline const std::vector<std::string>& toy_animal_categories() {
  static const std::vector<std::string> v = {"cat",   "dog",   "horse", "sheep", "rabbit",
                                             "bear",  "tiger", "lion",  "zebra", "deer"};
  return v;
}

inline const std::vector<std::string>& toy_object_categories() {
  static const std::vector<std::string> v = {"flower", "vase",     "wine glass", "bottle", "umbrella",
                                             "chair",  "lamp",     "ball",       "smoke",  "feather"};
  return v;
}

/// Synthetic assets for one pool; ids are `<prefix>_<class>_<n>`.
inline std::vector<SyntheticAsset> toy_assets(const std::string& prefix, const ToyPoolSpec& spec,
                                              std::uint64_t seed) {
  Rng rng = make_rng({seed, 0x70e5ULL});
  const auto colors = css_colors();
  const auto& clothes = CategoryTables::defaults().clothes;
  const std::vector<std::string> clothes_list(clothes.begin(), clothes.end());
  std::vector<SyntheticAsset> out;
  auto size = [&] { return static_cast<int>(uniform_int(rng, spec.min_size, spec.max_size)); };
  auto add = [&](EntityMetadata meta) {
    const auto& color = colors[uniform_index(rng, colors.size())];
    const int w = size();
    const int h = size();
    out.push_back(synthetic_asset(meta, color, w, h, rng));
  };
  for (int i = 0; i < spec.humans; ++i) {
    EntityMetadata m;
    m.id = prefix + "_human_" + std::to_string(i);
    m.category = kHumanCategory;
    m.entity_class = EntityClass::human;
    m.gender = coin(rng) ? Gender::female : Gender::male;
    m.age = static_cast<int>(uniform_int(rng, 3, 90));
    m.clothes = pick(clothes_list, rng);
    add(m);
  }
  for (int i = 0; i < spec.animals; ++i) {
    EntityMetadata m;
    m.id = prefix + "_animal_" + std::to_string(i);
    m.category = pick(toy_animal_categories(), rng);
    m.entity_class = EntityClass::animal;
    add(m);
  }
  for (int i = 0; i < spec.objects; ++i) {
    EntityMetadata m;
    m.id = prefix + "_object_" + std::to_string(i);
    m.category = pick(toy_object_categories(), rng);
    m.entity_class = EntityClass::object;
    add(m);
  }
  return out;
}

inline std::vector<Entity> toy_entities(const std::string& prefix, const ToyPoolSpec& spec,
                                        std::uint64_t seed,
                                        const CategoryTables& tables = CategoryTables::defaults()) {
  std::vector<Entity> out;
  for (auto& a : toy_assets(prefix, spec, seed)) {
    out.push_back(make_entity(a.meta, std::move(a.rgb), a.alpha, tables));
  }
  return out;
}

/// Two-color vertical gradients.
inline Rgb8 toy_background(int width, int height, Rng& rng) {
  Rgb8 bg(width, height);
  std::uint8_t top[3], bottom[3];
  for (int c = 0; c < 3; ++c) {
    top[c] = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
    bottom[c] = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  }
  for (int y = 0; y < height; ++y) {
    const double t = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) bg.at(x, y, c) = quantize_byte((1.0 - t) * top[c] + t * bottom[c]);
    }
  }
  return bg;
}

inline std::vector<Background> toy_backgrounds(int count, int width, int height, std::uint64_t seed) {
  Rng rng = make_rng({seed, 0xb9ULL});
  std::vector<Background> out;
  for (int i = 0; i < count; ++i) out.push_back({"bg_" + std::to_string(i), toy_background(width, height, rng)});
  return out;
}

}  // namespace forge
