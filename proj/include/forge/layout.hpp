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

// Placement of entities on the canvas, plus the relation predicates that
// expression generation and grounding both rely on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/random.hpp"

namespace forge {

/// Position relationships. `middle` (absolute only) and `beside` (the
/// relative phrases shared by left and right, e.g. "next to") exist only in
/// expressions and never appear as layout facts.
enum class Relation { left, right, top, bottom, in_front_of, behind, middle, beside };

inline constexpr Relation kLayoutRelations[] = {Relation::left,   Relation::right,
                                                Relation::top,    Relation::bottom,
                                                Relation::in_front_of, Relation::behind};

constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::left: return "left";
    case Relation::right: return "right";
    case Relation::top: return "top";
    case Relation::bottom: return "bottom";
    case Relation::in_front_of: return "in_front_of";
    case Relation::behind: return "behind";
    case Relation::middle: return "middle";
    case Relation::beside: return "beside";
  }
  return "left";
}

inline Relation parse_relation(std::string_view s) {
  for (auto r : {Relation::left, Relation::right, Relation::top, Relation::bottom,
                 Relation::in_front_of, Relation::behind, Relation::middle, Relation::beside}) {
    if (to_string(r) == s) return r;
  }
  throw Error(Errc::usage_error, "unknown relation '" + std::string(s) + "'");
}

constexpr bool is_layout_relation(Relation r) {
  return r != Relation::middle && r != Relation::beside;
}

constexpr bool is_occluding(Relation r) {
  return r == Relation::in_front_of || r == Relation::behind;
}

constexpr Relation inverse(Relation r) {
  switch (r) {
    case Relation::left: return Relation::right;
    case Relation::right: return Relation::left;
    case Relation::top: return Relation::bottom;
    case Relation::bottom: return Relation::top;
    case Relation::in_front_of: return Relation::behind;
    case Relation::behind: return Relation::in_front_of;
    case Relation::middle: return Relation::middle;
    case Relation::beside: return Relation::beside;
  }
  return r;
}

/// Half-open pixel box [x0, x1) x [y0, y1).
struct BBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  std::int64_t area() const { return static_cast<std::int64_t>(width()) * height(); }
  double center_x() const { return (x0 + x1) / 2.0; }
  double center_y() const { return (y0 + y1) / 2.0; }

  std::int64_t intersection_area(const BBox& o) const {
    const int w = std::min(x1, o.x1) - std::max(x0, o.x0);
    const int h = std::min(y1, o.y1) - std::max(y0, o.y0);
    return (w > 0 && h > 0) ? static_cast<std::int64_t>(w) * h : 0;
  }
  bool overlaps(const BBox& o) const { return intersection_area(o) > 0; }
  bool inside(int canvas_w, int canvas_h) const {
    return x0 >= 0 && y0 >= 0 && x1 <= canvas_w && y1 <= canvas_h && x1 > x0 && y1 > y0;
  }
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Placement {
  std::string entity_id;
  double scale = 1.0;
  int offset_x = 0;
  int offset_y = 0;
  /// Scaled size in pixels.
  int width = 0;
  int height = 0;
  int z = 0;

  BBox bbox() const { return {offset_x, offset_y, offset_x + width, offset_y + height}; }
  friend bool operator==(const Placement&, const Placement&) = default;
};

struct RelationFact {
  std::size_t subject = 0;
  std::size_t object = 0;
  Relation relation = Relation::left;
  friend bool operator==(const RelationFact&, const RelationFact&) = default;
};

struct SceneLayout {
  int canvas_w = 0;
  int canvas_h = 0;
  std::vector<Placement> placements;
  std::vector<RelationFact> relation_facts;

  std::size_t size() const { return placements.size(); }
  friend bool operator==(const SceneLayout&, const SceneLayout&) = default;
};

/// What the planner needs to know about an entity.
struct LayoutItem {
  std::string id;
  int width = 0;
  int height = 0;
};

struct LayoutConfig {
  /// Scaled max-dimension as a fraction of the canvas min-dimension.
  double min_frac = 0.35;
  double max_frac = 0.6;
  /// Intersection over the smaller box area for in_front_of / behind.
  double overlap_min = 0.15;
  double overlap_max = 0.5;
  int max_attempts = 64;
  int max_position_tries = 256;
};

// ---------------------------------------------------------------------------
// Relation predicates

inline void check_index(const SceneLayout& layout, std::size_t i) {
  if (i >= layout.placements.size()) {
    throw Error(Errc::index_out_of_range,
                "entity index " + std::to_string(i) + " out of " +
                    std::to_string(layout.placements.size()));
  }
}

/// Relative form (j given) compares box centers, or depth plus non-zero box
/// overlap for in_front_of/behind. Absolute form (j empty) asks whether i is
/// the strict extreme among all placements; middle means strictly nearest to
/// the canvas center.
inline bool eval_relation(const SceneLayout& layout, std::size_t i, std::optional<std::size_t> j,
                          Relation rel) {
  check_index(layout, i);
  const auto& ps = layout.placements;
  const BBox bi = ps[i].bbox();

  if (j) {
    check_index(layout, *j);
    if (*j == i) return false;
    const BBox bj = ps[*j].bbox();
    switch (rel) {
      case Relation::left: return bi.center_x() < bj.center_x();
      case Relation::right: return bi.center_x() > bj.center_x();
      case Relation::top: return bi.center_y() < bj.center_y();
      case Relation::bottom: return bi.center_y() > bj.center_y();
      case Relation::in_front_of: return ps[i].z > ps[*j].z && bi.overlaps(bj);
      case Relation::behind: return ps[i].z < ps[*j].z && bi.overlaps(bj);
      case Relation::beside: return bi.center_x() != bj.center_x();
      case Relation::middle: return false;
    }
    return false;
  }

  auto strict_extreme = [&](auto key, bool want_min) {
    const double ki = key(i);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (k == i) continue;
      const double kk = key(k);
      if (want_min ? !(ki < kk) : !(ki > kk)) return false;
    }
    return true;
  };
  auto cx = [&](std::size_t k) { return ps[k].bbox().center_x(); };
  auto cy = [&](std::size_t k) { return ps[k].bbox().center_y(); };
  auto z = [&](std::size_t k) { return static_cast<double>(ps[k].z); };
  auto overlaps_any = [&] {
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (k != i && bi.overlaps(ps[k].bbox())) return true;
    }
    return false;
  };

  switch (rel) {
    case Relation::left: return strict_extreme(cx, true);
    case Relation::right: return strict_extreme(cx, false);
    case Relation::top: return strict_extreme(cy, true);
    case Relation::bottom: return strict_extreme(cy, false);
    case Relation::in_front_of: return overlaps_any() && strict_extreme(z, false);
    case Relation::behind: return overlaps_any() && strict_extreme(z, true);
    case Relation::middle: {
      const double mx = layout.canvas_w / 2.0;
      const double my = layout.canvas_h / 2.0;
      auto dist = [&](std::size_t k) {
        const double dx = cx(k) - mx;
        const double dy = cy(k) - my;
        return dx * dx + dy * dy;
      };
      return strict_extreme(dist, true);
    }
    case Relation::beside: return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Planning

namespace detail {

/// Integer scaled size with max-dimension drawn in the configured band.
inline Placement draw_scale(const LayoutItem& item, int canvas_w, int canvas_h,
                            const LayoutConfig& cfg, Rng& rng) {
  const int min_dim = std::min(canvas_w, canvas_h);
  const int lo = static_cast<int>(std::ceil(cfg.min_frac * min_dim));
  const int hi = static_cast<int>(std::floor(cfg.max_frac * min_dim));
  if (lo < 1 || hi < lo) {
    throw Error(Errc::placement_infeasible,
                "canvas " + std::to_string(canvas_w) + "x" + std::to_string(canvas_h) +
                    " too small for the scale band");
  }
  const int target = static_cast<int>(uniform_int(rng, lo, hi));
  const int src_max = std::max(item.width, item.height);
  Placement p;
  p.entity_id = item.id;
  p.scale = static_cast<double>(target) / src_max;
  if (item.width >= item.height) {
    p.width = target;
    p.height = std::max(1, static_cast<int>(std::lround(item.height * p.scale)));
  } else {
    p.height = target;
    p.width = std::max(1, static_cast<int>(std::lround(item.width * p.scale)));
  }
  return p;
}

/// Places `a` before `b` along one axis without overlap; false if they do
/// not fit. Writes offsets on both axes.
inline bool place_ordered(Placement& a, Placement& b, bool horizontal, int canvas_w, int canvas_h,
                          Rng& rng) {
  const int extent = horizontal ? canvas_w : canvas_h;
  const int sa = horizontal ? a.width : a.height;
  const int sb = horizontal ? b.width : b.height;
  if (sa + sb > extent) return false;
  const int first = static_cast<int>(uniform_int(rng, 0, extent - sa - sb));
  const int second = static_cast<int>(uniform_int(rng, first + sa, extent - sb));
  if (horizontal) {
    a.offset_x = first;
    b.offset_x = second;
    a.offset_y = static_cast<int>(uniform_int(rng, 0, canvas_h - a.height));
    b.offset_y = static_cast<int>(uniform_int(rng, 0, canvas_h - b.height));
  } else {
    a.offset_y = first;
    b.offset_y = second;
    a.offset_x = static_cast<int>(uniform_int(rng, 0, canvas_w - a.width));
    b.offset_x = static_cast<int>(uniform_int(rng, 0, canvas_w - b.width));
  }
  return true;
}

inline bool place_anywhere(Placement& p, int canvas_w, int canvas_h, Rng& rng) {
  if (p.width > canvas_w || p.height > canvas_h) return false;
  p.offset_x = static_cast<int>(uniform_int(rng, 0, canvas_w - p.width));
  p.offset_y = static_cast<int>(uniform_int(rng, 0, canvas_h - p.height));
  return true;
}

inline double overlap_ratio(const BBox& a, const BBox& b) {
  return static_cast<double>(a.intersection_area(b)) / std::min(a.area(), b.area());
}

/// Places `front` so that it overlaps `back` within the configured band.
inline bool place_overlapping(Placement& front, const Placement& back, int canvas_w, int canvas_h,
                              const LayoutConfig& cfg, Rng& rng) {
  const BBox bb = back.bbox();
  const int x_lo = std::max(0, bb.x0 - front.width + 1);
  const int x_hi = std::min(canvas_w - front.width, bb.x1 - 1);
  const int y_lo = std::max(0, bb.y0 - front.height + 1);
  const int y_hi = std::min(canvas_h - front.height, bb.y1 - 1);
  if (x_hi < x_lo || y_hi < y_lo) return false;
  for (int t = 0; t < cfg.max_position_tries; ++t) {
    front.offset_x = static_cast<int>(uniform_int(rng, x_lo, x_hi));
    front.offset_y = static_cast<int>(uniform_int(rng, y_lo, y_hi));
    const double r = overlap_ratio(front.bbox(), bb);
    if (r >= cfg.overlap_min && r <= cfg.overlap_max) return true;
  }
  return false;
}

}  // namespace detail

/// Lays out 2 or 3 entities so that entity 0 stands in `relation` to entity
/// 1. A third entity goes into free space without touching the others.
inline SceneLayout plan_layout(std::span<const LayoutItem> items, Relation relation, int canvas_w,
                               int canvas_h, Rng& rng, const LayoutConfig& cfg = {}) {
  if (!is_layout_relation(relation)) {
    throw Error(Errc::placement_infeasible,
                "'" + std::string(to_string(relation)) + "' is not a layout relation");
  }
  if (items.size() < 2 || items.size() > 3) {
    throw Error(Errc::placement_infeasible, "layouts hold 2 or 3 entities, got " +
                                                std::to_string(items.size()));
  }
  if (is_occluding(relation) && items.size() != 2) {
    throw Error(Errc::placement_infeasible, "in_front_of/behind layouts hold exactly 2 entities");
  }
  for (const auto& it : items) {
    if (it.width <= 0 || it.height <= 0) {
      throw Error(Errc::placement_infeasible, "entity '" + it.id + "' has no extent");
    }
  }

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    SceneLayout layout;
    layout.canvas_w = canvas_w;
    layout.canvas_h = canvas_h;
    for (const auto& it : items) {
      layout.placements.push_back(detail::draw_scale(it, canvas_w, canvas_h, cfg, rng));
    }
    auto& a = layout.placements[0];
    auto& b = layout.placements[1];

    bool ok = false;
    switch (relation) {
      case Relation::left: ok = detail::place_ordered(a, b, true, canvas_w, canvas_h, rng); break;
      case Relation::right: ok = detail::place_ordered(b, a, true, canvas_w, canvas_h, rng); break;
      case Relation::top: ok = detail::place_ordered(a, b, false, canvas_w, canvas_h, rng); break;
      case Relation::bottom:
        ok = detail::place_ordered(b, a, false, canvas_w, canvas_h, rng);
        break;
      case Relation::in_front_of:
        ok = detail::place_anywhere(b, canvas_w, canvas_h, rng) &&
             detail::place_overlapping(a, b, canvas_w, canvas_h, cfg, rng);
        a.z = 1;
        b.z = 0;
        break;
      case Relation::behind:
        ok = detail::place_anywhere(a, canvas_w, canvas_h, rng) &&
             detail::place_overlapping(b, a, canvas_w, canvas_h, cfg, rng);
        a.z = 0;
        b.z = 1;
        break;
      default: break;
    }
    if (!ok) continue;
    if (!is_occluding(relation)) {
      for (std::size_t k = 0; k < layout.placements.size(); ++k) {
        layout.placements[k].z = static_cast<int>(k);
      }
    }

    if (items.size() == 3) {
      auto& c = layout.placements[2];
      bool placed = false;
      for (int t = 0; t < cfg.max_position_tries && !placed; ++t) {
        if (!detail::place_anywhere(c, canvas_w, canvas_h, rng)) break;
        placed = !c.bbox().overlaps(a.bbox()) && !c.bbox().overlaps(b.bbox());
      }
      if (!placed) continue;
    }

    layout.relation_facts.push_back({0, 1, relation});
    if (!eval_relation(layout, 0, 1, relation)) continue;
    return layout;
  }
  throw Error(Errc::placement_infeasible,
              "no layout for relation '" + std::string(to_string(relation)) + "' after " +
                  std::to_string(cfg.max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// JSON

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline nlohmann::json to_json(const SceneLayout& layout) {
  nlohmann::json j;
  j["canvas_w"] = layout.canvas_w;
  j["canvas_h"] = layout.canvas_h;
  j["placements"] = nlohmann::json::array();
  for (const auto& p : layout.placements) {
    j["placements"].push_back({{"entity_id", p.entity_id},
                               {"scale", round6(p.scale)},
                               {"offset_x", p.offset_x},
                               {"offset_y", p.offset_y},
                               {"width", p.width},
                               {"height", p.height},
                               {"z", p.z}});
  }
  j["relation_facts"] = nlohmann::json::array();
  for (const auto& f : layout.relation_facts) {
    j["relation_facts"].push_back({{"subject", f.subject},
                                   {"object", f.object},
                                   {"relation", std::string(to_string(f.relation))}});
  }
  return j;
}

inline SceneLayout layout_from_json(const nlohmann::json& j) {
  SceneLayout layout;
  layout.canvas_w = j.at("canvas_w").get<int>();
  layout.canvas_h = j.at("canvas_h").get<int>();
  for (const auto& p : j.at("placements")) {
    Placement pl;
    pl.entity_id = p.at("entity_id").get<std::string>();
    pl.scale = p.at("scale").get<double>();
    pl.offset_x = p.at("offset_x").get<int>();
    pl.offset_y = p.at("offset_y").get<int>();
    pl.width = p.at("width").get<int>();
    pl.height = p.at("height").get<int>();
    pl.z = p.at("z").get<int>();
    layout.placements.push_back(std::move(pl));
  }
  for (const auto& f : j.at("relation_facts")) {
    layout.relation_facts.push_back({f.at("subject").get<std::size_t>(),
                                     f.at("object").get<std::size_t>(),
                                     parse_relation(f.at("relation").get<std::string>())});
  }
  return layout;
}

}  // namespace forge
