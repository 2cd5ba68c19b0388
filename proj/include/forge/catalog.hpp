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

// Entity ingestion and attribute annotation.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/attributes.hpp"
#include "forge/css_colors.hpp"
#include "forge/error.hpp"
#include "forge/png_io.hpp"
#include "forge/raster.hpp"
#include "forge/tables.hpp"

namespace forge {

/// Everything about an entity except its pixels.
struct EntityInfo {
  std::string id;
  std::string category;
  std::set<std::string> synonyms;
  EntityClass entity_class = EntityClass::object;
  AttributeSet attributes;

  bool is_human() const { return entity_class == EntityClass::human; }
  friend bool operator==(const EntityInfo&, const EntityInfo&) = default;
};

struct Entity {
  EntityInfo info;
  Rgb8 rgb;
  AlphaMap alpha;

  const std::string& id() const { return info.id; }
  int width() const { return rgb.width(); }
  int height() const { return rgb.height(); }
};

/// One metadata record as supplied alongside the rasters.
struct EntityMetadata {
  std::string id;
  std::string category;
  EntityClass entity_class = EntityClass::object;
  std::optional<Gender> gender;
  std::optional<int> age;
  std::optional<AgeGroup> age_group;
  std::optional<std::string> clothes;

  static EntityMetadata from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct LoadOptions {
  /// Accept categories missing from the tables (non-transparent, salient).
  bool allow_unknown_category = false;
};

// ---------------------------------------------------------------------------
// Attribute annotation

inline constexpr double kOpacityThreshold = 0.5;
inline constexpr int kColorBins = 16;

/// Dominant color name of the opaque part of an entity: a 16-bin-per-channel
/// histogram over pixels with alpha > 0.5, the mean color of the modal bin,
/// then the nearest CSS3 keyword.
inline std::string annotate_color(const Rgb8& rgb, const AlphaMap& alpha) {
  if (!rgb.same_size(alpha)) throw Error(Errc::dimension_mismatch, "rgb and alpha differ in size");
  constexpr int width = 256 / kColorBins;
  constexpr int kBins = kColorBins * kColorBins * kColorBins;
  std::vector<std::uint32_t> count(kBins, 0);
  std::vector<std::array<std::uint64_t, 3>> sum(kBins, {0, 0, 0});
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      if (!(alpha.at(x, y) > kOpacityThreshold)) continue;
      const auto p = rgb.pixel(x, y);
      const int bin = (p[0] / width) * kColorBins * kColorBins + (p[1] / width) * kColorBins +
                      (p[2] / width);
      ++count[bin];
      for (int c = 0; c < 3; ++c) sum[bin][c] += p[c];
    }
  }
  // First maximum wins: ties go to the lowest bin index.
  const auto mode = std::max_element(count.begin(), count.end()) - count.begin();
  if (count[mode] == 0) throw Error(Errc::empty_entity, "no pixel with alpha > 0.5");
  const double n = count[mode];
  return std::string(nearest_css_color(sum[mode][0] / n, sum[mode][1] / n, sum[mode][2] / n));
}

struct VisualFlags {
  bool transparent;
  bool salient;
  friend bool operator==(const VisualFlags&, const VisualFlags&) = default;
};

inline VisualFlags annotate_flags(const std::string& category, const CategoryTables& tables) {
  if (!tables.contains(category)) {
    throw Error(Errc::unknown_category, "category '" + category + "' not in tables");
  }
  return {tables.transparent_set.count(category) != 0, tables.non_salient_set.count(category) == 0};
}

/// Age sub-brackets of the human synonym table, inclusive.
struct AgeBracket {
  int lo;
  int hi;
  AgeGroup group;
  double midpoint() const { return (lo + hi) / 2.0; }
};

inline constexpr std::array<AgeBracket, 8> kAgeBrackets = {{
    {0, 2, AgeGroup::child},
    {4, 6, AgeGroup::child},
    {8, 12, AgeGroup::child},
    {15, 20, AgeGroup::youth},
    {25, 32, AgeGroup::adult},
    {38, 43, AgeGroup::adult},
    {48, 53, AgeGroup::adult},
    {60, 100, AgeGroup::senior},
}};

/// Ages inside a listed sub-bracket take its group; ages in the gaps take the
/// group of the nearest sub-bracket midpoint, ties going to the younger group.
inline AgeGroup age_to_group(int age) {
  if (age < 0 || age > 130) {
    throw Error(Errc::invalid_metadata, "age " + std::to_string(age) + " outside [0, 130]");
  }
  for (const auto& b : kAgeBrackets) {
    if (age >= b.lo && age <= b.hi) return b.group;
  }
  const AgeBracket* best = &kAgeBrackets.front();
  double best_dist = std::abs(age - best->midpoint());
  for (const auto& b : kAgeBrackets) {
    const double d = std::abs(age - b.midpoint());
    if (d < best_dist) {  // strict: brackets are ordered young to old
      best_dist = d;
      best = &b;
    }
  }
  return best->group;
}

inline std::set<std::string> human_synonyms(Gender gender, AgeGroup age,
                                            const CategoryTables& tables) {
  std::set<std::string> out = tables.human_base_synonyms;
  if (auto it = tables.human_synonyms.find({gender, age}); it != tables.human_synonyms.end()) {
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

inline Entity make_entity(const EntityMetadata& meta, Rgb8 rgb, const Gray8& alpha8,
                          const CategoryTables& tables, const LoadOptions& options = {}) {
  if (meta.id.empty()) throw Error(Errc::invalid_metadata, "entity id is empty");
  if (!rgb.same_size(alpha8)) {
    throw Error(Errc::dimension_mismatch,
                "entity '" + meta.id + "': rgb " + std::to_string(rgb.width()) + "x" +
                    std::to_string(rgb.height()) + " vs alpha " + std::to_string(alpha8.width()) +
                    "x" + std::to_string(alpha8.height()));
  }
  const auto alpha_samples = alpha8.samples();
  if (std::none_of(alpha_samples.begin(), alpha_samples.end(), [](auto v) { return v > 0; })) {
    throw Error(Errc::empty_entity, "entity '" + meta.id + "' has an all-zero alpha");
  }

  Entity e;
  e.info.id = meta.id;
  e.info.category = meta.category;
  e.info.entity_class = meta.entity_class;
  e.rgb = std::move(rgb);
  e.alpha = decode_alpha(alpha8);

  const bool known = tables.contains(meta.category);
  if (!known && !options.allow_unknown_category) {
    throw Error(Errc::unknown_category,
                "entity '" + meta.id + "': category '" + meta.category + "' not in tables");
  }

  auto& attrs = e.info.attributes;
  attrs.color = annotate_color(e.rgb, e.alpha);
  if (known) {
    const auto flags = annotate_flags(meta.category, tables);
    attrs.transparent = flags.transparent;
    attrs.salient = flags.salient;
  }
  e.info.synonyms = tables.synonyms_of(meta.category);

  if (meta.entity_class == EntityClass::human) {
    if (meta.category != kHumanCategory) {
      throw Error(Errc::invalid_metadata,
                  "human entity '" + meta.id + "' must use category '" + kHumanCategory + "'");
    }
    if (!meta.gender) throw Error(Errc::invalid_metadata, "human '" + meta.id + "' lacks gender");
    if (!meta.age && !meta.age_group) {
      throw Error(Errc::invalid_metadata, "human '" + meta.id + "' lacks age or age_group");
    }
    if (!meta.clothes) throw Error(Errc::invalid_metadata, "human '" + meta.id + "' lacks clothes");
    if (!tables.clothes.count(*meta.clothes)) {
      throw Error(Errc::invalid_metadata,
                  "human '" + meta.id + "': clothes '" + *meta.clothes + "' not in vocabulary");
    }
    attrs.transparent = false;
    attrs.salient = true;
    attrs.gender = meta.gender;
    attrs.age_group = meta.age_group ? *meta.age_group : age_to_group(*meta.age);
    attrs.clothes = meta.clothes;
    const auto extra = human_synonyms(*attrs.gender, *attrs.age_group, tables);
    e.info.synonyms.insert(extra.begin(), extra.end());
  } else if (meta.category == kHumanCategory) {
    throw Error(Errc::invalid_metadata,
                "entity '" + meta.id + "' has category 'human' but class " +
                    std::string(to_string(meta.entity_class)));
  }
  return e;
}

/// Loads an entity from a color PNG plus a grayscale alpha PNG. An empty
/// `alpha_path` means `rgb_path` is a single RGBA PNG.
inline Entity load_entity(const std::filesystem::path& rgb_path,
                          const std::filesystem::path& alpha_path, const EntityMetadata& meta,
                          const CategoryTables& tables, const LoadOptions& options = {}) {
  if (alpha_path.empty()) {
    auto [rgb, alpha] = read_rgba_png(rgb_path);
    return make_entity(meta, std::move(rgb), alpha, tables, options);
  }
  return make_entity(meta, read_rgb_png(rgb_path), read_gray_png(alpha_path), tables, options);
}

/// Writes `<dir>/<id>_rgb.png` and `<dir>/<id>_alpha.png`; returns both paths.
inline std::pair<std::filesystem::path, std::filesystem::path> save_entity(
    const Entity& e, const std::filesystem::path& dir) {
  auto rgb_path = dir / (e.id() + "_rgb.png");
  auto alpha_path = dir / (e.id() + "_alpha.png");
  write_png(rgb_path, e.rgb);
  write_png(alpha_path, encode_alpha(e.alpha));
  return {rgb_path, alpha_path};
}

// ---------------------------------------------------------------------------
// JSON

inline EntityMetadata EntityMetadata::from_json(const nlohmann::json& j) {
  EntityMetadata m;
  try {
    m.id = j.at("id").get<std::string>();
    m.category = j.at("category").get<std::string>();
    m.entity_class = parse_entity_class(j.at("class").get<std::string>());
    if (j.contains("gender")) m.gender = parse_gender(j.at("gender").get<std::string>());
    if (j.contains("age")) m.age = j.at("age").get<int>();
    if (j.contains("age_group")) m.age_group = parse_age_group(j.at("age_group").get<std::string>());
    if (j.contains("clothes")) m.clothes = j.at("clothes").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_metadata, std::string("entity metadata: ") + e.what());
  }
  return m;
}

inline nlohmann::json EntityMetadata::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["category"] = category;
  j["class"] = std::string(to_string(entity_class));
  if (gender) j["gender"] = std::string(to_string(*gender));
  if (age) j["age"] = *age;
  if (age_group) j["age_group"] = std::string(to_string(*age_group));
  if (clothes) j["clothes"] = *clothes;
  return j;
}

inline nlohmann::json to_json(const AttributeSet& a) {
  nlohmann::json j;
  j["color"] = a.color;
  j["transparent"] = a.transparent;
  j["salient"] = a.salient;
  if (a.gender) j["gender"] = std::string(to_string(*a.gender));
  if (a.age_group) j["age_group"] = std::string(to_string(*a.age_group));
  if (a.clothes) j["clothes"] = *a.clothes;
  return j;
}

inline AttributeSet attribute_set_from_json(const nlohmann::json& j) {
  AttributeSet a;
  a.color = j.at("color").get<std::string>();
  a.transparent = j.at("transparent").get<bool>();
  a.salient = j.at("salient").get<bool>();
  if (j.contains("gender")) a.gender = parse_gender(j.at("gender").get<std::string>());
  if (j.contains("age_group")) a.age_group = parse_age_group(j.at("age_group").get<std::string>());
  if (j.contains("clothes")) a.clothes = j.at("clothes").get<std::string>();
  return a;
}

inline nlohmann::json to_json(const EntityInfo& e) {
  nlohmann::json j;
  j["entity_id"] = e.id;
  j["category"] = e.category;
  j["class"] = std::string(to_string(e.entity_class));
  j["synonyms"] = e.synonyms;
  j["attributes"] = to_json(e.attributes);
  return j;
}

inline EntityInfo entity_info_from_json(const nlohmann::json& j) {
  EntityInfo e;
  e.id = j.at("entity_id").get<std::string>();
  e.category = j.at("category").get<std::string>();
  e.entity_class = parse_entity_class(j.at("class").get<std::string>());
  e.synonyms = j.at("synonyms").get<std::set<std::string>>();
  e.attributes = attribute_set_from_json(j.at("attributes"));
  return e;
}

/// Tables extended with any category (and synonyms) an entity brings along
/// that the tables lack, so the expression vocabulary covers the catalog.
inline CategoryTables extend_tables(CategoryTables tables, const std::vector<EntityInfo>& infos) {
  for (const auto& e : infos) {
    if (e.is_human()) continue;
    auto& syn = tables.synonym_map[e.category];
    for (const auto& s : e.synonyms) {
      if (s != e.category) syn.insert(s);
    }
  }
  return tables;
}

/// A catalog file lists entities with their raster paths (relative to the
/// catalog file) and metadata:
///   {"entities": [{"rgb": "a.png", "alpha": "a_alpha.png", "id": ..., ...}]}
/// Omitting "alpha" means "rgb" is an RGBA PNG.
inline std::vector<Entity> load_catalog(const std::filesystem::path& path, const CategoryTables& tables,
                                        const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open catalog '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_metadata, "catalog '" + path.string() + "': " + e.what());
  }
  if (!doc.contains("entities") || !doc.at("entities").is_array()) {
    throw Error(Errc::invalid_metadata, "catalog '" + path.string() + "' lacks an \"entities\" array");
  }
  const auto base = path.parent_path();
  std::vector<Entity> out;
  for (const auto& rec : doc.at("entities")) {
    if (!rec.contains("rgb")) throw Error(Errc::invalid_metadata, "catalog record lacks \"rgb\"");
    const auto meta = EntityMetadata::from_json(rec);
    const auto rgb = base / rec.at("rgb").get<std::string>();
    const std::filesystem::path alpha =
        rec.contains("alpha") ? base / rec.at("alpha").get<std::string>() : std::filesystem::path{};
    out.push_back(load_entity(rgb, alpha, meta, tables, options));
  }
  return out;
}

}  // namespace forge
