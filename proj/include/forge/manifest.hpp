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

// Persisted dataset description. One JSON document, keys sorted, floats
// rounded to 6 decimals, so equal builds give equal bytes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/catalog.hpp"
#include "forge/error.hpp"
#include "forge/expressions.hpp"
#include "forge/grounding.hpp"
#include "forge/layout.hpp"

namespace forge {

inline constexpr const char* kManifestFormat = "matte-forge-manifest/1";

/// Benchmark text mode: category keyword only, or generated expressions.
enum class Setting { keyword, expression };

constexpr std::string_view to_string(Setting s) {
  return s == Setting::keyword ? "keyword" : "expression";
}

inline Setting parse_setting(std::string_view s) {
  if (s == "keyword") return Setting::keyword;
  if (s == "expression") return Setting::expression;
  throw Error(Errc::usage_error, "unknown setting '" + std::string(s) + "'");
}

struct ManifestEntity {
  EntityInfo info;
  /// Visible alpha matte, relative to the manifest directory.
  std::string alpha_path;
  std::string keyword;
  std::vector<ExpressionRecord> expressions;
  std::optional<std::string> dropped_reason;

  bool dropped() const { return dropped_reason.has_value(); }
};

struct ManifestImage {
  std::string image_id;
  std::string split;
  std::string composite_path;
  std::string background_id;
  SceneLayout layout;
  std::vector<ManifestEntity> entities;
  /// No two entities share a synonym, so keywords alone are unambiguous.
  bool keyword_ok = true;

  SceneMeta scene() const {
    SceneMeta s;
    s.layout = layout;
    for (const auto& e : entities) s.entities.push_back(e.info);
    return s;
  }
};

struct BuildFailure {
  std::string image_id;
  std::string reason;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<ManifestImage> images;
  std::vector<BuildFailure> failures;

  const ManifestImage* find(const std::string& image_id) const {
    for (const auto& im : images) {
      if (im.image_id == image_id) return &im;
    }
    return nullptr;
  }
};

inline bool synonym_sets_intersect(const EntityInfo& a, const EntityInfo& b) {
  for (const auto& s : a.synonyms) {
    if (b.synonyms.count(s)) return true;
  }
  return false;
}

inline bool keyword_unambiguous(const std::vector<EntityInfo>& entities) {
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = i + 1; j < entities.size(); ++j) {
      if (synonym_sets_intersect(entities[i], entities[j])) return false;
    }
  }
  return true;
}

/// Images usable in the keyword setting: no two entities with intersecting
/// synonym sets.
inline DatasetManifest filter_keyword_setting(const DatasetManifest& manifest) {
  DatasetManifest out;
  out.seed = manifest.seed;
  out.config = manifest.config;
  out.failures = manifest.failures;
  for (const auto& im : manifest.images) {
    if (keyword_unambiguous(im.scene().entities)) out.images.push_back(im);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const ManifestEntity& e) {
  nlohmann::json j = to_json(e.info);
  j["alpha_path"] = e.alpha_path;
  j["keyword"] = e.keyword;
  j["expressions"] = nlohmann::json::array();
  for (const auto& r : e.expressions) j["expressions"].push_back(to_json(r));
  if (e.dropped_reason) j["dropped_reason"] = *e.dropped_reason;
  return j;
}

inline nlohmann::json to_json(const ManifestImage& im) {
  nlohmann::json j;
  j["image_id"] = im.image_id;
  j["split"] = im.split;
  j["composite_path"] = im.composite_path;
  j["background_id"] = im.background_id;
  j["layout"] = to_json(im.layout);
  j["relation_facts"] = j["layout"]["relation_facts"];
  j["keyword_ok"] = im.keyword_ok;
  j["entities"] = nlohmann::json::array();
  for (const auto& e : im.entities) j["entities"].push_back(to_json(e));
  return j;
}

inline nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json j;
  j["format"] = kManifestFormat;
  j["seed"] = m.seed;
  j["config"] = m.config;
  j["images"] = nlohmann::json::array();
  for (const auto& im : m.images) j["images"].push_back(to_json(im));
  j["failures"] = nlohmann::json::array();
  for (const auto& f : m.failures) {
    j["failures"].push_back({{"image_id", f.image_id}, {"reason", f.reason}});
  }
  return j;
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest m;
  try {
    if (j.value("format", "") != kManifestFormat) {
      throw Error(Errc::io_error, "not a forge manifest");
    }
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.value("config", nlohmann::json::object());
    for (const auto& ji : j.at("images")) {
      ManifestImage im;
      im.image_id = ji.at("image_id").get<std::string>();
      im.split = ji.at("split").get<std::string>();
      im.composite_path = ji.at("composite_path").get<std::string>();
      im.background_id = ji.at("background_id").get<std::string>();
      im.layout = layout_from_json(ji.at("layout"));
      im.keyword_ok = ji.value("keyword_ok", true);
      for (const auto& je : ji.at("entities")) {
        ManifestEntity e;
        e.info = entity_info_from_json(je);
        e.alpha_path = je.at("alpha_path").get<std::string>();
        e.keyword = je.at("keyword").get<std::string>();
        for (const auto& jr : je.at("expressions")) {
          e.expressions.push_back(expression_from_json(jr, e.info.id));
        }
        if (je.contains("dropped_reason")) e.dropped_reason = je.at("dropped_reason").get<std::string>();
        im.entities.push_back(std::move(e));
      }
      m.images.push_back(std::move(im));
    }
    if (j.contains("failures")) {
      for (const auto& f : j.at("failures")) {
        m.failures.push_back({f.at("image_id").get<std::string>(), f.at("reason").get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, std::string("manifest: ") + e.what());
  }
  return m;
}

inline std::string dump_manifest(const DatasetManifest& m) { return to_json(m).dump(1) + "\n"; }

inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << dump_manifest(m);
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, "manifest '" + path.string() + "': " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace forge
