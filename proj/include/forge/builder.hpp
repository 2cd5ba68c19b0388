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

// Dataset construction: balance each split, form groups, render the grouped
// and the extra random composites, attach keywords and verified expressions,
// and write rasters plus the manifest.
//
// Every composite draws from its own stream seeded by (master_seed, split,
// composite index, attempt), and results are merged in index order, so the
// output does not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <spdlog/spdlog.h>

#include "json.hpp"

#include "forge/balance.hpp"
#include "forge/catalog.hpp"
#include "forge/composite.hpp"
#include "forge/error.hpp"
#include "forge/expressions.hpp"
#include "forge/grounding.hpp"
#include "forge/layout.hpp"
#include "forge/lexicon.hpp"
#include "forge/manifest.hpp"
#include "forge/parallel.hpp"
#include "forge/png_io.hpp"
#include "forge/random.hpp"

namespace forge {

/// Weights of {left/right, top/bottom, in_front_of/behind}.
struct RelationRatio {
  double lateral = 7.0;
  double vertical = 2.0;
  double depth = 1.0;
};

struct BuildConfig {
  std::uint64_t master_seed = 0;
  int composites_per_group_train = 20;
  int composites_per_group_test = 10;
  int extra_random_train = 2800;
  int extra_random_test = 390;
  RelationRatio relation_ratio;
  /// Empty means the smallest unit that needs no entity removed.
  std::optional<std::int64_t> balance_unit_train;
  std::optional<std::int64_t> balance_unit_test;
  /// Fixed canvas (backgrounds resampled to it); empty keeps each
  /// background's own size.
  std::optional<std::pair<int, int>> canvas;
  LayoutConfig layout;
  GenerateOptions generation;
  /// Resample attempts per composite before it is reported as failed.
  int max_resample = 32;
  /// 0 means one worker per hardware thread.
  int workers = 0;
  std::filesystem::path output_dir;
  bool write_rasters = true;

  void validate() const {
    if (composites_per_group_train <= 0 || composites_per_group_test <= 0) {
      throw Error(Errc::usage_error, "composites per group must be positive");
    }
    if (extra_random_train < 0 || extra_random_test < 0) {
      throw Error(Errc::usage_error, "extra composite counts must be non-negative");
    }
    if (!(relation_ratio.lateral > 0 && relation_ratio.vertical > 0 && relation_ratio.depth > 0)) {
      throw Error(Errc::usage_error, "relation ratios must be positive");
    }
    if (max_resample <= 0) throw Error(Errc::usage_error, "max_resample must be positive");
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["master_seed"] = master_seed;
    j["composites_per_group_train"] = composites_per_group_train;
    j["composites_per_group_test"] = composites_per_group_test;
    j["extra_random_train"] = extra_random_train;
    j["extra_random_test"] = extra_random_test;
    j["relation_ratio"] = {relation_ratio.lateral, relation_ratio.vertical, relation_ratio.depth};
    j["balance_unit_train"] = balance_unit_train ? nlohmann::json(*balance_unit_train) : nlohmann::json("AUTO");
    j["balance_unit_test"] = balance_unit_test ? nlohmann::json(*balance_unit_test) : nlohmann::json("AUTO");
    j["canvas"] = canvas ? nlohmann::json({canvas->first, canvas->second}) : nlohmann::json("background");
    j["layout"] = {{"min_frac", layout.min_frac},
                   {"max_frac", layout.max_frac},
                   {"overlap_min", layout.overlap_min},
                   {"overlap_max", layout.overlap_max}};
    j["max_resample"] = max_resample;
    j["max_generation_attempts"] = generation.max_attempts;
    return j;
  }

  /// Reads the keys written by to_json(); absent keys keep their defaults.
  /// Keys it does not know are ignored so one file can also carry paths.
  static BuildConfig from_json(const nlohmann::json& j);
};

namespace detail {

inline std::optional<std::int64_t> unit_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "AUTO") return std::nullopt;
    throw Error(Errc::usage_error, "balance unit must be a positive integer or \"AUTO\"");
  }
  const auto u = v.get<std::int64_t>();
  if (u <= 0) throw Error(Errc::usage_error, "balance unit must be positive");
  return u;
}

}  // namespace detail

inline BuildConfig BuildConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::usage_error, "build config must be a JSON object");
  BuildConfig c;
  try {
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("composites_per_group_train"))
      c.composites_per_group_train = j.at("composites_per_group_train").get<int>();
    if (j.contains("composites_per_group_test"))
      c.composites_per_group_test = j.at("composites_per_group_test").get<int>();
    if (j.contains("extra_random_train")) c.extra_random_train = j.at("extra_random_train").get<int>();
    if (j.contains("extra_random_test")) c.extra_random_test = j.at("extra_random_test").get<int>();
    if (j.contains("relation_ratio")) {
      const auto r = j.at("relation_ratio").get<std::vector<double>>();
      if (r.size() != 3) throw Error(Errc::usage_error, "relation_ratio needs 3 weights");
      c.relation_ratio = {r[0], r[1], r[2]};
    }
    if (j.contains("balance_unit_train")) c.balance_unit_train = detail::unit_from_json(j.at("balance_unit_train"));
    if (j.contains("balance_unit_test")) c.balance_unit_test = detail::unit_from_json(j.at("balance_unit_test"));
    if (j.contains("canvas")) {
      const auto& v = j.at("canvas");
      if (v.is_string()) {
        if (v.get<std::string>() != "background") {
          throw Error(Errc::usage_error, "canvas must be [width, height] or \"background\"");
        }
        c.canvas.reset();
      } else {
        const auto wh = v.get<std::vector<int>>();
        if (wh.size() != 2 || wh[0] <= 0 || wh[1] <= 0) {
          throw Error(Errc::usage_error, "canvas must be two positive integers");
        }
        c.canvas = std::pair{wh[0], wh[1]};
      }
    }
    if (j.contains("layout")) {
      const auto& l = j.at("layout");
      c.layout.min_frac = l.value("min_frac", c.layout.min_frac);
      c.layout.max_frac = l.value("max_frac", c.layout.max_frac);
      c.layout.overlap_min = l.value("overlap_min", c.layout.overlap_min);
      c.layout.overlap_max = l.value("overlap_max", c.layout.overlap_max);
    }
    if (j.contains("max_resample")) c.max_resample = j.at("max_resample").get<int>();
    if (j.contains("max_generation_attempts"))
      c.generation.max_attempts = j.at("max_generation_attempts").get<int>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::usage_error, std::string("malformed build config: ") + e.what());
  }
  c.validate();
  return c;
}

struct Background {
  std::string id;
  Rgb8 image;
};

/// Every PNG in `dir`, id = file stem, in name order.
inline std::vector<Background> load_backgrounds(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(Errc::io_error, "background directory '" + dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(dir)) {
    if (f.is_regular_file() && f.path().extension() == ".png") files.push_back(f.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Background> out;
  for (const auto& f : files) out.push_back({f.stem().string(), read_rgb_png(f)});
  return out;
}

/// One relation drawn at the configured ratio, direction uniform within its
/// class.
inline Relation sample_relation(const RelationRatio& ratio, Rng& rng) {
  const double weights[] = {ratio.lateral, ratio.vertical, ratio.depth};
  const auto cls = weighted_index(weights, rng);
  const bool first = coin(rng);
  switch (cls) {
    case 0: return first ? Relation::left : Relation::right;
    case 1: return first ? Relation::top : Relation::bottom;
    default: return first ? Relation::in_front_of : Relation::behind;
  }
}

inline ClassPool class_pool(const std::vector<Entity>& entities) {
  ClassPool pool;
  for (const auto& e : entities) pool.of(e.info.entity_class).push_back(e.id());
  return pool;
}

namespace detail {

inline constexpr std::uint64_t kSplitTrain = 1;
inline constexpr std::uint64_t kSplitTest = 2;

struct CompositeJob {
  std::string split;
  std::uint64_t split_tag = 0;
  std::size_t index = 0;
  /// Candidate entity ids: a group's members, or the whole split.
  const std::vector<std::string>* candidates = nullptr;
};

struct JobResult {
  std::optional<ManifestImage> image;
  std::optional<BuildFailure> failure;
};

inline std::string image_id(const std::string& split, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return split + "_" + buf;
}

class DatasetForge {
 public:
  DatasetForge(const BuildConfig& cfg, const std::vector<Entity>& train,
               const std::vector<Entity>& test, const std::vector<Background>& backgrounds,
               const Lexicon& lex)
      : cfg_(cfg), backgrounds_(backgrounds), lex_(lex) {
    for (const auto* split : {&train, &test}) {
      for (const auto& e : *split) {
        if (!by_id_.emplace(e.id(), &e).second) {
          throw Error(Errc::invalid_metadata,
                      "entity id '" + e.id() + "' appears twice or in both splits");
        }
      }
    }
    if (backgrounds_.empty()) throw Error(Errc::usage_error, "background pool is empty");
    if (cfg_.canvas) {
      for (const auto& b : backgrounds_) {
        resized_.push_back(to_bytes(resize_bilinear(b.image, cfg_.canvas->first, cfg_.canvas->second)));
      }
    }
  }

  JobResult run(const CompositeJob& job) const {
    JobResult result;
    const std::string id = image_id(job.split, job.index);
    std::string last_error;
    for (int attempt = 0; attempt < cfg_.max_resample; ++attempt) {
      Rng rng = make_rng({cfg_.master_seed, job.split_tag, static_cast<std::uint64_t>(job.index),
                          static_cast<std::uint64_t>(attempt)});
      try {
        result.image = attempt_composite(job, id, rng);
        return result;
      } catch (const Error& e) {
        if (e.code() != Errc::placement_infeasible && e.code() != Errc::ungroundable_expression &&
            e.code() != Errc::no_true_relation) {
          throw;
        }
        last_error = e.what();
        spdlog::debug("{} attempt {}: {}", id, attempt, last_error);
      }
    }
    spdlog::warn("{} failed after {} attempts: {}", id, cfg_.max_resample, last_error);
    result.failure = BuildFailure{id, last_error};
    return result;
  }

 private:
  ManifestImage attempt_composite(const CompositeJob& job, const std::string& id, Rng& rng) const {
    const Relation relation = sample_relation(cfg_.relation_ratio, rng);
    std::vector<std::string> pool = *job.candidates;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    const std::size_t count = is_occluding(relation) ? 2 : static_cast<std::size_t>(uniform_int(rng, 2, 3));
    if (pool.size() < count) {
      throw Error(Errc::placement_infeasible, "only " + std::to_string(pool.size()) +
                                                  " distinct candidates for " + id);
    }
    shuffle(pool, rng);
    pool.resize(count);

    const auto bg_index = uniform_index(rng, backgrounds_.size());
    const Background& bg = backgrounds_[bg_index];
    const Rgb8& canvas = cfg_.canvas ? resized_[bg_index] : bg.image;

    std::vector<const Entity*> entities;
    std::vector<LayoutItem> items;
    for (const auto& eid : pool) {
      const Entity* e = by_id_.at(eid);
      entities.push_back(e);
      items.push_back({e->id(), e->width(), e->height()});
    }
    const auto layout = plan_layout(items, relation, canvas.width(), canvas.height(), rng, cfg_.layout);

    SceneMeta scene;
    scene.layout = layout;
    for (const auto* e : entities) scene.entities.push_back(e->info);

    ManifestImage image;
    image.image_id = id;
    image.split = job.split;
    image.background_id = bg.id;
    image.layout = layout;
    image.composite_path = "images/" + id + ".png";
    image.keyword_ok = keyword_unambiguous(scene.entities);
    for (std::size_t i = 0; i < entities.size(); ++i) {
      ManifestEntity me;
      me.info = entities[i]->info;
      me.alpha_path = "mattes/" + id + "/" + me.info.id + ".png";
      me.keyword = keyword_for(me.info, lex_, rng);
      me.expressions = generate_suite(i, scene, lex_, rng, cfg_.generation);
      image.entities.push_back(std::move(me));
    }

    if (cfg_.write_rasters) {
      const auto rendered = composite(layout, entities, canvas);
      write_png(cfg_.output_dir / image.composite_path, rendered.image8);
      for (std::size_t i = 0; i < entities.size(); ++i) {
        write_png(cfg_.output_dir / image.entities[i].alpha_path,
                  encode_alpha(rendered.visible_alphas[i]));
      }
    }
    return image;
  }

  const BuildConfig& cfg_;
  const std::vector<Background>& backgrounds_;
  std::vector<Rgb8> resized_;
  const Lexicon& lex_;
  std::unordered_map<std::string, const Entity*> by_id_;
};

}  // namespace detail

/// Builds both splits. Entity ids must be unique across the two pools.
inline DatasetManifest build_dataset(const BuildConfig& cfg, const std::vector<Entity>& train,
                                     const std::vector<Entity>& test,
                                     const std::vector<Background>& backgrounds,
                                     const Lexicon& lex = Lexicon::defaults()) {
  cfg.validate();
  detail::DatasetForge forge(cfg, train, test, backgrounds, lex);

  // Group member lists and the whole-split candidate lists must outlive the
  // jobs that point into them.
  std::vector<std::vector<std::string>> member_lists;
  std::vector<std::string> all_train, all_test;
  for (const auto& e : train) all_train.push_back(e.id());
  for (const auto& e : test) all_test.push_back(e.id());

  struct SplitPlan {
    std::string name;
    std::uint64_t tag;
    const std::vector<Entity>* entities;
    std::optional<std::int64_t> unit;
    int per_group;
    int extra;
    const std::vector<std::string>* all;
  };
  const SplitPlan plans[] = {
      {"train", detail::kSplitTrain, &train, cfg.balance_unit_train, cfg.composites_per_group_train,
       cfg.extra_random_train, &all_train},
      {"test", detail::kSplitTest, &test, cfg.balance_unit_test, cfg.composites_per_group_test,
       cfg.extra_random_test, &all_test},
  };

  std::vector<std::vector<Group>> split_groups;
  for (const auto& plan : plans) {
    if (plan.entities->empty()) {
      split_groups.emplace_back();
      continue;
    }
    Rng rng = make_rng({cfg.master_seed, plan.tag, 0xba1a9ceULL});
    auto pool = balance_pool(class_pool(*plan.entities), plan.unit, rng);
    split_groups.push_back(make_groups(std::move(pool), rng));
  }
  std::size_t total_groups = 0;
  for (const auto& g : split_groups) total_groups += g.size();
  member_lists.reserve(total_groups);

  std::vector<detail::CompositeJob> jobs;
  for (std::size_t s = 0; s < std::size(plans); ++s) {
    const auto& plan = plans[s];
    if (plan.entities->empty()) continue;
    std::size_t index = 0;
    for (const auto& g : split_groups[s]) {
      member_lists.push_back(g.members());
      for (int k = 0; k < plan.per_group; ++k) {
        jobs.push_back({plan.name, plan.tag, index++, &member_lists.back()});
      }
    }
    for (int k = 0; k < plan.extra; ++k) jobs.push_back({plan.name, plan.tag, index++, plan.all});
  }

  std::vector<detail::JobResult> results(jobs.size());
  detail::parallel_for(jobs.size(), cfg.workers,
                       [&](std::size_t i) { results[i] = forge.run(jobs[i]); });

  DatasetManifest manifest;
  manifest.seed = cfg.master_seed;
  manifest.config = cfg.to_json();
  for (auto& r : results) {
    if (r.image) manifest.images.push_back(std::move(*r.image));
    if (r.failure) manifest.failures.push_back(std::move(*r.failure));
  }
  if (!cfg.output_dir.empty()) save_manifest(manifest, cfg.output_dir / "manifest.json");
  return manifest;
}

}  // namespace forge
