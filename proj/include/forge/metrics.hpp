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

// Alpha-matte error metrics. SAD, MSE and MAD are computed per entity over
// the whole image; aggregates come in two flavours: averaged over every
// scored entity, and averaged per image first then over images (the "(E)"
// variants).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <spdlog/spdlog.h>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/manifest.hpp"
#include "forge/parallel.hpp"
#include "forge/png_io.hpp"
#include "forge/raster.hpp"

namespace forge {

inline constexpr double kDefaultSadScale = 1e-3;

struct EntityScore {
  double sad_raw = 0.0;
  double mse = 0.0;
  double mad = 0.0;
};

/// Errors between a ground-truth and a predicted matte, both in [0,1].
inline EntityScore entity_metrics(const AlphaMap& gt, const AlphaMap& pred) {
  if (!gt.same_size(pred)) {
    throw Error(Errc::size_mismatch, "ground truth is " + std::to_string(gt.width()) + "x" +
                                         std::to_string(gt.height()) + ", prediction is " +
                                         std::to_string(pred.width()) + "x" +
                                         std::to_string(pred.height()));
  }
  auto g = gt.samples();
  auto p = pred.samples();
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0 && g[i] <= 1.0) || !(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw Error(Errc::range_violation, "alpha value outside [0,1] at sample " + std::to_string(i));
    }
    const double d = g[i] - p[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  EntityScore s;
  s.sad_raw = abs_sum;
  if (!g.empty()) {
    s.mse = sq_sum / static_cast<double>(g.size());
    s.mad = abs_sum / static_cast<double>(g.size());
  }
  return s;
}

/// One scored (entity, text) pair.
struct MetricRecord {
  std::string image_id;
  std::string entity_id;
  /// "keyword" or the expression kind.
  std::string text_kind;
  EntityScore score;
  bool missing_prediction = false;
};

struct MetricTriple {
  double sad = 0.0;
  double mse = 0.0;
  double mad = 0.0;
};

struct MetricReport {
  double sad_scale = kDefaultSadScale;
  std::vector<MetricRecord> records;
  /// Mean over every record.
  MetricTriple entity_averaged;
  /// Mean over images of each image's record mean.
  MetricTriple image_averaged;
  std::size_t image_count = 0;
  std::size_t missing_predictions = 0;
};

/// Builds the report from per-record scores. Records are summed in a
/// canonical order, so the result does not depend on input order.
inline MetricReport aggregate(std::vector<MetricRecord> records, double sad_scale = kDefaultSadScale) {
  if (records.empty()) throw Error(Errc::empty_input, "no metric records to aggregate");
  auto key = [](const MetricRecord& r) {
    return std::tie(r.image_id, r.entity_id, r.text_kind, r.score.sad_raw, r.score.mse, r.score.mad);
  };
  std::sort(records.begin(), records.end(),
            [&](const MetricRecord& a, const MetricRecord& b) { return key(a) < key(b); });

  MetricReport report;
  report.sad_scale = sad_scale;
  MetricTriple total;
  MetricTriple image_total;
  MetricTriple current;
  std::size_t current_n = 0;
  auto close_image = [&] {
    if (current_n == 0) return;
    const double n = static_cast<double>(current_n);
    image_total.sad += current.sad / n;
    image_total.mse += current.mse / n;
    image_total.mad += current.mad / n;
    ++report.image_count;
    current = {};
    current_n = 0;
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i > 0 && r.image_id != records[i - 1].image_id) close_image();
    const double sad = r.score.sad_raw * sad_scale;
    total.sad += sad;
    total.mse += r.score.mse;
    total.mad += r.score.mad;
    current.sad += sad;
    current.mse += r.score.mse;
    current.mad += r.score.mad;
    ++current_n;
    if (r.missing_prediction) ++report.missing_predictions;
  }
  close_image();

  const double n = static_cast<double>(records.size());
  report.entity_averaged = {total.sad / n, total.mse / n, total.mad / n};
  const double m = static_cast<double>(report.image_count);
  report.image_averaged = {image_total.sad / m, image_total.mse / m, image_total.mad / m};
  report.records = std::move(records);
  return report;
}

inline nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j;
  j["sad_scale"] = r.sad_scale;
  j["image_count"] = r.image_count;
  j["record_count"] = r.records.size();
  j["missing_predictions"] = r.missing_predictions;
  j["SAD"] = r.entity_averaged.sad;
  j["MSE"] = r.entity_averaged.mse;
  j["MAD"] = r.entity_averaged.mad;
  j["SAD(E)"] = r.image_averaged.sad;
  j["MSE(E)"] = r.image_averaged.mse;
  j["MAD(E)"] = r.image_averaged.mad;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"image_id", rec.image_id},
                    {"entity_id", rec.entity_id},
                    {"text", rec.text_kind},
                    {"sad_raw", rec.score.sad_raw},
                    {"mse", rec.score.mse},
                    {"mad", rec.score.mad},
                    {"missing_prediction", rec.missing_prediction}});
  }
  return j;
}

/// One CSV row per record.
inline void write_metrics_csv(const MetricReport& r, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out.precision(17);
  out << "image_id,entity_id,text,sad_raw,sad,mse,mad,missing_prediction\n";
  for (const auto& rec : r.records) {
    out << rec.image_id << ',' << rec.entity_id << ',' << rec.text_kind << ',' << rec.score.sad_raw
        << ',' << rec.score.sad_raw * r.sad_scale << ',' << rec.score.mse << ',' << rec.score.mad
        << ',' << (rec.missing_prediction ? 1 : 0) << '\n';
  }
}

namespace detail {

struct ScoringTask {
  std::string image_id;
  std::string entity_id;
  std::string text_kind;
  std::filesystem::path gt_path;
  std::vector<std::filesystem::path> pred_candidates;
};

/// Every (image id, entity id) pair present under pred_dir must exist in the
/// manifest.
inline void check_prediction_ids(const std::filesystem::path& pred_dir, const DatasetManifest& manifest) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(pred_dir)) {
    throw Error(Errc::io_error, "prediction directory '" + pred_dir.string() + "' does not exist");
  }
  for (const auto& dir : fs::directory_iterator(pred_dir)) {
    if (!dir.is_directory()) continue;
    const std::string image_id = dir.path().filename().string();
    const ManifestImage* im = manifest.find(image_id);
    if (!im) throw Error(Errc::manifest_mismatch, "unknown image id '" + image_id + "' in predictions");
    std::set<std::string> allowed;
    for (const auto& e : im->entities) {
      allowed.insert(e.info.id);
      for (const auto& x : e.expressions) allowed.insert(e.info.id + "_" + std::string(to_string(x.kind)));
    }
    for (const auto& f : fs::directory_iterator(dir.path())) {
      if (!f.is_regular_file() || f.path().extension() != ".png") continue;
      const std::string stem = f.path().stem().string();
      if (!allowed.count(stem)) {
        throw Error(Errc::manifest_mismatch,
                    "unknown entity '" + stem + "' for image '" + image_id + "' in predictions");
      }
    }
  }
}

}  // namespace detail

/// Scores predictions laid out as `<pred_dir>/<image_id>/<entity_id>.png`.
/// In the expression setting a file `<entity_id>_<kind>.png` is preferred
/// for each of the four texts, falling back to `<entity_id>.png`. A missing
/// prediction counts as an all-zero matte. Ground-truth paths are resolved
/// against `dataset_root`.
inline MetricReport evaluate_run(const std::filesystem::path& pred_dir, const DatasetManifest& manifest,
                                 Setting setting, const std::filesystem::path& dataset_root,
                                 double sad_scale = kDefaultSadScale, int workers = 0) {
  detail::check_prediction_ids(pred_dir, manifest);
  const DatasetManifest scored =
      setting == Setting::keyword ? filter_keyword_setting(manifest) : manifest;

  std::vector<detail::ScoringTask> tasks;
  for (const auto& im : scored.images) {
    for (const auto& e : im.entities) {
      if (e.dropped()) continue;
      const auto base = pred_dir / im.image_id;
      if (setting == Setting::keyword) {
        tasks.push_back({im.image_id, e.info.id, "keyword", dataset_root / e.alpha_path,
                         {base / (e.info.id + ".png")}});
      } else {
        for (const auto& x : e.expressions) {
          const std::string kind(to_string(x.kind));
          tasks.push_back({im.image_id, e.info.id, kind, dataset_root / e.alpha_path,
                           {base / (e.info.id + "_" + kind + ".png"), base / (e.info.id + ".png")}});
        }
      }
    }
  }
  if (tasks.empty()) throw Error(Errc::empty_input, "manifest has no entities to score");

  std::vector<MetricRecord> records(tasks.size());
  detail::parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const AlphaMap gt = decode_alpha(read_gray_png(t.gt_path));
    MetricRecord rec{t.image_id, t.entity_id, t.text_kind, {}, false};
    const std::filesystem::path* found = nullptr;
    for (const auto& c : t.pred_candidates) {
      if (std::filesystem::exists(c)) {
        found = &c;
        break;
      }
    }
    if (found) {
      rec.score = entity_metrics(gt, decode_alpha(read_gray_png(*found)));
    } else {
      spdlog::warn("no prediction for {}/{} ({}), scoring as zeros", t.image_id, t.entity_id, t.text_kind);
      rec.score = entity_metrics(gt, AlphaMap(gt.width(), gt.height(), 0.0));
      rec.missing_prediction = true;
    }
    records[i] = std::move(rec);
  });
  return aggregate(std::move(records), sad_scale);
}

}  // namespace forge
