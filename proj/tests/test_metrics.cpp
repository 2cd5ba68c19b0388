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
#include <cmath>
#include <filesystem>

#include "forge/forge.hpp"
#include "test_util.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

AlphaMap random_alpha(int w, int h, Rng& rng) {
  AlphaMap a(w, h);
  for (auto& v : a.samples()) v = uniform_unit(rng);
  return a;
}

// Elementwise definitions, written independently of the library.
struct Oracle {
  double sad = 0, mse = 0, mad = 0;
};

Oracle oracle(const AlphaMap& g, const AlphaMap& p) {
  Oracle o;
  const int n = g.width() * g.height();
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const double d = g.at(x, y) - p.at(x, y);
      o.sad += std::fabs(d);
      o.mse += d * d;
    }
  }
  o.mad = o.sad / n;
  o.mse /= n;
  return o;
}

MetricRecord rec(const std::string& image, const std::string& entity, double sad_raw) {
  return {image, entity, "be", {sad_raw, sad_raw / 100, sad_raw / 100}, false};
}

}  // namespace

TEST(EntityMetrics, HalfPrediction) {
  const auto s = entity_metrics(AlphaMap(10, 10, 1.0), AlphaMap(10, 10, 0.5));
  EXPECT_DOUBLE_EQ(s.sad_raw, 50.0);
  EXPECT_DOUBLE_EQ(s.mse, 0.25);
  EXPECT_DOUBLE_EQ(s.mad, 0.5);
}

TEST(EntityMetrics, PerfectPredictionIsZero) {
  Rng rng = make_rng({1});
  const auto g = random_alpha(9, 7, rng);
  const auto s = entity_metrics(g, g);
  EXPECT_EQ(s.sad_raw, 0.0);
  EXPECT_EQ(s.mse, 0.0);
  EXPECT_EQ(s.mad, 0.0);
}

TEST(EntityMetrics, MatchesOracleAndBounds) {
  Rng rng = make_rng({2});
  for (int t = 0; t < 100; ++t) {
    const auto g = random_alpha(16, 16, rng);
    const auto p = random_alpha(16, 16, rng);
    const auto s = entity_metrics(g, p);
    const auto o = oracle(g, p);
    EXPECT_NEAR(s.sad_raw, o.sad, 1e-9);
    EXPECT_NEAR(s.mse, o.mse, 1e-12);
    EXPECT_NEAR(s.mad, o.mad, 1e-12);
    // Symmetric, and mad <= rmse <= 1 by Jensen.
    const auto r = entity_metrics(p, g);
    EXPECT_DOUBLE_EQ(r.sad_raw, s.sad_raw);
    EXPECT_DOUBLE_EQ(r.mse, s.mse);
    EXPECT_LE(s.mad, std::sqrt(s.mse) + 1e-12);
    EXPECT_LE(std::sqrt(s.mse), 1.0);
    EXPECT_NEAR(s.sad_raw, s.mad * 256, 1e-9);
  }
}

TEST(EntityMetrics, Errors) {
  try {
    entity_metrics(AlphaMap(4, 4), AlphaMap(4, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::size_mismatch);
  }
  AlphaMap bad(2, 2, 0.5);
  bad.at(1, 1) = 1.5;
  try {
    entity_metrics(AlphaMap(2, 2), bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::range_violation);
  }
  bad.at(1, 1) = std::nan("");
  EXPECT_THROW(entity_metrics(bad, AlphaMap(2, 2)), Error);
}

TEST(Aggregate, EntityVersusImageAveraging) {
  // Image A holds one entity with SAD 10, image B two with SAD 4.
  const auto r = aggregate({rec("A", "a", 10), rec("B", "b1", 4), rec("B", "b2", 4)}, 1.0);
  EXPECT_DOUBLE_EQ(r.entity_averaged.sad, 6.0);
  EXPECT_DOUBLE_EQ(r.image_averaged.sad, 7.0);
  EXPECT_EQ(r.image_count, 2u);
}

TEST(Aggregate, OneEntityPerImageMeansAgree) {
  Rng rng = make_rng({3});
  std::vector<MetricRecord> rs;
  for (int i = 0; i < 40; ++i) rs.push_back(rec("im" + std::to_string(i), "e", uniform_real(rng, 0, 500)));
  const auto r = aggregate(rs);
  EXPECT_NEAR(r.entity_averaged.sad, r.image_averaged.sad, 1e-12);
  EXPECT_NEAR(r.entity_averaged.mse, r.image_averaged.mse, 1e-12);
}

TEST(Aggregate, ScaleAppliesToSadOnly) {
  const auto r = aggregate({rec("A", "a", 1000)});
  EXPECT_DOUBLE_EQ(r.entity_averaged.sad, 1.0);
  EXPECT_DOUBLE_EQ(r.entity_averaged.mad, 10.0);
}

TEST(Aggregate, EmptyInput) {
  try {
    aggregate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_input);
  }
}

TEST(Aggregate, OrderInvariantBitForBit) {
  Rng rng = make_rng({4});
  std::vector<MetricRecord> rs;
  for (int i = 0; i < 300; ++i) {
    rs.push_back(rec("im" + std::to_string(i % 37), "e" + std::to_string(i), uniform_real(rng, 0, 1e4)));
  }
  const auto base = aggregate(rs);
  for (int t = 0; t < 10; ++t) {
    shuffle(rs, rng);
    const auto r = aggregate(rs);
    EXPECT_EQ(r.entity_averaged.sad, base.entity_averaged.sad);
    EXPECT_EQ(r.image_averaged.sad, base.image_averaged.sad);
    EXPECT_EQ(r.image_averaged.mse, base.image_averaged.mse);
  }
}

TEST(Aggregate, JsonKeys) {
  const auto j = to_json(aggregate({rec("A", "a", 10), rec("B", "b", 20)}, 1.0));
  EXPECT_DOUBLE_EQ(j.at("SAD").get<double>(), 15.0);
  EXPECT_DOUBLE_EQ(j.at("SAD(E)").get<double>(), 15.0);
  EXPECT_TRUE(j.contains("MSE"));
  EXPECT_TRUE(j.contains("MAD"));
}

class EvaluateRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testutil::TempDir("eval");
    BuildConfig cfg;
    cfg.master_seed = 5;
    cfg.composites_per_group_train = 2;
    cfg.composites_per_group_test = 1;
    cfg.extra_random_train = 0;
    cfg.extra_random_test = 0;
    cfg.workers = 1;
    cfg.output_dir = dir_->path();
    manifest_ = new DatasetManifest(build_dataset(cfg, toy_entities("tr", {10, 2, 2, 30, 60}, 1),
                                                  toy_entities("te", {5, 1, 1, 30, 60}, 2),
                                                  toy_backgrounds(2, 160, 120, 3)));
  }
  static void TearDownTestSuite() {
    delete manifest_;
    delete dir_;
  }
  static const fs::path& root() { return dir_->path(); }

  static testutil::TempDir* dir_;
  static DatasetManifest* manifest_;
};
testutil::TempDir* EvaluateRun::dir_ = nullptr;
DatasetManifest* EvaluateRun::manifest_ = nullptr;

TEST_F(EvaluateRun, GroundTruthScoresZero) {
  const auto r = evaluate_run(root() / "mattes", *manifest_, Setting::expression, root(), kDefaultSadScale, 1);
  EXPECT_EQ(r.entity_averaged.sad, 0.0);
  EXPECT_EQ(r.image_averaged.mse, 0.0);
  EXPECT_EQ(r.missing_predictions, 0u);
  std::size_t mattes = 0;
  for (const auto& im : manifest_->images) mattes += im.entities.size();
  EXPECT_EQ(r.records.size(), 4 * mattes);
}

TEST_F(EvaluateRun, AllZeroPredictionsScoreMeanMass) {
  testutil::TempDir pred("pred0");
  double mass = 0;
  std::size_t n = 0;
  for (const auto& im : manifest_->images) {
    for (const auto& e : im.entities) {
      const auto gt = read_gray_png(root() / e.alpha_path);
      for (auto v : gt.samples()) mass += v / 255.0;
      ++n;
      write_png(pred.path() / im.image_id / (e.info.id + ".png"), Gray8(gt.width(), gt.height(), 0));
    }
  }
  const auto r = evaluate_run(pred.path(), *manifest_, Setting::expression, root(), 1e-3, 1);
  EXPECT_NEAR(r.entity_averaged.sad, 1e-3 * mass / n, 1e-9);
}

TEST_F(EvaluateRun, MissingPredictionsAreCounted) {
  testutil::TempDir pred("empty");
  const auto r = evaluate_run(pred.path(), *manifest_, Setting::keyword, root(), 1e-3, 1);
  EXPECT_EQ(r.missing_predictions, r.records.size());
  EXPECT_GT(r.entity_averaged.sad, 0.0);
  for (const auto& x : r.records) EXPECT_EQ(x.text_kind, "keyword");
}

TEST_F(EvaluateRun, KindSpecificFileWins) {
  testutil::TempDir pred("kind");
  const auto& im = manifest_->images.front();
  const auto& e = im.entities.front();
  const auto gt = read_gray_png(root() / e.alpha_path);
  write_png(pred.path() / im.image_id / (e.info.id + ".png"), Gray8(gt.width(), gt.height(), 0));
  write_png(pred.path() / im.image_id / (e.info.id + "_BE.png"), gt);
  const auto r = evaluate_run(pred.path(), *manifest_, Setting::expression, root(), 1e-3, 1);
  for (const auto& x : r.records) {
    if (x.image_id != im.image_id || x.entity_id != e.info.id) continue;
    EXPECT_FALSE(x.missing_prediction);
    if (x.text_kind == "BE") {
      EXPECT_EQ(x.score.sad_raw, 0.0);
    } else {
      EXPECT_GT(x.score.sad_raw, 0.0);
    }
  }
}

TEST_F(EvaluateRun, UnknownIdsRejected) {
  testutil::TempDir pred("bad");
  write_png(pred / "train_999999/x.png", Gray8(2, 2));
  try {
    evaluate_run(pred.path(), *manifest_, Setting::expression, root());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::manifest_mismatch);
  }
  testutil::TempDir pred2("bad2");
  write_png(pred2.path() / manifest_->images.front().image_id / "ghost.png", Gray8(2, 2));
  try {
    evaluate_run(pred2.path(), *manifest_, Setting::expression, root());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::manifest_mismatch);
  }
}

TEST_F(EvaluateRun, WrongSizeRejected) {
  testutil::TempDir pred("size");
  const auto& im = manifest_->images.front();
  write_png(pred.path() / im.image_id / (im.entities.front().info.id + ".png"), Gray8(3, 3));
  try {
    evaluate_run(pred.path(), *manifest_, Setting::expression, root(), 1e-3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::size_mismatch);
  }
}
