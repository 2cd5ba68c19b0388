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

// Writes a small synthetic asset set with catalogs for both splits and a
// ready-to-run forge.json.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "forge/forge.hpp"

namespace fs = std::filesystem;

namespace {

nlohmann::json write_pool(const fs::path& root, const std::string& split, const forge::ToyPoolSpec& spec,
                          std::uint64_t seed) {
  nlohmann::json entities = nlohmann::json::array();
  for (const auto& a : forge::toy_assets(split, spec, seed)) {
    const std::string rgb = split + "/" + a.meta.id + "_rgb.png";
    const std::string alpha = split + "/" + a.meta.id + "_alpha.png";
    forge::write_png(root / rgb, a.rgb);
    forge::write_png(root / alpha, a.alpha);
    auto rec = a.meta.to_json();
    rec["rgb"] = rgb;
    rec["alpha"] = alpha;
    entities.push_back(rec);
  }
  nlohmann::json doc{{"entities", entities}};
  std::ofstream(root / ("catalog_" + split + ".json")) << doc.dump(1) << "\n";
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic entities and backgrounds for a toy build"};
  fs::path out;
  std::uint64_t seed = 1;
  int unit = 5;
  int test_unit = 1;
  int backgrounds = 6;
  int width = 256;
  int height = 192;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", seed, "Seed for asset generation");
  app.add_option("--unit", unit, "Train pool holds 5u humans, u animals, u objects")->check(CLI::PositiveNumber);
  app.add_option("--test-unit", test_unit, "Same for the test pool")->check(CLI::PositiveNumber);
  app.add_option("--backgrounds", backgrounds, "Number of backgrounds")->check(CLI::PositiveNumber);
  app.add_option("--width", width, "Background width")->check(CLI::PositiveNumber);
  app.add_option("--height", height, "Background height")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    write_pool(out, "train", {5 * unit, unit, unit}, seed);
    write_pool(out, "test", {5 * test_unit, test_unit, test_unit}, seed + 1);
    for (const auto& bg : forge::toy_backgrounds(backgrounds, width, height, seed)) {
      forge::write_png(out / "backgrounds" / (bg.id + ".png"), bg.image);
    }
    forge::BuildConfig cfg;
    cfg.composites_per_group_train = 4;
    cfg.composites_per_group_test = 2;
    cfg.extra_random_train = 2;
    cfg.extra_random_test = 1;
    cfg.canvas = std::pair{width, height};
    auto doc = cfg.to_json();
    doc.erase("master_seed");
    doc["train_catalog"] = "catalog_train.json";
    doc["test_catalog"] = "catalog_test.json";
    doc["backgrounds"] = "backgrounds";
    std::ofstream(out / "forge.json") << doc.dump(1) << "\n";
  } catch (const forge::Error& e) {
    std::cerr << e.what() << "\n";
    return forge::is_validation_error(e.code()) ? 1 : 2;
  }
  return 0;
}
