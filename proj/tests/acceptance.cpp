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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "forge/forge.hpp"
#include "test_util.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Verdict metric_oracle() {
  Verdict v;
  const auto t0 = Clock::now();
  Rng rng = make_rng({0xacc, 1});
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    AlphaMap g(16, 16), p(16, 16);
    for (auto& x : g.samples()) x = uniform_unit(rng);
    for (auto& x : p.samples()) x = uniform_unit(rng);
    double sad = 0, sq = 0;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        const double d = g.at(x, y) - p.at(x, y);
        sad += std::fabs(d);
        sq += d * d;
      }
    const auto s = entity_metrics(g, p);
    worst = std::max({worst, std::fabs(s.sad_raw - sad), std::fabs(s.mse - sq / 256),
                      std::fabs(s.mad - sad / 256)});
  }
  v.require(worst <= 1e-9, "oracle deviation " + std::to_string(worst));
  auto rec = [](std::string im, std::string e, double sad) {
    return MetricRecord{std::move(im), std::move(e), "BE", {sad, 0, 0}, false};
  };
  const auto r = aggregate({rec("A", "a", 10), rec("B", "b1", 4), rec("B", "b2", 4)}, 1.0);
  v.require(r.entity_averaged.sad == 6.0, "SAD != 6");
  v.require(r.image_averaged.sad == 7.0, "SAD(E) != 7");
  const double secs = seconds_since(t0);
  v.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max deviation %.1e, SAD 6, SAD(E) 7", worst);
  if (v.ok) v.detail = buf;
  return v;
}

Verdict balancing() {
  Verdict v;
  const auto t0 = Clock::now();
  v.require(balance({9186, 1800, 813}, 2110).after == ClassCounts{10550, 2110, 2110}, "train split");
  v.require(balance({977, 200, 211}, 211).after == ClassCounts{1055, 211, 211}, "test split");
  Rng rng = make_rng({0xacc, 2});
  auto groups = make_groups(balance_pool(class_pool(toy_entities("t", {}, 1)), std::nullopt, rng), rng);
  v.require(groups.size() == 5, "toy pool did not form 5 groups");

  BuildConfig cfg;
  cfg.master_seed = 2;
  cfg.composites_per_group_train = 20;
  cfg.extra_random_train = 7;
  cfg.composites_per_group_test = 1;
  cfg.extra_random_test = 0;
  cfg.write_rasters = false;
  cfg.workers = 1;
  const auto m = build_dataset(cfg, toy_entities("tr", {}, 1), toy_entities("te", {5, 1, 1, 40, 90}, 2),
                               toy_backgrounds(2, 192, 144, 3));
  std::size_t train = 0;
  for (const auto& im : m.images) train += im.split == "train";
  v.require(m.failures.empty(), "build reported failures");
  v.require(train == 5 * 20 + 7, "train composites " + std::to_string(train) + " != 107");
  const double secs = seconds_since(t0);
  v.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (v.ok) v.detail = "full-scale splits exact, toy u=5 gives 100 + 7 composites";
  return v;
}

Verdict compositing() {
  Verdict v;
  const auto t0 = Clock::now();
  double worst_sum = 0;
  for (std::uint64_t seed = 0; seed < 50 && v.ok; ++seed) {
    Rng rng = make_rng({0xacc, 3, seed});
    const Relation rels[] = {Relation::left, Relation::right, Relation::top,
                             Relation::bottom, Relation::in_front_of, Relation::behind};
    const Relation rel = rels[uniform_index(rng, 6)];
    const int n = is_occluding(rel) ? 2 : static_cast<int>(uniform_int(rng, 2, 3));
    std::vector<Entity> es(n);
    std::vector<LayoutItem> items;
    for (int k = 0; k < n; ++k) {
      const int w = static_cast<int>(uniform_int(rng, 10, 60));
      const int h = static_cast<int>(uniform_int(rng, 10, 60));
      es[k].info.id = "e" + std::to_string(k);
      es[k].rgb = Rgb8(w, h);
      es[k].alpha = AlphaMap(w, h);
      for (auto& x : es[k].rgb.samples()) x = static_cast<std::uint8_t>(uniform_index(rng, 256));
      for (auto& x : es[k].alpha.samples()) x = uniform_index(rng, 256) / 255.0;
      items.push_back({es[k].id(), w, h});
    }
    const Rgb8 bg = toy_background(160, 120, rng);
    const auto layout = plan_layout(items, rel, 160, 120, rng);
    std::vector<const Entity*> ptrs;
    for (const auto& e : es) ptrs.push_back(&e);
    const auto r = composite(layout, ptrs, bg);
    const auto again = recomposite(r.visible_alphas, r.layer_colors, bg);
    v.require(again == r.image, "float mismatch at seed " + std::to_string(seed));
    const auto q = to_bytes(again);
    for (std::size_t i = 0; i < q.samples().size(); ++i) {
      if (std::abs(int(q.samples()[i]) - int(r.image8.samples()[i])) > 1) {
        v.require(false, "8-bit mismatch at seed " + std::to_string(seed));
        break;
      }
    }
    for (int y = 0; y < 120; ++y)
      for (int x = 0; x < 160; ++x) {
        double s = 0;
        for (const auto& a : r.visible_alphas) s += a.at(x, y);
        worst_sum = std::max(worst_sum, s);
      }
  }
  v.require(worst_sum <= 1.0 + 1e-12, "visible alpha sums to " + std::to_string(worst_sum));
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  if (v.ok) v.detail = "50 scenes exact, max alpha sum " + std::to_string(worst_sum);
  return v;
}

// One large toy build shared by the grammar and ratio criteria.
struct BigBuild {
  DatasetManifest manifest;
  std::size_t entities = 0;
  double seconds = 0;
};

const BigBuild& big_build() {
  static const BigBuild b = [] {
    BigBuild out;
    const auto t0 = Clock::now();
    BuildConfig cfg;
    cfg.master_seed = 4;
    cfg.composites_per_group_train = 20;
    cfg.extra_random_train = 900;
    cfg.composites_per_group_test = 10;
    cfg.extra_random_test = 0;
    cfg.write_rasters = false;
    const auto train = toy_entities("tr", {}, 41);
    const auto test = toy_entities("te", {5, 1, 1, 40, 90}, 42);
    out.entities = train.size() + test.size();
    out.manifest = build_dataset(cfg, train, test, toy_backgrounds(4, 256, 192, 43));
    out.seconds = seconds_since(t0);
    return out;
  }();
  return b;
}

Verdict grammar_round_trip() {
  Verdict v;
  const auto& b = big_build();
  const auto& m = b.manifest;
  v.require(m.images.size() >= 1000, "only " + std::to_string(m.images.size()) + " composites");
  v.require(b.entities >= 20, "too few entities");
  std::size_t texts = 0, mattes = 0, keywords = 0;
  for (const auto& im : m.images) {
    const auto scene = im.scene();
    for (const auto& e : im.entities) {
      ++mattes;
      keywords += !e.keyword.empty();
      v.require(e.expressions.size() == 4, im.image_id + " has an entity without 4 expressions");
      for (const auto& r : e.expressions) {
        ++texts;
        try {
          v.require(parse(r.text) == r.logic, "'" + r.text + "' parses to another form");
        } catch (const Error& err) {
          v.require(false, "'" + r.text + "': " + err.what());
        }
        v.require(ground(r.logic, scene) == std::set<std::string>{e.info.id},
                  "'" + r.text + "' does not ground uniquely in " + im.image_id);
      }
    }
  }
  v.require(texts == 4 * mattes && keywords == mattes, "text/matte ratio off");
  v.require(b.seconds < 300.0, "took " + std::to_string(b.seconds) + " s");
  if (v.ok) {
    std::ostringstream ss;
    ss << m.images.size() << " composites, " << mattes << " mattes, " << texts << " texts, "
       << m.failures.size() << " failures";
    v.detail = ss.str();
  }
  return v;
}

Verdict relation_ratio() {
  Verdict v;
  Rng rng = make_rng({0xacc, 5});
  const int draws = 20000;
  std::map<Relation, int> n;
  for (int i = 0; i < draws; ++i) ++n[sample_relation({}, rng)];
  const double lat = (n[Relation::left] + n[Relation::right]) / double(draws);
  const double ver = (n[Relation::top] + n[Relation::bottom]) / double(draws);
  const double dep = (n[Relation::in_front_of] + n[Relation::behind]) / double(draws);
  v.require(std::fabs(lat - 0.7) <= 0.02 && std::fabs(ver - 0.2) <= 0.02 && std::fabs(dep - 0.1) <= 0.02,
            "frequencies off");
  std::size_t occluding = 0, violations = 0;
  for (const auto& im : big_build().manifest.images) {
    if (!is_occluding(im.layout.relation_facts.front().relation)) continue;
    ++occluding;
    violations += im.entities.size() != 2;
  }
  v.require(violations == 0, std::to_string(violations) + " depth composites without 2 entities");
  v.require(occluding > 0, "no depth composites to check");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.4f/%.4f/%.4f over %d draws, %zu depth composites, 0 violations",
                lat, ver, dep, draws, occluding);
  if (v.ok) v.detail = buf;
  return v;
}

EntityInfo animal(const std::string& id, const std::string& category, const CategoryTables& t) {
  EntityInfo e;
  e.id = id;
  e.category = category;
  e.synonyms = t.synonyms_of(category);
  e.entity_class = EntityClass::animal;
  return e;
}

Verdict keyword_filter() {
  Verdict v;
  const auto& t = CategoryTables::defaults();
  auto image = [&](std::string id, std::vector<EntityInfo> infos) {
    ManifestImage im;
    im.image_id = std::move(id);
    im.split = "test";
    for (auto& i : infos) {
      ManifestEntity me;
      me.info = std::move(i);
      me.keyword = me.info.category;
      im.entities.push_back(std::move(me));
    }
    return im;
  };
  DatasetManifest m;
  m.images.push_back(image("ccd", {animal("c1", "cat", t), animal("c2", "cat", t), animal("d1", "dog", t)}));
  m.images.push_back(image("cd", {animal("c3", "cat", t), animal("d2", "dog", t)}));
  const auto kept = filter_keyword_setting(m);
  v.require(kept.images.size() == 1 && kept.images[0].image_id == "cd", "fixture filtered wrongly");
  const auto small = stats(kept, Setting::keyword).splits.at("all");
  v.require(small.texts == small.mattes, "fixture keyword texts != mattes");

  const auto big = filter_keyword_setting(big_build().manifest);
  const auto s = stats(big, Setting::keyword).splits.at("all");
  v.require(s.texts == s.mattes, "toy keyword texts != mattes");
  for (const auto& im : big.images) v.require(keyword_unambiguous(im.scene().entities), "ambiguous image kept");
  if (v.ok) {
    v.detail = "[cat,cat,dog] dropped, [cat,dog] kept; toy build keeps " + std::to_string(big.images.size()) +
               "/" + std::to_string(big_build().manifest.images.size()) + " images";
  }
  return v;
}

std::map<std::string, std::size_t> hash_tree(const fs::path& root) {
  std::map<std::string, std::size_t> out;
  for (const auto& f : fs::recursive_directory_iterator(root)) {
    if (!f.is_regular_file()) continue;
    std::ifstream in(f.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(f.path(), root).string()] = std::hash<std::string>{}(ss.str());
  }
  return out;
}

Verdict determinism() {
  Verdict v;
  testutil::TempDir a("acc_w1"), b("acc_w4");
  const auto train = toy_entities("tr", {}, 71);
  const auto test = toy_entities("te", {5, 1, 1, 40, 90}, 72);
  const auto bgs = toy_backgrounds(6, 256, 192, 73);
  BuildConfig cfg;
  cfg.master_seed = 7;
  cfg.composites_per_group_train = 4;
  cfg.composites_per_group_test = 2;
  cfg.extra_random_train = 2;
  cfg.extra_random_test = 1;
  cfg.canvas = std::pair{256, 192};
  cfg.workers = 1;
  cfg.output_dir = a.path();
  build_dataset(cfg, train, test, bgs);
  cfg.workers = 4;
  cfg.output_dir = b.path();
  build_dataset(cfg, train, test, bgs);
  const auto ha = hash_tree(a.path());
  const auto hb = hash_tree(b.path());
  v.require(ha.count("manifest.json") == 1, "no manifest written");
  v.require(ha == hb, "file hashes differ between 1 and 4 workers");
  if (v.ok) v.detail = std::to_string(ha.size()) + " files hash-identical across 1 and 4 workers";
  return v;
}

Verdict tables() {
  Verdict v;
  const auto& t = CategoryTables::defaults();
  v.require(annotate_flags("wine glass", t) == VisualFlags{true, true}, "wine glass");
  v.require(annotate_flags("fire", t) == VisualFlags{true, false}, "fire");
  const auto it = t.human_synonyms.find({Gender::female, AgeGroup::adult});
  v.require(it != t.human_synonyms.end() && it->second == std::set<std::string>{"woman", "lady"},
            "(female, adult)");
  v.require(age_to_group(30) == AgeGroup::adult, "age 30");
  v.require(age_to_group(100) == AgeGroup::senior, "age 100");
  if (v.ok) v.detail = "all five fixtures exact";
  return v;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"metric oracle equivalence", metric_oracle},
      {"balancing arithmetic", balancing},
      {"compositing reconstruction", compositing},
      {"grammar round-trip and unique grounding", grammar_round_trip},
      {"relation-ratio sampling", relation_ratio},
      {"keyword-setting filter", keyword_filter},
      {"determinism across worker counts", determinism},
      {"attribute table fixtures", tables},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-42s %s (%.2f s)\n", v.ok ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !v.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
