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

// Command-line front end. Machine output goes to files or standard output as
// JSON; diagnostics go to standard error. Exit codes: 0 success, 1 invalid
// arguments or configuration, 2 bad or unreadable data.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "forge/forge.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("forge");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("FORGE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw forge::Error(forge::Errc::io_error, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw forge::Error(forge::Errc::usage_error, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const json& j, const std::optional<fs::path>& path) {
  if (!path) {
    std::cout << j.dump(1) << "\n";
    return;
  }
  if (path->has_parent_path()) fs::create_directories(path->parent_path());
  std::ofstream out(*path);
  if (!out) throw forge::Error(forge::Errc::io_error, "cannot write '" + path->string() + "'");
  out << j.dump(1) << "\n";
}

/// Tables and grammar from optional override files.
struct Vocabulary {
  forge::CategoryTables tables = forge::CategoryTables::defaults();
  forge::ExpressionGrammar grammar = forge::ExpressionGrammar::defaults();

  void load(const std::string& tables_path, const std::string& grammar_path) {
    if (!tables_path.empty()) tables = forge::CategoryTables::load(tables_path);
    if (!grammar_path.empty()) grammar = forge::ExpressionGrammar::load(grammar_path);
  }

  forge::Lexicon lexicon(const std::vector<forge::EntityInfo>& infos = {}) const {
    return forge::Lexicon(forge::extend_tables(tables, infos), grammar);
  }
};

struct VocabularyFlags {
  std::string tables;
  std::string grammar;

  void add(CLI::App* cmd) {
    cmd->add_option("--tables", tables, "Category tables JSON overriding the embedded defaults");
    cmd->add_option("--grammar", grammar, "Relation word bags and templates JSON");
  }
};

std::vector<forge::EntityInfo> manifest_infos(const forge::DatasetManifest& m) {
  std::vector<forge::EntityInfo> out;
  for (const auto& im : m.images) {
    for (const auto& e : im.entities) out.push_back(e.info);
  }
  return out;
}

/// Everything a build needs, resolved from forge.json plus flag overrides.
struct Project {
  forge::BuildConfig cfg;
  Vocabulary vocab;
  std::vector<forge::Entity> train;
  std::vector<forge::Entity> test;
  std::vector<forge::Background> backgrounds;

  std::vector<forge::EntityInfo> infos() const {
    std::vector<forge::EntityInfo> out;
    for (const auto* pool : {&train, &test}) {
      for (const auto& e : *pool) out.push_back(e.info);
    }
    return out;
  }
};

Project load_project(const fs::path& config_path, const VocabularyFlags& flags) {
  const json doc = read_json(config_path);
  const fs::path base = config_path.parent_path();
  auto path_key = [&](const char* key, bool required) -> std::optional<fs::path> {
    if (!doc.contains(key)) {
      if (required) throw forge::Error(forge::Errc::usage_error, std::string("config lacks \"") + key + "\"");
      return std::nullopt;
    }
    return base / doc.at(key).get<std::string>();
  };
  Project p;
  p.cfg = forge::BuildConfig::from_json(doc);
  const auto tables = flags.tables.empty() ? path_key("tables", false) : fs::path(flags.tables);
  const auto grammar = flags.grammar.empty() ? path_key("grammar", false) : fs::path(flags.grammar);
  p.vocab.load(tables ? tables->string() : "", grammar ? grammar->string() : "");
  forge::LoadOptions opts;
  opts.allow_unknown_category = doc.value("allow_unknown_category", false);
  if (auto train = path_key("train_catalog", false)) p.train = forge::load_catalog(*train, p.vocab.tables, opts);
  if (auto test = path_key("test_catalog", false)) p.test = forge::load_catalog(*test, p.vocab.tables, opts);
  if (p.train.empty() && p.test.empty()) {
    throw forge::Error(forge::Errc::usage_error, "config names no entity catalog");
  }
  p.backgrounds = forge::load_backgrounds(*path_key("backgrounds", true));
  return p;
}

int exit_code(const forge::Error& e) { return forge::is_validation_error(e.code()) ? 1 : 2; }

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Build and score referring-image-matting datasets", "forge"};
  app.require_subcommand(1);
  std::function<void()> action;

  // ingest ------------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Load a catalog, annotate attributes, print entity records");
  fs::path ingest_catalog;
  std::optional<fs::path> ingest_out;
  bool ingest_allow_unknown = false;
  VocabularyFlags ingest_vocab;
  ingest->add_option("--catalog", ingest_catalog, "Catalog JSON")->required();
  ingest->add_option("--out", ingest_out, "Write JSON here instead of standard output");
  ingest->add_flag("--allow-unknown-category", ingest_allow_unknown, "Accept categories missing from the tables");
  ingest_vocab.add(ingest);
  ingest->callback([&] {
    action = [&] {
      Vocabulary v;
      v.load(ingest_vocab.tables, ingest_vocab.grammar);
      forge::LoadOptions opts;
      opts.allow_unknown_category = ingest_allow_unknown;
      const auto entities = forge::load_catalog(ingest_catalog, v.tables, opts);
      json out = json::array();
      for (const auto& e : entities) {
        auto j = forge::to_json(e.info);
        j["width"] = e.width();
        j["height"] = e.height();
        out.push_back(j);
      }
      write_json({{"entities", out}}, ingest_out);
    };
  });

  // build -------------------------------------------------------------------
  auto* build = app.add_subcommand("build", "Compose images, mattes and texts; write the manifest");
  fs::path build_config;
  std::uint64_t build_seed = 0;
  fs::path build_out;
  std::optional<int> build_workers;
  VocabularyFlags build_vocab;
  build->add_option("--config", build_config, "forge.json")->required();
  build->add_option("--seed", build_seed, "Master seed")->required();
  build->add_option("--out", build_out, "Output directory")->required();
  build->add_option("--workers", build_workers, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  build_vocab.add(build);
  build->callback([&] {
    action = [&] {
      auto p = load_project(build_config, build_vocab);
      p.cfg.master_seed = build_seed;
      p.cfg.output_dir = build_out;
      if (build_workers) p.cfg.workers = *build_workers;
      const auto lex = p.vocab.lexicon(p.infos());
      const auto manifest = forge::build_dataset(p.cfg, p.train, p.test, p.backgrounds, lex);
      std::size_t mattes = 0;
      for (const auto& im : manifest.images) mattes += im.entities.size();
      json summary{{"manifest", (build_out / "manifest.json").string()},
                   {"images", manifest.images.size()},
                   {"mattes", mattes},
                   {"failures", manifest.failures.size()}};
      write_json(summary, std::nullopt);
    };
  });

  // stats -------------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics per split");
  fs::path stats_manifest;
  std::string stats_setting = "expression";
  std::optional<fs::path> stats_out;
  VocabularyFlags stats_vocab;
  stats_cmd->add_option("--manifest", stats_manifest, "manifest.json")->required();
  stats_cmd->add_option("--setting", stats_setting, "keyword or expression")
      ->check(CLI::IsMember({"keyword", "expression"}));
  stats_cmd->add_option("--out", stats_out, "Directory for stats.json and CSV tables");
  stats_vocab.add(stats_cmd);
  stats_cmd->callback([&] {
    action = [&] {
      const auto manifest = forge::load_manifest(stats_manifest);
      Vocabulary v;
      v.load(stats_vocab.tables, stats_vocab.grammar);
      const auto setting = forge::parse_setting(stats_setting);
      const auto report = forge::stats(manifest, setting, v.lexicon(manifest_infos(manifest)));
      const auto j = forge::to_json(report);
      if (stats_out) {
        write_json(j, *stats_out / ("stats_" + stats_setting + ".json"));
        forge::write_stats_csv(report, *stats_out, "stats_" + stats_setting);
      }
      write_json(j, std::nullopt);
    };
  });

  // eval --------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Score predicted mattes against the manifest");
  fs::path eval_pred;
  fs::path eval_manifest;
  std::string eval_setting;
  double eval_scale = forge::kDefaultSadScale;
  std::optional<fs::path> eval_out;
  std::optional<fs::path> eval_csv;
  int eval_workers = 0;
  eval->add_option("--pred", eval_pred, "Prediction directory: <image_id>/<entity_id>.png")->required();
  eval->add_option("--manifest", eval_manifest, "manifest.json")->required();
  eval->add_option("--setting", eval_setting, "keyword or expression")
      ->required()
      ->check(CLI::IsMember({"keyword", "expression"}));
  eval->add_option("--scale", eval_scale, "Factor applied to raw SAD in aggregates")->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_out, "Report JSON (default: standard output)");
  eval->add_option("--csv", eval_csv, "Per-record CSV (default: next to --out)");
  eval->add_option("--workers", eval_workers, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  eval->callback([&] {
    action = [&] {
      const auto manifest = forge::load_manifest(eval_manifest);
      const auto report = forge::evaluate_run(eval_pred, manifest, forge::parse_setting(eval_setting),
                                              eval_manifest.parent_path(), eval_scale, eval_workers);
      write_json(forge::to_json(report), eval_out);
      if (!eval_csv && eval_out) eval_csv = fs::path(*eval_out).replace_extension(".csv");
      if (eval_csv) forge::write_metrics_csv(report, *eval_csv);
    };
  });

  // parse -------------------------------------------------------------------
  auto* parse_cmd = app.add_subcommand("parse", "Parse an expression into its logic form");
  std::string parse_expr;
  VocabularyFlags parse_vocab;
  parse_cmd->add_option("--expr", parse_expr, "Expression text")->required();
  parse_vocab.add(parse_cmd);
  parse_cmd->callback([&] {
    action = [&] {
      Vocabulary v;
      v.load(parse_vocab.tables, parse_vocab.grammar);
      write_json(forge::to_json(forge::parse(parse_expr, v.lexicon())), std::nullopt);
    };
  });

  // ground ------------------------------------------------------------------
  auto* ground_cmd = app.add_subcommand("ground", "Resolve an expression or logic form in one image");
  std::string ground_expr;
  std::string ground_logic;
  fs::path ground_manifest;
  std::string ground_image;
  VocabularyFlags ground_vocab;
  auto* expr_opt = ground_cmd->add_option("--expr", ground_expr, "Expression text");
  auto* logic_opt = ground_cmd->add_option("--logic", ground_logic, "Logic form JSON");
  expr_opt->excludes(logic_opt);
  ground_cmd->add_option("--manifest", ground_manifest, "manifest.json")->required();
  ground_cmd->add_option("--image", ground_image, "Image id")->required();
  ground_vocab.add(ground_cmd);
  ground_cmd->callback([&] {
    action = [&] {
      if (ground_expr.empty() && ground_logic.empty()) {
        throw forge::Error(forge::Errc::usage_error, "one of --expr or --logic is required");
      }
      const auto manifest = forge::load_manifest(ground_manifest);
      const auto* image = manifest.find(ground_image);
      if (!image) throw forge::Error(forge::Errc::usage_error, "no image '" + ground_image + "' in manifest");
      forge::LogicForm logic;
      if (!ground_expr.empty()) {
        Vocabulary v;
        v.load(ground_vocab.tables, ground_vocab.grammar);
        logic = forge::parse(ground_expr, v.lexicon(manifest_infos(manifest)));
      } else {
        try {
          logic = forge::logic_from_json(json::parse(ground_logic));
        } catch (const json::exception& e) {
          throw forge::Error(forge::Errc::usage_error, std::string("--logic is not valid JSON: ") + e.what());
        }
      }
      const auto ids = forge::ground(logic, image->scene());
      write_json({{"image_id", ground_image},
                  {"logic", forge::to_json(logic)},
                  {"entities", std::vector<std::string>(ids.begin(), ids.end())}},
                 std::nullopt);
    };
  });

  // compose-preview ---------------------------------------------------------
  auto* preview = app.add_subcommand("compose-preview", "Render one composite for chosen entities");
  fs::path preview_config;
  std::uint64_t preview_seed = 0;
  std::string preview_relation;
  std::vector<std::string> preview_entities;
  std::string preview_background;
  fs::path preview_out;
  VocabularyFlags preview_vocab;
  preview->add_option("--config", preview_config, "forge.json")->required();
  preview->add_option("--seed", preview_seed, "Seed for the layout")->required();
  preview->add_option("--relation", preview_relation, "left, right, top, bottom, in_front_of, behind")->required();
  preview->add_option("--entities", preview_entities, "Two or three entity ids")->required()->delimiter(',');
  preview->add_option("--background", preview_background, "Background id (default: first)");
  preview->add_option("--out", preview_out, "Output directory")->required();
  preview_vocab.add(preview);
  preview->callback([&] {
    action = [&] {
      const auto p = load_project(preview_config, preview_vocab);
      const auto relation = forge::parse_relation(preview_relation);
      std::vector<const forge::Entity*> chosen;
      for (const auto& id : preview_entities) {
        const forge::Entity* hit = nullptr;
        for (const auto* pool : {&p.train, &p.test}) {
          for (const auto& e : *pool) {
            if (e.id() == id) hit = &e;
          }
        }
        if (!hit) throw forge::Error(forge::Errc::usage_error, "unknown entity '" + id + "'");
        chosen.push_back(hit);
      }
      const forge::Background* bg = &p.backgrounds.front();
      if (!preview_background.empty()) {
        bg = nullptr;
        for (const auto& b : p.backgrounds) {
          if (b.id == preview_background) bg = &b;
        }
        if (!bg) throw forge::Error(forge::Errc::usage_error, "unknown background '" + preview_background + "'");
      }
      forge::Rgb8 canvas = bg->image;
      if (p.cfg.canvas) {
        canvas = forge::to_bytes(forge::resize_bilinear(bg->image, p.cfg.canvas->first, p.cfg.canvas->second));
      }
      std::vector<forge::LayoutItem> items;
      for (const auto* e : chosen) items.push_back({e->id(), e->width(), e->height()});
      auto rng = forge::make_rng({preview_seed});
      const auto layout = forge::plan_layout(items, relation, canvas.width(), canvas.height(), rng, p.cfg.layout);
      const auto result = forge::composite(layout, chosen, canvas);
      forge::write_png(preview_out / "composite.png", result.image8);
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        forge::write_png(preview_out / (chosen[i]->id() + ".png"), forge::encode_alpha(result.visible_alphas[i]));
      }
      write_json(forge::to_json(layout), std::nullopt);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    action();
  } catch (const forge::Error& e) {
    spdlog::error("{}", e.what());
    return exit_code(e);
  } catch (const json::exception& e) {
    spdlog::error("malformed JSON input: {}", e.what());
    return 2;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
