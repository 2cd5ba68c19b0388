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

// Relationship phrases and the fixed function words of the expression
// grammar. Defaults mirror the published tables; a JSON document with the
// shape of `to_json()` replaces any section.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/layout.hpp"

namespace forge {

struct RelationWordBags {
  /// Phrases used as "<entity> PHRASE the picture".
  std::map<Relation, std::vector<std::string>> absolute;
  /// Phrases used as "<entity> PHRASE <other entity>". No entry for middle.
  std::map<Relation, std::vector<std::string>> relative;
};

struct ExpressionTemplates {
  std::vector<std::string> articles{"the", "a"};
  std::vector<std::string> pronouns{"which", "that"};
  std::vector<std::string> human_pronouns{"who", "that"};
  std::vector<std::string> scene_nouns{"photo", "image", "picture"};
  /// Joins a human's clothing (and its color) onto the noun.
  std::vector<std::string> clothing_connectors{"with the", "wearing the", "in the",
                                               "who is dressed in"};
  std::string copula = "is";
  std::string conjunction = "and";
  std::string scene_article = "the";
};

struct ExpressionGrammar {
  RelationWordBags bags;
  ExpressionTemplates templates;

  static const ExpressionGrammar& defaults();
  static ExpressionGrammar from_json(const nlohmann::json& doc);
  static ExpressionGrammar load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

namespace detail {

inline ExpressionGrammar make_default_grammar() {
  ExpressionGrammar g;
  auto& abs = g.bags.absolute;
  auto& rel = g.bags.relative;
  abs[Relation::left] = {"at the most left side of", "on the far left of", "at the leftmost edge of",
                         "farthest to the left of"};
  abs[Relation::right] = {"at the most right side of", "on the far right of",
                          "at the rightmost edge of", "farthest to the right of"};
  abs[Relation::middle] = {"in the middle of", "in the center of"};
  abs[Relation::top] = {"on top of", "in the upper part of"};
  abs[Relation::bottom] = {"below", "in the lower part of"};
  abs[Relation::in_front_of] = {"in front of"};
  abs[Relation::behind] = {"behind", "in the back of", "at the back of"};

  rel[Relation::left] = {"to the left of", "on the left side of", "at the left side of", "beside",
                         "next to", "close to", "near"};
  rel[Relation::right] = {"to the right of", "on the right side of", "at the right side of",
                          "beside", "next to", "close to", "near"};
  rel[Relation::top] = {"above", "over", "on top of", "on"};
  rel[Relation::bottom] = {"below", "under", "underneath"};
  rel[Relation::in_front_of] = {"in front of"};
  rel[Relation::behind] = {"behind", "in the back of", "at the back of"};
  return g;
}

inline std::vector<std::string> json_strings(const nlohmann::json& j) {
  return j.get<std::vector<std::string>>();
}

}  // namespace detail

inline const ExpressionGrammar& ExpressionGrammar::defaults() {
  static const ExpressionGrammar g = detail::make_default_grammar();
  return g;
}

inline nlohmann::json ExpressionGrammar::to_json() const {
  nlohmann::json doc;
  for (const auto& [r, phrases] : bags.absolute) doc["absolute"][std::string(to_string(r))] = phrases;
  for (const auto& [r, phrases] : bags.relative) doc["relative"][std::string(to_string(r))] = phrases;
  doc["articles"] = templates.articles;
  doc["pronouns"] = templates.pronouns;
  doc["human_pronouns"] = templates.human_pronouns;
  doc["scene_nouns"] = templates.scene_nouns;
  doc["clothing_connectors"] = templates.clothing_connectors;
  return doc;
}

inline ExpressionGrammar ExpressionGrammar::from_json(const nlohmann::json& doc) {
  ExpressionGrammar g = defaults();
  try {
    if (doc.contains("absolute")) {
      g.bags.absolute.clear();
      for (const auto& [r, phrases] : doc.at("absolute").items()) {
        g.bags.absolute[parse_relation(r)] = detail::json_strings(phrases);
      }
    }
    if (doc.contains("relative")) {
      g.bags.relative.clear();
      for (const auto& [r, phrases] : doc.at("relative").items()) {
        const auto rel = parse_relation(r);
        if (rel == Relation::middle || rel == Relation::beside) {
          throw Error(Errc::table_conflict,
                      "relation '" + r + "' cannot have relative phrases");
        }
        g.bags.relative[rel] = detail::json_strings(phrases);
      }
    }
    auto& t = g.templates;
    if (doc.contains("articles")) t.articles = detail::json_strings(doc.at("articles"));
    if (doc.contains("pronouns")) t.pronouns = detail::json_strings(doc.at("pronouns"));
    if (doc.contains("human_pronouns")) {
      t.human_pronouns = detail::json_strings(doc.at("human_pronouns"));
    }
    if (doc.contains("scene_nouns")) t.scene_nouns = detail::json_strings(doc.at("scene_nouns"));
    if (doc.contains("clothing_connectors")) {
      t.clothing_connectors = detail::json_strings(doc.at("clothing_connectors"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_metadata, std::string("expression grammar: ") + e.what());
  }
  return g;
}

inline ExpressionGrammar ExpressionGrammar::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open grammar '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, "grammar '" + path.string() + "': " + e.what());
  }
  return from_json(doc);
}

}  // namespace forge
