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

// Category vocabulary, transparency/saliency lists and human synonym tables.
// Defaults are embedded; every table can be replaced from a JSON document
// with the same shape as `to_json()` produces.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "json.hpp"

#include "forge/attributes.hpp"
#include "forge/error.hpp"

namespace forge {

struct CategoryTables {
  /// category -> synonyms (the category itself is implied).
  std::map<std::string, std::set<std::string>> synonym_map;
  std::set<std::string> transparent_set;
  std::set<std::string> non_salient_set;
  std::set<std::string> human_base_synonyms;
  std::map<std::pair<Gender, AgeGroup>, std::set<std::string>> human_synonyms;
  /// Clothing words accepted in human metadata.
  std::set<std::string> clothes;

  bool contains(const std::string& category) const { return synonym_map.count(category) != 0; }

  /// Category itself plus its table synonyms.
  std::set<std::string> synonyms_of(const std::string& category) const {
    std::set<std::string> out{category};
    if (auto it = synonym_map.find(category); it != synonym_map.end()) {
      out.insert(it->second.begin(), it->second.end());
    }
    return out;
  }

  nlohmann::json to_json() const;
  static CategoryTables from_json(const nlohmann::json& doc);
  static CategoryTables load(const std::filesystem::path& path);

  static const CategoryTables& defaults();
};

inline constexpr const char* kHumanCategory = "human";

namespace detail {

inline CategoryTables make_default_tables() {
  CategoryTables t;
  t.transparent_set = {"smoke",      "glass",        "water",      "gauze",     "lace",
                       "ice",        "bubble wrap",  "plastic bag", "net",      "fire",
                       "flame",      "cloth",        "mesh bag",   "mesh",      "wine glass",
                       "ice cube",   "spider web",   "wine",       "cloud smog", "veil",
                       "wedding dress", "fishing net", "cloth net", "light",    "water drop",
                       "drip",       "dew",          "crystal stone", "beer"};
  t.non_salient_set = {"smoke", "water", "gauze", "lace",  "fire",  "flame", "net",
                       "leaves", "spider web", "mesh", "wine", "smog", "light", "water spray"};

  for (const auto& c : t.transparent_set) t.synonym_map[c];
  for (const auto& c : t.non_salient_set) t.synonym_map[c];

  t.synonym_map["human"] = {};
  t.synonym_map["smoke"] = {"fume"};
  t.synonym_map["fire"] = {"blaze"};
  t.synonym_map["light"] = {"glow"};
  t.synonym_map["leaves"] = {"foliage"};
  t.synonym_map["spider web"] = {"cobweb"};
  t.synonym_map["plastic bag"] = {"poly bag"};
  t.synonym_map["wine glass"] = {"goblet"};

  // Animal categories.
  t.synonym_map["alpaca"] = {"llama"};
  t.synonym_map["antelope"] = {"gazelle"};
  t.synonym_map["bear"] = {"grizzly"};
  t.synonym_map["camel"] = {"dromedary"};
  t.synonym_map["cat"] = {"kitty", "feline"};
  t.synonym_map["cattle"] = {"cow", "bovine"};
  t.synonym_map["deer"] = {"stag"};
  t.synonym_map["dog"] = {"puppy", "canine"};
  t.synonym_map["elephant"] = {"pachyderm"};
  t.synonym_map["giraffe"] = {};
  t.synonym_map["horse"] = {"pony", "equine"};
  t.synonym_map["kangaroo"] = {};
  t.synonym_map["leopard"] = {"panther"};
  t.synonym_map["lion"] = {};
  t.synonym_map["monkey"] = {"primate"};
  t.synonym_map["rabbit"] = {"bunny"};
  t.synonym_map["rhinoceros"] = {"rhino"};
  t.synonym_map["sheep"] = {"lamb"};
  t.synonym_map["tiger"] = {};
  t.synonym_map["zebra"] = {};

  // Everyday objects.
  t.synonym_map["flower"] = {"plant", "bloom", "blossom"};
  t.synonym_map["dandelion"] = {};
  t.synonym_map["vase"] = {"urn"};
  t.synonym_map["bottle"] = {"flask"};
  t.synonym_map["cup"] = {"mug"};
  t.synonym_map["umbrella"] = {"parasol"};
  t.synonym_map["chair"] = {"seat"};
  t.synonym_map["lamp"] = {"lantern"};
  t.synonym_map["bicycle"] = {"bike"};
  t.synonym_map["feather"] = {"plume"};
  t.synonym_map["tree"] = {"sapling"};
  t.synonym_map["basket"] = {"hamper"};
  t.synonym_map["doll"] = {"puppet"};
  t.synonym_map["ball"] = {"sphere"};

  t.human_base_synonyms = {"human being", "citizenry", "person", "individual", "mankind", "mortal"};
  t.human_synonyms[{Gender::female, AgeGroup::child}] = {"baby girl", "little girl", "girl"};
  t.human_synonyms[{Gender::male, AgeGroup::child}] = {"baby boy", "little boy", "boy"};
  t.human_synonyms[{Gender::female, AgeGroup::youth}] = {
      "girl", "teenager", "adolescent", "miss", "missy", "young lady", "young woman"};
  t.human_synonyms[{Gender::male, AgeGroup::youth}] = {"boy", "teenager", "adolescent"};
  t.human_synonyms[{Gender::female, AgeGroup::adult}] = {"woman", "lady"};
  t.human_synonyms[{Gender::male, AgeGroup::adult}] = {"man"};
  t.human_synonyms[{Gender::female, AgeGroup::senior}] = {"old woman", "senior citizen",
                                                          "pensioner"};
  t.human_synonyms[{Gender::male, AgeGroup::senior}] = {"old man", "senior citizen", "pensioner"};

  t.clothes = {"shirt", "t-shirt", "blouse", "dress",    "skirt",   "coat",   "jacket", "sweater",
               "hoodie", "suit",  "vest",   "jeans",    "trousers", "shorts", "uniform", "print"};
  return t;
}

inline std::set<std::string> json_string_set(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::invalid_metadata, std::string(what) + " must be an array");
  std::set<std::string> out;
  for (const auto& v : j) out.insert(v.get<std::string>());
  return out;
}

}  // namespace detail

inline const CategoryTables& CategoryTables::defaults() {
  static const CategoryTables tables = detail::make_default_tables();
  return tables;
}

inline nlohmann::json CategoryTables::to_json() const {
  nlohmann::json doc;
  doc["categories"] = nlohmann::json::object();
  for (const auto& [cat, syn] : synonym_map) doc["categories"][cat] = syn;
  doc["transparent"] = transparent_set;
  doc["non_salient"] = non_salient_set;
  doc["human_base_synonyms"] = human_base_synonyms;
  doc["human_synonyms"] = nlohmann::json::object();
  for (const auto& [key, syn] : human_synonyms) {
    doc["human_synonyms"][std::string(to_string(key.first))][std::string(to_string(key.second))] =
        syn;
  }
  doc["clothes"] = clothes;
  return doc;
}

/// Missing sections fall back to the embedded defaults.
inline CategoryTables CategoryTables::from_json(const nlohmann::json& doc) {
  CategoryTables t = defaults();
  try {
    if (doc.contains("categories")) {
      t.synonym_map.clear();
      for (const auto& [cat, syn] : doc.at("categories").items()) {
        t.synonym_map[cat] = detail::json_string_set(syn, "category synonyms");
      }
    }
    if (doc.contains("transparent")) {
      t.transparent_set = detail::json_string_set(doc.at("transparent"), "transparent");
    }
    if (doc.contains("non_salient")) {
      t.non_salient_set = detail::json_string_set(doc.at("non_salient"), "non_salient");
    }
    if (doc.contains("human_base_synonyms")) {
      t.human_base_synonyms =
          detail::json_string_set(doc.at("human_base_synonyms"), "human_base_synonyms");
    }
    if (doc.contains("human_synonyms")) {
      t.human_synonyms.clear();
      for (const auto& [g, by_age] : doc.at("human_synonyms").items()) {
        for (const auto& [a, syn] : by_age.items()) {
          t.human_synonyms[{parse_gender(g), parse_age_group(a)}] =
              detail::json_string_set(syn, "human synonyms");
        }
      }
    }
    if (doc.contains("clothes")) t.clothes = detail::json_string_set(doc.at("clothes"), "clothes");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_metadata, std::string("category tables: ") + e.what());
  }
  return t;
}

inline CategoryTables CategoryTables::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open tables '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, "tables '" + path.string() + "': " + e.what());
  }
  return from_json(doc);
}

}  // namespace forge
