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

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "forge/attributes.hpp"
#include "forge/error.hpp"
#include "forge/layout.hpp"

namespace forge {

enum class LogicKind { keyword, be, ape, rpe };

constexpr std::string_view to_string(LogicKind k) {
  switch (k) {
    case LogicKind::keyword: return "KEYWORD";
    case LogicKind::be: return "BE";
    case LogicKind::ape: return "APE";
    case LogicKind::rpe: return "RPE";
  }
  return "KEYWORD";
}

inline LogicKind parse_logic_kind(std::string_view s) {
  for (auto k : {LogicKind::keyword, LogicKind::be, LogicKind::ape, LogicKind::rpe}) {
    if (to_string(k) == s) return k;
  }
  throw Error(Errc::usage_error, "unknown logic kind '" + std::string(s) + "'");
}

/// Structured meaning of an expression: the target (category plus attribute
/// constraints) and, for positional forms, its relation to the picture
/// (abs) or to a described partner entity.
struct LogicForm {
  LogicKind kind = LogicKind::keyword;
  std::string obj0;
  AttrValues atts0;
  std::optional<Relation> rel;
  bool abs = false;
  std::optional<std::string> obj1;
  std::optional<AttrValues> atts1;

  /// Checks the structural constraints tying kind to the optional parts.
  bool well_formed() const {
    switch (kind) {
      case LogicKind::keyword: return !rel && !obj1 && !atts1 && atts0.empty() && !abs;
      case LogicKind::be: return !rel && !obj1 && !atts1 && !abs;
      case LogicKind::ape: return rel && abs && !obj1 && !atts1;
      case LogicKind::rpe: return rel && !abs && obj1 && atts1;
    }
    return false;
  }

  friend bool operator==(const LogicForm&, const LogicForm&) = default;
};

inline nlohmann::json to_json(const AttrValues& atts) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : atts) j[std::string(to_string(k))] = v;
  return j;
}

inline AttrValues attr_values_from_json(const nlohmann::json& j) {
  AttrValues out;
  for (const auto& [k, v] : j.items()) out[parse_attr_kind(k)] = v.get<std::string>();
  return out;
}

inline nlohmann::json to_json(const LogicForm& f) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(f.kind));
  j["obj0"] = f.obj0;
  j["atts0"] = to_json(f.atts0);
  j["rel"] = f.rel ? nlohmann::json(std::string(to_string(*f.rel))) : nlohmann::json(nullptr);
  j["abs"] = f.abs;
  j["obj1"] = f.obj1 ? nlohmann::json(*f.obj1) : nlohmann::json(nullptr);
  j["atts1"] = f.atts1 ? to_json(*f.atts1) : nlohmann::json(nullptr);
  return j;
}

inline LogicForm logic_from_json(const nlohmann::json& j) {
  LogicForm f;
  try {
    f.kind = parse_logic_kind(j.at("kind").get<std::string>());
    f.obj0 = j.at("obj0").get<std::string>();
    if (j.contains("atts0")) f.atts0 = attr_values_from_json(j.at("atts0"));
    if (j.contains("rel") && !j.at("rel").is_null()) {
      f.rel = parse_relation(j.at("rel").get<std::string>());
    }
    f.abs = j.value("abs", false);
    if (j.contains("obj1") && !j.at("obj1").is_null()) f.obj1 = j.at("obj1").get<std::string>();
    if (j.contains("atts1") && !j.at("atts1").is_null()) {
      f.atts1 = attr_values_from_json(j.at("atts1"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::usage_error, std::string("logic form: ") + e.what());
  }
  if (!f.well_formed()) throw Error(Errc::usage_error, "logic form is not well formed");
  return f;
}

}  // namespace forge
