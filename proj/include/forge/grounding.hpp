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

// Executable semantics of logic forms against a scene. These predicates are
// the normative meaning of every generated expression.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/attributes.hpp"
#include "forge/catalog.hpp"
#include "forge/error.hpp"
#include "forge/layout.hpp"
#include "forge/logic.hpp"

namespace forge {

/// A layout together with what is known about each placed entity;
/// `entities[i]` describes `layout.placements[i]`.
struct SceneMeta {
  SceneLayout layout;
  std::vector<EntityInfo> entities;

  void validate() const {
    if (entities.size() != layout.placements.size()) {
      throw Error(Errc::size_mismatch, "scene has " + std::to_string(entities.size()) +
                                           " entities for " +
                                           std::to_string(layout.placements.size()) +
                                           " placements");
    }
  }
};

/// Every constraint must be met by a populated attribute with the same value.
inline bool attributes_consistent(const AttrValues& constraints, const AttributeSet& attrs) {
  const auto have = attrs.values();
  for (const auto& [kind, value] : constraints) {
    auto it = have.find(kind);
    if (it == have.end() || it->second != value) return false;
  }
  return true;
}

inline bool matches(const EntityInfo& e, const std::string& category, const AttrValues& atts) {
  return e.synonyms.count(category) != 0 && attributes_consistent(atts, e.attributes);
}

/// Indices of the entities the logic form denotes.
inline std::vector<std::size_t> ground_indices(const LogicForm& logic, const SceneMeta& scene) {
  scene.validate();
  std::vector<std::size_t> out;
  const std::size_t n = scene.entities.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!matches(scene.entities[i], logic.obj0, logic.atts0)) continue;
    bool ok = true;
    if (logic.rel) {
      if (logic.abs) {
        ok = eval_relation(scene.layout, i, std::nullopt, *logic.rel);
      } else {
        ok = false;
        for (std::size_t j = 0; j < n && !ok; ++j) {
          if (j == i || !logic.obj1) continue;
          ok = matches(scene.entities[j], *logic.obj1, logic.atts1.value_or(AttrValues{})) &&
               eval_relation(scene.layout, i, j, *logic.rel);
        }
      }
    }
    if (ok) out.push_back(i);
  }
  return out;
}

inline std::set<std::string> ground(const LogicForm& logic, const SceneMeta& scene) {
  std::set<std::string> ids;
  for (auto i : ground_indices(logic, scene)) ids.insert(scene.entities[i].id);
  return ids;
}

}  // namespace forge
