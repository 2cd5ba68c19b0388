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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/error.hpp"

namespace forge {

enum class EntityClass { human, animal, object };
enum class Gender { male, female };
enum class AgeGroup { child, youth, adult, senior };

constexpr std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::human: return "human";
    case EntityClass::animal: return "animal";
    case EntityClass::object: return "object";
  }
  return "object";
}

constexpr std::string_view to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

constexpr std::string_view to_string(AgeGroup a) {
  switch (a) {
    case AgeGroup::child: return "child";
    case AgeGroup::youth: return "youth";
    case AgeGroup::adult: return "adult";
    case AgeGroup::senior: return "senior";
  }
  return "adult";
}

inline EntityClass parse_entity_class(std::string_view s) {
  if (s == "human") return EntityClass::human;
  if (s == "animal") return EntityClass::animal;
  if (s == "object") return EntityClass::object;
  throw Error(Errc::invalid_metadata, "unknown entity class '" + std::string(s) + "'");
}

inline Gender parse_gender(std::string_view s) {
  if (s == "male") return Gender::male;
  if (s == "female") return Gender::female;
  throw Error(Errc::invalid_metadata, "unknown gender '" + std::string(s) + "'");
}

inline AgeGroup parse_age_group(std::string_view s) {
  if (s == "child") return AgeGroup::child;
  if (s == "youth") return AgeGroup::youth;
  if (s == "adult") return AgeGroup::adult;
  if (s == "senior") return AgeGroup::senior;
  throw Error(Errc::invalid_metadata, "unknown age group '" + std::string(s) + "'");
}

inline constexpr Gender kGenders[] = {Gender::male, Gender::female};
inline constexpr AgeGroup kAgeGroups[] = {AgeGroup::child, AgeGroup::youth, AgeGroup::adult,
                                          AgeGroup::senior};

/// Kinds of attribute an expression can mention, in rendering order for
/// human entities. Non-human entities render color first.
enum class AttrKind { gender, age, transparency, saliency, color, clothes };

constexpr std::string_view to_string(AttrKind k) {
  switch (k) {
    case AttrKind::gender: return "gender";
    case AttrKind::age: return "age";
    case AttrKind::transparency: return "transparency";
    case AttrKind::saliency: return "saliency";
    case AttrKind::color: return "color";
    case AttrKind::clothes: return "clothes";
  }
  return "color";
}

inline AttrKind parse_attr_kind(std::string_view s) {
  for (auto k : {AttrKind::gender, AttrKind::age, AttrKind::transparency, AttrKind::saliency,
                 AttrKind::color, AttrKind::clothes}) {
    if (to_string(k) == s) return k;
  }
  throw Error(Errc::invalid_metadata, "unknown attribute kind '" + std::string(s) + "'");
}

/// Attribute constraints as they appear in an expression: kind -> surface
/// word ("lightpink", "non-transparent", "female", ...).
using AttrValues = std::map<AttrKind, std::string>;

struct AttributeSet {
  std::string color;
  bool transparent = false;
  bool salient = true;
  std::optional<Gender> gender;
  std::optional<AgeGroup> age_group;
  std::optional<std::string> clothes;

  bool is_human_complete() const { return gender && age_group && clothes && !color.empty(); }

  /// Every populated attribute as an expression word, keyed by kind.
  AttrValues values() const {
    AttrValues out;
    out[AttrKind::color] = color;
    out[AttrKind::transparency] = transparent ? "transparent" : "non-transparent";
    out[AttrKind::saliency] = salient ? "salient" : "non-salient";
    if (gender) out[AttrKind::gender] = std::string(to_string(*gender));
    if (age_group) out[AttrKind::age] = std::string(to_string(*age_group));
    if (clothes) out[AttrKind::clothes] = *clothes;
    return out;
  }

  std::size_t populated() const { return values().size(); }

  friend bool operator==(const AttributeSet&, const AttributeSet&) = default;
};

/// Kinds in the fixed rendering order for an entity of the given class.
inline std::vector<AttrKind> attribute_order(EntityClass cls) {
  if (cls == EntityClass::human) {
    return {AttrKind::gender, AttrKind::age, AttrKind::transparency, AttrKind::saliency,
            AttrKind::color, AttrKind::clothes};
  }
  return {AttrKind::color, AttrKind::transparency, AttrKind::saliency};
}

}  // namespace forge
