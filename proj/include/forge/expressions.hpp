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

// Keyword and expression generation. Every expression is rendered from a
// logic form, parsed back and grounded against the scene before it is
// returned; anything that does not come back as exactly its source entity is
// retried with more attributes or another relation.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "forge/attributes.hpp"
#include "forge/catalog.hpp"
#include "forge/error.hpp"
#include "forge/grounding.hpp"
#include "forge/layout.hpp"
#include "forge/lexicon.hpp"
#include "forge/logic.hpp"
#include "forge/parser.hpp"
#include "forge/random.hpp"

namespace forge {

enum class ExpressionKind { keyword, be, ape, rpe1, rpe2 };

constexpr std::string_view to_string(ExpressionKind k) {
  switch (k) {
    case ExpressionKind::keyword: return "KEYWORD";
    case ExpressionKind::be: return "BE";
    case ExpressionKind::ape: return "APE";
    case ExpressionKind::rpe1: return "RPE1";
    case ExpressionKind::rpe2: return "RPE2";
  }
  return "KEYWORD";
}

inline ExpressionKind parse_expression_kind(std::string_view s) {
  for (auto k : {ExpressionKind::keyword, ExpressionKind::be, ExpressionKind::ape,
                 ExpressionKind::rpe1, ExpressionKind::rpe2}) {
    if (to_string(k) == s) return k;
  }
  throw Error(Errc::invalid_metadata, "unknown expression kind '" + std::string(s) + "'");
}

inline constexpr ExpressionKind kSuiteKinds[] = {ExpressionKind::be, ExpressionKind::ape,
                                                 ExpressionKind::rpe1, ExpressionKind::rpe2};

struct ExpressionRecord {
  std::string entity_id;
  ExpressionKind kind = ExpressionKind::be;
  std::string text;
  LogicForm logic;
};

inline nlohmann::json to_json(const ExpressionRecord& r) {
  return {{"kind", std::string(to_string(r.kind))}, {"text", r.text}, {"logic", to_json(r.logic)}};
}

inline ExpressionRecord expression_from_json(const nlohmann::json& j, const std::string& entity_id) {
  return {entity_id, parse_expression_kind(j.at("kind").get<std::string>()),
          j.at("text").get<std::string>(), logic_from_json(j.at("logic"))};
}

// ---------------------------------------------------------------------------
// Rendering

enum class NpForm { prefix, which };

/// Surface choices for one noun phrase.
struct NpStyle {
  std::string article = "the";
  std::string noun;
  NpForm form = NpForm::prefix;
  std::string pronoun = "which";
  std::string connector = "with the";
  bool human = false;
};

struct RenderPlan {
  LogicForm logic;
  NpStyle target;
  std::string relation_phrase;
  std::string scene_noun = "picture";
  NpStyle partner;
};

namespace detail {

inline std::string join_adjectives(const std::vector<std::string>& words,
                                   const std::string& conjunction) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += (i + 1 == words.size()) ? " " + conjunction + " " : " ";
    out += words[i];
  }
  return out;
}

/// Adjective words in rendering order; color moves into the clothing phrase
/// when clothes are mentioned.
inline std::vector<std::string> adjective_words(const AttrValues& atts, bool human) {
  const bool clothes = atts.count(AttrKind::clothes) != 0;
  std::vector<std::string> out;
  for (auto kind : attribute_order(human ? EntityClass::human : EntityClass::object)) {
    if (kind == AttrKind::clothes) continue;
    if (kind == AttrKind::color && clothes) continue;
    if (auto it = atts.find(kind); it != atts.end()) out.push_back(it->second);
  }
  return out;
}

inline std::string render_np(const std::string& noun, const AttrValues& atts, const NpStyle& style,
                             const ExpressionTemplates& t) {
  const auto adjectives = adjective_words(atts, style.human);
  std::string out;
  if (style.form == NpForm::which && !adjectives.empty()) {
    out += noun + " " + style.pronoun + " " + t.copula + " " +
           join_adjectives(adjectives, t.conjunction);
  } else {
    if (!adjectives.empty()) out += join_adjectives(adjectives, t.conjunction) + " ";
    out += noun;
  }
  std::string article = style.article;
  if (article == "a" && std::string_view("aeiou").find(out.front()) != std::string_view::npos) {
    article = "an";
  }
  out = article + " " + out;
  if (auto cl = atts.find(AttrKind::clothes); cl != atts.end()) {
    out += " " + style.connector;
    if (auto c = atts.find(AttrKind::color); c != atts.end()) out += " " + c->second;
    out += " " + cl->second;
  }
  return out;
}

}  // namespace detail

inline std::string render(const RenderPlan& plan, const Lexicon& lex = Lexicon::defaults()) {
  const auto& t = lex.grammar().templates;
  const auto& f = plan.logic;
  if (f.kind == LogicKind::keyword) return plan.target.noun;
  std::string out = detail::render_np(plan.target.noun, f.atts0, plan.target, t);
  if (f.kind == LogicKind::ape) {
    out += " " + plan.relation_phrase + " " + t.scene_article + " " + plan.scene_noun;
  } else if (f.kind == LogicKind::rpe) {
    out += " " + plan.relation_phrase + " " +
           detail::render_np(plan.partner.noun, f.atts1.value_or(AttrValues{}), plan.partner, t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generation

struct GenerateOptions {
  int max_attempts = 48;
};

inline std::vector<std::string> sorted(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

/// Canonical category, or for humans a synonym drawn from the gender and
/// age-group table.
inline std::string keyword_for(const EntityInfo& e, const Lexicon& lex, Rng& rng) {
  if (!e.is_human()) return e.category;
  const auto& a = e.attributes;
  if (!a.gender || !a.age_group) {
    throw Error(Errc::invalid_metadata, "human '" + e.id + "' lacks gender or age group");
  }
  return pick(sorted(human_synonyms(*a.gender, *a.age_group, lex.tables())), rng);
}

inline ExpressionRecord keyword_record(const EntityInfo& e, const Lexicon& lex, Rng& rng) {
  ExpressionRecord r;
  r.entity_id = e.id;
  r.kind = ExpressionKind::keyword;
  r.text = keyword_for(e, lex, rng);
  r.logic.kind = LogicKind::keyword;
  r.logic.obj0 = e.category;
  return r;
}

namespace detail {

inline NpStyle draw_style(const EntityInfo& e, NpForm form, const Lexicon& lex, Rng& rng) {
  const auto& t = lex.grammar().templates;
  NpStyle s;
  s.human = e.is_human();
  s.article = pick(t.articles, rng);
  s.noun = pick(sorted(e.synonyms), rng);
  s.form = form;
  s.pronoun = pick(s.human ? t.human_pronouns : t.pronouns, rng);
  s.connector = pick(t.clothing_connectors, rng);
  return s;
}

/// Random attribute subset of size k (clamped to [1, all]). In `which` form
/// at least one attribute must render as an adjective.
inline AttrValues draw_subset(const EntityInfo& e, std::size_t k, NpForm form, Rng& rng) {
  const auto all = e.attributes.values();
  std::vector<AttrKind> kinds;
  for (const auto& [kind, value] : all) kinds.push_back(kind);
  shuffle(kinds, rng);
  k = std::clamp<std::size_t>(k, 1, kinds.size());
  AttrValues out;
  for (std::size_t i = 0; i < k; ++i) out[kinds[i]] = all.at(kinds[i]);
  if (form == NpForm::which && adjective_words(out, e.is_human()).empty()) {
    std::vector<AttrKind> adjectival;
    for (auto kind : kinds) {
      if (kind != AttrKind::clothes && kind != AttrKind::color && !out.count(kind)) {
        adjectival.push_back(kind);
      }
    }
    if (!adjectival.empty()) {
      const auto kind = pick(adjectival, rng);
      out[kind] = all.at(kind);
    }
  }
  return out;
}

/// True when the text parses to `logic` and grounds to exactly `target`.
inline bool verified(const std::string& text, const LogicForm& logic, std::size_t target,
                     const SceneMeta& scene, const Lexicon& lex) {
  LogicForm parsed;
  try {
    parsed = parse(text, lex);
  } catch (const Error&) {
    return false;
  }
  if (!(parsed == logic)) return false;
  const auto hits = ground_indices(parsed, scene);
  return hits.size() == 1 && hits.front() == target;
}

struct PartnerRelation {
  std::size_t partner;
  Relation relation;
  friend bool operator==(const PartnerRelation&, const PartnerRelation&) = default;
};

/// Layout facts involving the target first (seeded order), then every other
/// relation that holds under eval_relation.
inline std::vector<PartnerRelation> relative_candidates(std::size_t target, const SceneMeta& scene,
                                                        Rng& rng) {
  const auto& layout = scene.layout;
  std::vector<PartnerRelation> facts;
  for (const auto& f : layout.relation_facts) {
    if (f.subject == target) facts.push_back({f.object, f.relation});
    if (f.object == target) facts.push_back({f.subject, inverse(f.relation)});
  }
  std::vector<PartnerRelation> rest;
  for (std::size_t j = 0; j < layout.size(); ++j) {
    if (j == target) continue;
    for (auto r : kLayoutRelations) {
      PartnerRelation c{j, r};
      if (std::find(facts.begin(), facts.end(), c) != facts.end()) continue;
      if (eval_relation(layout, target, j, r)) rest.push_back(c);
    }
  }
  std::erase_if(facts, [&](const auto& c) { return !eval_relation(layout, target, c.partner, c.relation); });
  shuffle(facts, rng);
  shuffle(rest, rng);
  facts.insert(facts.end(), rest.begin(), rest.end());
  return facts;
}

inline std::vector<Relation> absolute_candidates(std::size_t target, const SceneMeta& scene,
                                                 const Lexicon& lex, Rng& rng) {
  std::vector<Relation> out;
  for (auto r : {Relation::left, Relation::right, Relation::top, Relation::bottom, Relation::middle,
                 Relation::in_front_of, Relation::behind}) {
    if (r == Relation::middle && scene.layout.size() < 3) continue;
    auto it = lex.grammar().bags.absolute.find(r);
    if (it == lex.grammar().bags.absolute.end() || it->second.empty()) continue;
    if (eval_relation(scene.layout, target, std::nullopt, r)) out.push_back(r);
  }
  shuffle(out, rng);
  return out;
}

}  // namespace detail

/// One expression of the requested kind for `scene.entities[target]`.
inline ExpressionRecord generate(std::size_t target, const SceneMeta& scene, ExpressionKind kind,
                                 const Lexicon& lex, Rng& rng, const GenerateOptions& opts = {}) {
  scene.validate();
  check_index(scene.layout, target);
  const auto& e = scene.entities[target];
  ExpressionRecord rec;
  rec.entity_id = e.id;
  rec.kind = kind;

  if (kind == ExpressionKind::keyword) return keyword_record(e, lex, rng);

  const std::size_t n_atts = e.attributes.values().size();

  if (kind == ExpressionKind::be) {
    const NpForm form = e.is_human() ? NpForm::prefix : (coin(rng) ? NpForm::prefix : NpForm::which);
    RenderPlan plan;
    plan.logic.kind = LogicKind::be;
    plan.logic.obj0 = e.category;
    plan.logic.atts0 = e.attributes.values();
    plan.target = detail::draw_style(e, form, lex, rng);
    rec.text = render(plan, lex);
    rec.logic = plan.logic;
    if (!detail::verified(rec.text, rec.logic, target, scene, lex)) {
      throw Error(Errc::ungroundable_expression,
                  "basic expression for '" + e.id + "' is not unique: " + rec.text);
    }
    return rec;
  }

  if (scene.layout.size() < 2 && kind != ExpressionKind::ape) {
    throw Error(Errc::no_true_relation, "relative expressions need at least 2 entities");
  }

  if (kind == ExpressionKind::ape) {
    const auto rels = detail::absolute_candidates(target, scene, lex, rng);
    if (rels.empty()) {
      throw Error(Errc::no_true_relation, "no absolute relation holds for '" + e.id + "'");
    }
    const std::size_t base = static_cast<std::size_t>(uniform_int(rng, 1, n_atts));
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
      const Relation r = rels[attempt % rels.size()];
      const std::size_t k = base + attempt / rels.size();
      const NpForm form = coin(rng) ? NpForm::prefix : NpForm::which;
      RenderPlan plan;
      plan.logic.kind = LogicKind::ape;
      plan.logic.obj0 = e.category;
      plan.logic.atts0 = detail::draw_subset(e, k, form, rng);
      plan.logic.rel = r;
      plan.logic.abs = true;
      plan.target = detail::draw_style(e, form, lex, rng);
      plan.relation_phrase = pick(lex.grammar().bags.absolute.at(r), rng);
      plan.scene_noun = pick(lex.grammar().templates.scene_nouns, rng);
      plan.logic.rel = lex.absolute_meaning(plan.relation_phrase);
      rec.text = render(plan, lex);
      rec.logic = plan.logic;
      if (detail::verified(rec.text, rec.logic, target, scene, lex)) return rec;
    }
    throw Error(Errc::ungroundable_expression, "no unique absolute expression for '" + e.id + "'");
  }

  // Relative position.
  const NpForm form = kind == ExpressionKind::rpe1 ? NpForm::prefix : NpForm::which;
  const auto cands = detail::relative_candidates(target, scene, rng);
  if (cands.empty()) {
    throw Error(Errc::no_true_relation, "no relation holds between '" + e.id + "' and another entity");
  }
  const std::size_t base = static_cast<std::size_t>(uniform_int(rng, 1, n_atts));
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    const auto& c = cands[attempt % cands.size()];
    const auto& partner = scene.entities[c.partner];
    const std::size_t k = base + attempt / cands.size();
    const std::size_t partner_n = partner.attributes.values().size();
    const std::size_t partner_k =
        static_cast<std::size_t>(uniform_int(rng, 1, partner_n)) + attempt / cands.size();
    auto bag = lex.grammar().bags.relative.find(c.relation);
    if (bag == lex.grammar().bags.relative.end() || bag->second.empty()) continue;

    RenderPlan plan;
    plan.logic.kind = LogicKind::rpe;
    plan.logic.obj0 = e.category;
    plan.logic.atts0 = detail::draw_subset(e, k, form, rng);
    plan.logic.obj1 = partner.category;
    plan.logic.atts1 = detail::draw_subset(partner, partner_k, form, rng);
    plan.target = detail::draw_style(e, form, lex, rng);
    plan.partner = detail::draw_style(partner, form, lex, rng);
    plan.relation_phrase = pick(bag->second, rng);
    plan.logic.rel = lex.relative_meaning(plan.relation_phrase);
    if (!eval_relation(scene.layout, target, c.partner, *plan.logic.rel)) continue;
    rec.text = render(plan, lex);
    rec.logic = plan.logic;
    if (detail::verified(rec.text, rec.logic, target, scene, lex)) return rec;
  }
  throw Error(Errc::ungroundable_expression, "no unique relative expression for '" + e.id + "'");
}

/// BE, APE, RPE1 and RPE2 for one entity, each verified unique.
inline std::vector<ExpressionRecord> generate_suite(std::size_t target, const SceneMeta& scene,
                                                    const Lexicon& lex, Rng& rng,
                                                    const GenerateOptions& opts = {}) {
  if (scene.layout.size() < 2) {
    throw Error(Errc::no_true_relation, "expression suites need at least 2 entities");
  }
  std::vector<ExpressionRecord> out;
  out.reserve(std::size(kSuiteKinds));
  for (auto kind : kSuiteKinds) out.push_back(generate(target, scene, kind, lex, rng, opts));
  return out;
}

}  // namespace forge
