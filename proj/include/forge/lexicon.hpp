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

// The closed vocabulary of generated expressions: every phrase the grammar
// can emit, with the role(s) it plays. Built once from the category tables
// and the expression grammar; immutable afterwards.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/attributes.hpp"
#include "forge/css_colors.hpp"
#include "forge/error.hpp"
#include "forge/layout.hpp"
#include "forge/tables.hpp"
#include "forge/wordbags.hpp"

namespace forge {

struct PhraseRoles {
  bool article = false;
  bool pronoun = false;
  bool copula = false;
  bool conjunction = false;
  bool scene = false;
  bool connector = false;
  /// Canonical category for nouns.
  std::optional<std::string> noun;
  std::optional<AttrKind> attribute;
  std::optional<Relation> absolute;
  std::optional<Relation> relative;

  int exclusive_roles() const {
    return article + pronoun + copula + conjunction + scene + connector + noun.has_value() +
           attribute.has_value() + (absolute.has_value() || relative.has_value());
  }
};

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

inline std::string join_words(const std::vector<std::string>& words, std::size_t begin,
                              std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += words[i];
  }
  return out;
}

class Lexicon {
 public:
  Lexicon(CategoryTables tables, ExpressionGrammar grammar)
      : tables_(std::move(tables)), grammar_(std::move(grammar)) {
    build();
  }

  static const Lexicon& defaults() {
    static const Lexicon lex(CategoryTables::defaults(), ExpressionGrammar::defaults());
    return lex;
  }

  const CategoryTables& tables() const { return tables_; }
  const ExpressionGrammar& grammar() const { return grammar_; }
  std::size_t max_phrase_words() const { return max_words_; }

  const PhraseRoles* lookup(const std::string& phrase) const {
    auto it = phrases_.find(phrase);
    return it == phrases_.end() ? nullptr : &it->second;
  }

  /// Canonical category of a surface noun.
  std::optional<std::string> canonical(const std::string& noun) const {
    const auto* r = lookup(noun);
    if (!r || !r->noun) return std::nullopt;
    return r->noun;
  }

  /// Relation a relative phrase denotes; phrases shared by left and right
  /// ("beside", "near", ...) denote `beside`.
  Relation relative_meaning(const std::string& phrase) const {
    const auto* r = lookup(phrase);
    if (!r || !r->relative) {
      throw Error(Errc::unparsable_expression, "'" + phrase + "' is not a relative phrase");
    }
    return *r->relative;
  }

  Relation absolute_meaning(const std::string& phrase) const {
    const auto* r = lookup(phrase);
    if (!r || !r->absolute) {
      throw Error(Errc::unparsable_expression, "'" + phrase + "' is not an absolute phrase");
    }
    return *r->absolute;
  }

 private:
  static std::string normalize(const std::string& phrase) {
    return join_words(split_words(phrase), 0, split_words(phrase).size());
  }

  PhraseRoles& entry(const std::string& phrase) {
    const auto norm = normalize(phrase);
    if (norm.empty()) throw Error(Errc::table_conflict, "empty phrase in vocabulary");
    max_words_ = std::max(max_words_, split_words(norm).size());
    return phrases_[norm];
  }

  void add_noun(const std::string& phrase, const std::string& category) {
    auto& e = entry(phrase);
    if (e.noun && *e.noun != category) {
      throw Error(Errc::table_conflict, "noun '" + phrase + "' names both '" + *e.noun + "' and '" +
                                            category + "'");
    }
    e.noun = category;
  }

  void add_attribute(const std::string& phrase, AttrKind kind) {
    auto& e = entry(phrase);
    if (e.attribute && *e.attribute != kind) {
      throw Error(Errc::table_conflict, "attribute word '" + phrase + "' has two kinds");
    }
    e.attribute = kind;
  }

  void build() {
    const auto& t = grammar_.templates;
    for (const auto& w : t.articles) entry(w).article = true;
    for (const auto& w : t.pronouns) entry(w).pronoun = true;
    for (const auto& w : t.human_pronouns) entry(w).pronoun = true;
    for (const auto& w : t.scene_nouns) entry(w).scene = true;
    for (const auto& w : t.clothing_connectors) entry(w).connector = true;
    entry(t.copula).copula = true;
    entry(t.conjunction).conjunction = true;
    entry(t.scene_article).article = true;
    // Rendering turns "a" into "an" before a vowel.
    if (std::find(t.articles.begin(), t.articles.end(), "a") != t.articles.end()) {
      entry("an").article = true;
    }

    for (const auto& [category, synonyms] : tables_.synonym_map) {
      add_noun(category, category);
      for (const auto& s : synonyms) add_noun(s, category);
    }
    for (const auto& s : tables_.human_base_synonyms) add_noun(s, kHumanCategory);
    for (const auto& [key, synonyms] : tables_.human_synonyms) {
      for (const auto& s : synonyms) add_noun(s, kHumanCategory);
    }

    for (const auto& c : css_colors()) add_attribute(std::string(c.name), AttrKind::color);
    for (const auto* w : {"transparent", "non-transparent"}) add_attribute(w, AttrKind::transparency);
    for (const auto* w : {"salient", "non-salient"}) add_attribute(w, AttrKind::saliency);
    for (auto g : kGenders) add_attribute(std::string(to_string(g)), AttrKind::gender);
    for (auto a : kAgeGroups) add_attribute(std::string(to_string(a)), AttrKind::age);
    for (const auto& c : tables_.clothes) add_attribute(c, AttrKind::clothes);

    std::map<std::string, std::set<Relation>> absolute;
    std::map<std::string, std::set<Relation>> relative;
    for (const auto& [rel, phrases] : grammar_.bags.absolute) {
      for (const auto& p : phrases) absolute[normalize(p)].insert(rel);
    }
    for (const auto& [rel, phrases] : grammar_.bags.relative) {
      for (const auto& p : phrases) relative[normalize(p)].insert(rel);
    }
    for (const auto& [phrase, rels] : absolute) {
      if (rels.size() != 1) {
        throw Error(Errc::table_conflict, "absolute phrase '" + phrase + "' maps to several relations");
      }
      entry(phrase).absolute = *rels.begin();
    }
    for (const auto& [phrase, rels] : relative) {
      Relation meaning;
      if (rels.size() == 1) {
        meaning = *rels.begin();
      } else if (rels == std::set<Relation>{Relation::left, Relation::right}) {
        meaning = Relation::beside;
      } else {
        throw Error(Errc::table_conflict, "relative phrase '" + phrase + "' is ambiguous");
      }
      entry(phrase).relative = meaning;
    }

    for (const auto& [phrase, roles] : phrases_) {
      if (roles.exclusive_roles() != 1) {
        throw Error(Errc::table_conflict, "phrase '" + phrase + "' plays several grammatical roles");
      }
    }
  }

  CategoryTables tables_;
  ExpressionGrammar grammar_;
  std::unordered_map<std::string, PhraseRoles> phrases_;
  std::size_t max_words_ = 1;
};

struct Token {
  std::string phrase;
  const PhraseRoles* roles;
};

/// Greedy longest-match segmentation into vocabulary phrases.
inline std::vector<Token> tokenize(std::string_view text, const Lexicon& lex) {
  const auto words = split_words(text);
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < words.size()) {
    const std::size_t longest = std::min(lex.max_phrase_words(), words.size() - pos);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      auto phrase = join_words(words, pos, pos + len);
      if (const auto* roles = lex.lookup(phrase)) {
        tokens.push_back({std::move(phrase), roles});
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw Error(Errc::unparsable_expression, "unknown word '" + words[pos] + "'");
    }
  }
  return tokens;
}

}  // namespace forge
