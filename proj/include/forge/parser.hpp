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

// Recursive-descent parser for the generated expression grammar:
//
//   expr     := NOUN                                  (keyword)
//             | np                                    (basic)
//             | np ABS_PHRASE "the" SCENE             (absolute position)
//             | np REL_PHRASE np                      (relative position)
//   np       := ART adj* NOUN clothing?
//             | ART NOUN PRONOUN "is" adj+ clothing?
//   adj+     := ADJ ("and"? ADJ)*
//   clothing := CONNECTOR COLOR? CLOTHES
//
// Alternatives are explored exhaustively; every complete parse is collected
// and distinct results are reported as ambiguity.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/error.hpp"
#include "forge/lexicon.hpp"
#include "forge/logic.hpp"

namespace forge {

namespace detail {

struct NounPhrase {
  std::string category;
  AttrValues atts;
};

struct NpParse {
  NounPhrase np;
  std::size_t end;
};

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::vector<Token>& tokens) : toks_(tokens) {}

  std::vector<LogicForm> parse_all() const {
    std::vector<LogicForm> out;
    const std::size_t n = toks_.size();
    if (n == 1 && toks_[0].roles->noun) {
      LogicForm f;
      f.kind = LogicKind::keyword;
      f.obj0 = *toks_[0].roles->noun;
      out.push_back(std::move(f));
    }
    for (const auto& head : noun_phrase(0)) {
      const std::size_t pos = head.end;
      if (pos == n) {
        LogicForm f;
        f.kind = LogicKind::be;
        f.obj0 = head.np.category;
        f.atts0 = head.np.atts;
        out.push_back(std::move(f));
        continue;
      }
      const auto* roles = toks_[pos].roles;
      if (roles->absolute && pos + 3 == n && toks_[pos + 1].roles->article &&
          toks_[pos + 1].phrase == "the" && toks_[pos + 2].roles->scene) {
        LogicForm f;
        f.kind = LogicKind::ape;
        f.obj0 = head.np.category;
        f.atts0 = head.np.atts;
        f.rel = *roles->absolute;
        f.abs = true;
        out.push_back(std::move(f));
      }
      if (roles->relative) {
        for (const auto& tail : noun_phrase(pos + 1)) {
          if (tail.end != n) continue;
          LogicForm f;
          f.kind = LogicKind::rpe;
          f.obj0 = head.np.category;
          f.atts0 = head.np.atts;
          f.rel = *roles->relative;
          f.obj1 = tail.np.category;
          f.atts1 = tail.np.atts;
          out.push_back(std::move(f));
        }
      }
    }
    return out;
  }

 private:
  const PhraseRoles* at(std::size_t pos) const {
    return pos < toks_.size() ? toks_[pos].roles : nullptr;
  }

  static bool add(AttrValues& atts, AttrKind kind, const std::string& value) {
    return atts.emplace(kind, value).second;
  }

  /// Consumes ADJ ("and"? ADJ)*; returns false on a malformed or
  /// contradictory list. Clothing words are not adjectives.
  bool adjectives(std::size_t& pos, AttrValues& atts, bool require_one) const {
    std::size_t count = 0;
    bool pending_and = false;
    while (const auto* r = at(pos)) {
      if (r->attribute && *r->attribute != AttrKind::clothes) {
        if (!add(atts, *r->attribute, toks_[pos].phrase)) return false;
        ++count;
        pending_and = false;
      } else if (r->conjunction && count > 0 && !pending_and) {
        pending_and = true;
      } else {
        break;
      }
      ++pos;
    }
    if (pending_and) return false;
    return count > 0 || !require_one;
  }

  void with_clothing(NounPhrase np, std::size_t pos, std::vector<NpParse>& out) const {
    out.push_back({np, pos});
    const auto* conn = at(pos);
    if (!conn || !conn->connector) return;
    std::size_t p = pos + 1;
    if (const auto* c = at(p); c && c->attribute == AttrKind::color) {
      if (!add(np.atts, AttrKind::color, toks_[p].phrase)) return;
      ++p;
    }
    const auto* cl = at(p);
    if (!cl || cl->attribute != AttrKind::clothes) return;
    if (!add(np.atts, AttrKind::clothes, toks_[p].phrase)) return;
    out.push_back({std::move(np), p + 1});
  }

  std::vector<NpParse> noun_phrase(std::size_t pos) const {
    std::vector<NpParse> out;
    const auto* art = at(pos);
    if (!art || !art->article) return out;
    const std::size_t start = pos + 1;

    {
      std::size_t p = start;
      AttrValues atts;
      if (adjectives(p, atts, false)) {
        if (const auto* noun = at(p); noun && noun->noun) {
          with_clothing({*noun->noun, std::move(atts)}, p + 1, out);
        }
      }
    }
    {
      const auto* noun = at(start);
      const auto* pron = at(start + 1);
      const auto* cop = at(start + 2);
      if (noun && noun->noun && pron && pron->pronoun && cop && cop->copula) {
        std::size_t p = start + 3;
        AttrValues atts;
        if (adjectives(p, atts, true)) with_clothing({*noun->noun, std::move(atts)}, p, out);
      }
    }
    return out;
  }

  const std::vector<Token>& toks_;
};

}  // namespace detail

/// Parses generated text back into its logic form. Surface nouns come back
/// as canonical categories and relation phrases as relations.
inline LogicForm parse(std::string_view text, const Lexicon& lex = Lexicon::defaults()) {
  const auto tokens = tokenize(text, lex);
  if (tokens.empty()) throw Error(Errc::unparsable_expression, "empty expression");
  auto forms = detail::ExpressionParser(tokens).parse_all();
  if (forms.empty()) {
    throw Error(Errc::unparsable_expression, "no template matches '" + std::string(text) + "'");
  }
  // Templates are tried in the order keyword, basic, absolute, relative;
  // identical logic from different templates collapses to one result.
  for (std::size_t i = 1; i < forms.size(); ++i) {
    if (!(forms[i] == forms[0])) {
      throw Error(Errc::ambiguous_parse, "'" + std::string(text) + "' has " +
                                             std::to_string(forms.size()) + " readings");
    }
  }
  return forms.front();
}

}  // namespace forge
