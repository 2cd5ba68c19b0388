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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/lexicon.hpp"
#include "forge/manifest.hpp"

namespace forge {

struct SplitStats {
  std::size_t images = 0;
  std::size_t mattes = 0;
  std::size_t texts = 0;
  std::size_t categories = 0;
  /// Mean whitespace-separated word count per text.
  double text_length = 0.0;
  /// Distinct attribute values and relationship phrases used.
  std::size_t attribute_values = 0;
  std::size_t relation_phrases = 0;
};

struct StatsReport {
  Setting setting = Setting::expression;
  /// Keyed by split name, plus "all".
  std::map<std::string, SplitStats> splits;
  std::map<std::string, double> class_proportions;
  std::map<std::string, std::size_t> relation_frequency;
  std::map<std::string, std::size_t> relation_phrase_frequency;
  std::map<std::string, std::size_t> attribute_frequency;
  std::map<std::string, std::size_t> keyword_frequency;
};

inline std::size_t word_count(const std::string& text) { return split_words(text).size(); }

namespace detail {

struct SplitAccumulator {
  std::set<std::string> image_ids;
  std::size_t mattes = 0;
  std::size_t texts = 0;
  std::size_t words = 0;
  std::set<std::string> categories;
  std::set<std::string> attributes;
  std::set<std::string> phrases;

  SplitStats finish() const {
    SplitStats s;
    s.images = image_ids.size();
    s.mattes = mattes;
    s.texts = texts;
    s.categories = categories.size();
    s.text_length = texts ? static_cast<double>(words) / texts : 0.0;
    s.attribute_values = attributes.size();
    s.relation_phrases = phrases.size();
    return s;
  }
};

}  // namespace detail

/// Tallies over the manifest as given; for the keyword setting pass the
/// output of filter_keyword_setting.
inline StatsReport stats(const DatasetManifest& manifest, Setting setting,
                         const Lexicon& lex = Lexicon::defaults()) {
  StatsReport report;
  report.setting = setting;
  std::map<std::string, detail::SplitAccumulator> acc;
  std::map<std::string, std::size_t> class_counts;
  std::size_t entity_total = 0;

  for (const auto& im : manifest.images) {
    for (auto* a : {&acc[im.split], &acc["all"]}) a->image_ids.insert(im.image_id);
    for (const auto& f : im.layout.relation_facts) {
      ++report.relation_frequency[std::string(to_string(f.relation))];
    }
    for (const auto& e : im.entities) {
      if (e.dropped()) continue;
      ++entity_total;
      ++class_counts[std::string(to_string(e.info.entity_class))];
      ++report.keyword_frequency[e.keyword];
      for (const auto& [kind, value] : e.info.attributes.values()) {
        ++report.attribute_frequency[value];
      }
      std::vector<std::string> texts;
      std::set<std::string> phrases;
      if (setting == Setting::keyword) {
        texts.push_back(e.keyword);
      } else {
        for (const auto& r : e.expressions) {
          texts.push_back(r.text);
          try {
            for (const auto& t : tokenize(r.text, lex)) {
              if (t.roles->absolute || t.roles->relative) phrases.insert(t.phrase);
            }
          } catch (const Error&) {
            // Texts from a different vocabulary still count; only phrase
            // tallies are skipped.
          }
        }
      }
      for (const auto& p : phrases) ++report.relation_phrase_frequency[p];
      for (auto* a : {&acc[im.split], &acc["all"]}) {
        ++a->mattes;
        a->categories.insert(e.info.category);
        for (const auto& [kind, value] : e.info.attributes.values()) a->attributes.insert(value);
        a->phrases.insert(phrases.begin(), phrases.end());
        for (const auto& t : texts) {
          ++a->texts;
          a->words += word_count(t);
        }
      }
    }
  }
  for (const auto& [split, a] : acc) report.splits[split] = a.finish();
  for (const auto& [cls, n] : class_counts) {
    report.class_proportions[cls] = static_cast<double>(n) / entity_total;
  }
  return report;
}

inline nlohmann::json to_json(const StatsReport& r) {
  nlohmann::json j;
  j["setting"] = std::string(to_string(r.setting));
  for (const auto& [split, s] : r.splits) {
    j["splits"][split] = {{"images", s.images},
                          {"mattes", s.mattes},
                          {"texts", s.texts},
                          {"categories", s.categories},
                          {"text_length", round6(s.text_length)},
                          {"attribute_values", s.attribute_values},
                          {"relation_phrases", s.relation_phrases}};
  }
  j["class_proportions"] = nlohmann::json::object();
  for (const auto& [k, v] : r.class_proportions) j["class_proportions"][k] = round6(v);
  j["relation_frequency"] = r.relation_frequency;
  j["relation_phrase_frequency"] = r.relation_phrase_frequency;
  j["attribute_frequency"] = r.attribute_frequency;
  j["keyword_frequency"] = r.keyword_frequency;
  return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class Map>
void write_frequency_csv(const std::filesystem::path& path, const char* key_header,
                         const Map& table) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << key_header << ",count\n";
  for (const auto& [k, v] : table) out << csv_field(k) << ',' << v << '\n';
}

}  // namespace detail

/// Writes `<prefix>_splits.csv` and one frequency table per tally.
inline void write_stats_csv(const StatsReport& r, const std::filesystem::path& dir,
                            const std::string& prefix) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (prefix + "_splits.csv"));
    if (!out) throw Error(Errc::io_error, "cannot write stats CSV in '" + dir.string() + "'");
    out << "setting,split,images,mattes,texts,categories,text_length,attribute_values,"
           "relation_phrases\n";
    for (const auto& [split, s] : r.splits) {
      out << to_string(r.setting) << ',' << split << ',' << s.images << ',' << s.mattes << ','
          << s.texts << ',' << s.categories << ',' << round6(s.text_length) << ','
          << s.attribute_values << ',' << s.relation_phrases << '\n';
    }
  }
  {
    std::ofstream out(dir / (prefix + "_class_proportions.csv"));
    out << "class,proportion\n";
    for (const auto& [k, v] : r.class_proportions) out << k << ',' << round6(v) << '\n';
  }
  detail::write_frequency_csv(dir / (prefix + "_relations.csv"), "relation", r.relation_frequency);
  detail::write_frequency_csv(dir / (prefix + "_relation_phrases.csv"), "phrase",
                              r.relation_phrase_frequency);
  detail::write_frequency_csv(dir / (prefix + "_attributes.csv"), "attribute",
                              r.attribute_frequency);
  detail::write_frequency_csv(dir / (prefix + "_keywords.csv"), "keyword", r.keyword_frequency);
}

}  // namespace forge
