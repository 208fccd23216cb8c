// Copyright 2026 The grantlex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Per-record feature extraction and the data-dependent transforms
// (vocabulary, median imputation, z-scoring) fitted on training rows.

#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "grantlex/complexity.hpp"
#include "grantlex/corpus.hpp"
#include "grantlex/ml/dataset.hpp"
#include "grantlex/topical.hpp"

namespace grantlex {

enum class FeatureFamily { complexity, tfidf };
enum class ComplexityText { abstract, title_plus_abstract };
enum class VocabScope { per_fold, global };

inline std::string to_string(FeatureFamily f) { return f == FeatureFamily::complexity ? "complexity" : "tfidf"; }

inline FeatureFamily parse_feature_family(const std::string& s) {
  if (s == "complexity") return FeatureFamily::complexity;
  if (s == "tfidf") return FeatureFamily::tfidf;
  throw ValidationError("unknown feature family '" + s + "' (expected complexity or tfidf)");
}

struct FeatureConfig {
  FeatureFamily family = FeatureFamily::complexity;
  Language language = Language::pt;
  FieldSelector field = FieldSelector::abstract;  // tf-idf only
  std::size_t top_x = kTopXAbstract1;
  Weighting weighting = Weighting::tfidf;
  IdfForm idf = IdfForm::printed;
  VocabScope vocab_scope = VocabScope::per_fold;
  ComplexityText complexity_text = ComplexityText::abstract;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["features"] = to_string(family);
    j["lang"] = to_string(language);
    if (family == FeatureFamily::tfidf) {
      j["fields"] = to_string(field);
      j["top_x"] = top_x;
      j["weighting"] = weighting == Weighting::tfidf ? "tfidf" : "raw";
      j["idf"] = idf == IdfForm::printed ? "printed" : "conventional";
      j["vocab_scope"] = vocab_scope == VocabScope::per_fold ? "fold" : "global";
    } else {
      j["complexity_text"] = complexity_text == ComplexityText::abstract ? "abstract" : "title+abstract";
    }
    return j;
  }
};

// Features of every eligible record, computed once. Extraction depends only
// on a record's own text, so nothing here sees other records or labels.
struct FeatureTable {
  FeatureFamily family = FeatureFamily::complexity;
  std::vector<std::size_t> source;  // row -> index in the input record list
  std::vector<std::string> grant_ids;
  std::vector<Label> labels;
  std::vector<std::vector<std::optional<double>>> complexity;
  std::vector<std::vector<std::string>> tokens;
  std::size_t excluded = 0;  // records lacking the selected text

  std::size_t size() const { return labels.size(); }
};

inline std::optional<std::string> complexity_text(const GrantRecord& r, const FeatureConfig& cfg) {
  auto abstract = field_text(r, FieldSelector::abstract, cfg.language);
  if (!abstract || abstract->empty()) return std::nullopt;
  if (cfg.complexity_text == ComplexityText::abstract) return abstract;
  auto title = field_text(r, FieldSelector::title, cfg.language);
  if (!title || title->empty()) return abstract;
  std::string t = *title;
  const char last = t.back();
  if (last != '.' && last != '!' && last != '?') t += '.';
  return t + " " + *abstract;
}

inline FeatureTable build_feature_table(std::span<const GrantRecord> records, const FeatureConfig& cfg,
                                        const LexiconSet& lex) {
  if (lex.language != cfg.language)
    throw ValidationError(std::string("lexicon language ") + to_string(lex.language) + " does not match --lang " +
                          to_string(cfg.language));
  FeatureTable t;
  t.family = cfg.family;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto text = cfg.family == FeatureFamily::complexity ? complexity_text(r, cfg)
                                                              : field_text(r, cfg.field, cfg.language);
    if (!text || text->empty()) {
      ++t.excluded;
      continue;
    }
    if (cfg.family == FeatureFamily::complexity) {
      const auto doc = analyze_document(*text, lex);
      if (doc.tokens.empty()) {
        ++t.excluded;
        continue;
      }
      t.complexity.push_back(complexity_of(doc, lex).to_row());
    } else {
      t.tokens.push_back(word_tokens(*text, cfg.language));
    }
    t.source.push_back(i);
    t.grant_ids.push_back(r.grant_id);
    t.labels.push_back(derive_label(r.publication_count));
  }
  return t;
}

// Transforms fitted on the training rows of one fold.
struct FoldTransform {
  std::optional<Vocabulary> vocabulary;
  std::optional<ml::MedianImputer> imputer;
  std::optional<ml::Standardizer> standardizer;
  Weighting weighting = Weighting::tfidf;
  IdfForm idf = IdfForm::printed;

  std::size_t dims(const FeatureTable& t) const {
    if (t.family == FeatureFamily::complexity) return kComplexitySchema.size();
    return vocabulary->size();
  }

  ml::Matrix raw_matrix(const FeatureTable& t, std::span<const std::size_t> rows) const {
    ml::Matrix x(rows.size(), dims(t));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto out = x.row(i);
      if (t.family == FeatureFamily::complexity) {
        const auto v = imputer->apply(t.complexity[rows[i]]);
        std::copy(v.begin(), v.end(), out.begin());
      } else {
        for (const auto& [idx, w] : vectorize(t.tokens[rows[i]], *vocabulary, weighting, idf).entries) out[idx] = w;
      }
    }
    return x;
  }

  ml::Matrix matrix(const FeatureTable& t, std::span<const std::size_t> rows) const {
    auto x = raw_matrix(t, rows);
    if (standardizer) standardizer->apply(x);
    return x;
  }

  bool operator==(const FoldTransform&) const = default;
};

// `train_rows` index the table. `global_vocabulary`, when set, replaces the
// per-fold vocabulary fit.
inline FoldTransform fit_fold_transform(const FeatureTable& t, std::span<const std::size_t> train_rows,
                                        const FeatureConfig& cfg, bool standardize,
                                        const Vocabulary* global_vocabulary = nullptr) {
  if (train_rows.empty()) throw ValidationError("cannot fit transforms on an empty training split");
  FoldTransform ft;
  ft.weighting = cfg.weighting;
  ft.idf = cfg.idf;
  if (t.family == FeatureFamily::complexity) {
    std::vector<std::vector<std::optional<double>>> rows;
    rows.reserve(train_rows.size());
    for (auto r : train_rows) rows.push_back(t.complexity[r]);
    ft.imputer = ml::MedianImputer::fit(rows);
  } else if (global_vocabulary) {
    ft.vocabulary = *global_vocabulary;
  } else {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train_rows.size());
    for (auto r : train_rows) docs.push_back(t.tokens[r]);
    ft.vocabulary = fit_vocabulary(docs, cfg.top_x);
  }
  if (standardize) ft.standardizer = ml::Standardizer::fit(ft.raw_matrix(t, train_rows));
  return ft;
}

inline Vocabulary fit_global_vocabulary(const FeatureTable& t, std::size_t top_x) {
  return fit_vocabulary(t.tokens, top_x);
}

// Complexity matrix as CSV: grant_id, label, then one column per feature;
// missing values are empty cells.
inline void write_complexity_csv(std::ostream& out, const FeatureTable& t) {
  out << "grant_id,label";
  for (const auto& f : kComplexitySchema) out << ',' << f.name;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t.grant_ids[i] << ',' << ml::as_int(t.labels[i]);
    for (const auto& v : t.complexity[i]) {
      out << ',';
      if (v) {
        std::snprintf(buf, sizeof buf, "%.10g", *v);
        out << buf;
      }
    }
    out << '\n';
  }
}

// Sparse tf-idf rows as CSV: grant_id, label, index:weight pairs separated by
// spaces.
inline void write_tfidf_csv(std::ostream& out, const FeatureTable& t, const Vocabulary& v, Weighting w, IdfForm form) {
  out << "grant_id,label,entries\n";
  char buf[64];
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t.grant_ids[i] << ',' << ml::as_int(t.labels[i]) << ',';
    bool first = true;
    for (const auto& [idx, weight] : vectorize(t.tokens[i], v, w, form).entries) {
      std::snprintf(buf, sizeof buf, "%u:%.10g", idx, weight);
      out << (first ? "" : " ") << buf;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace grantlex
