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

// Lexical complexity metrics over a tagged document. Degenerate values
// (e.g. a ratio over an empty vocabulary) are std::nullopt, which callers
// impute downstream.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "grantlex/common.hpp"
#include "grantlex/lexicon.hpp"
#include "grantlex/text.hpp"

namespace grantlex {

struct TaggedDocument {
  std::vector<TaggedToken> tokens;
  std::size_t sentence_count = 0;
  std::size_t entity_spans = 0;
  Language language = Language::pt;
};

inline TaggedDocument analyze_document(std::string_view text, const LexiconSet& lex) {
  TaggedDocument doc;
  doc.language = lex.language;
  const auto sentences = split_sentences(text, lex.language);
  doc.sentence_count = sentences.size();
  std::vector<Token> tokens;
  int index = 0;
  for (const auto& s : sentences) {
    auto toks = tokenize(s, index++, lex.language);
    tokens.insert(tokens.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
  }
  doc.tokens = tag_pos(tokens, lex);
  doc.entity_spans = detect_named_entities(doc.tokens);
  return doc;
}

struct ComplexityVector {
  std::size_t sentence_count = 0;
  std::size_t word_count = 0;
  std::size_t vocabulary_size = 0;
  std::size_t adjective_count = 0;
  std::size_t adverb_count = 0;
  std::size_t verb_count = 0;
  std::size_t noun_count = 0;
  double noun_ratio = 0.0;
  double words_per_sentence = 0.0;
  std::size_t logical_operator_count = 0;
  std::optional<double> function_word_diversity;
  std::optional<double> preposition_diversity;
  std::optional<double> punctuation_diversity;
  std::optional<double> noun_sd;
  std::optional<double> brunet_index;
  std::optional<double> mean_noun_phrase;
  std::optional<double> concreteness_sd;
  std::optional<double> ne_ratio;

  // Values in FeatureSchema order.
  std::vector<std::optional<double>> to_row() const {
    auto d = [](std::size_t v) { return std::optional<double>(static_cast<double>(v)); };
    return {d(sentence_count),        d(word_count),         d(vocabulary_size),
            d(adjective_count),       d(adverb_count),       d(verb_count),
            d(noun_count),            noun_ratio,            words_per_sentence,
            d(logical_operator_count), function_word_diversity, preposition_diversity,
            punctuation_diversity,    noun_sd,               brunet_index,
            mean_noun_phrase,         concreteness_sd,       ne_ratio};
  }

  bool operator==(const ComplexityVector&) const = default;
};

enum class ValueKind { count, ratio, real };

struct FeatureInfo {
  std::string_view name;
  std::string_view description;
  ValueKind kind;
};

// Column identity of the complexity feature vector; never reorder.
inline constexpr std::array<FeatureInfo, 18> kComplexitySchema = {{
    {"sentence_count", "number of sentences", ValueKind::count},
    {"word_count", "number of word tokens", ValueKind::count},
    {"vocabulary_size", "number of distinct word types", ValueKind::count},
    {"adjective_count", "adjective tokens", ValueKind::count},
    {"adverb_count", "adverb tokens", ValueKind::count},
    {"verb_count", "verb tokens", ValueKind::count},
    {"noun_count", "noun tokens", ValueKind::count},
    {"noun_ratio", "nouns per word", ValueKind::ratio},
    {"words_per_sentence", "mean sentence length in words", ValueKind::real},
    {"logical_operator_count", "logical operator tokens", ValueKind::count},
    {"function_word_diversity", "function word types / vocabulary size", ValueKind::ratio},
    {"preposition_diversity", "preposition types / vocabulary size", ValueKind::ratio},
    {"punctuation_diversity", "punctuation types / vocabulary size", ValueKind::ratio},
    {"noun_sd", "population SD of nouns per sentence", ValueKind::real},
    {"brunet_index", "v^(n^-0.165)", ValueKind::real},
    {"mean_noun_phrase", "noun phrases per sentence", ValueKind::real},
    {"concreteness_sd", "population SD of concreteness scores", ValueKind::real},
    {"ne_ratio", "named entity spans per word", ValueKind::ratio},
}};

inline std::vector<std::string> complexity_feature_names() {
  std::vector<std::string> out;
  for (const auto& f : kComplexitySchema) out.emplace_back(f.name);
  return out;
}

namespace detail {

inline bool is_word(const TaggedToken& t) { return t.token.kind == TokenKind::word; }

inline std::optional<double> population_sd(std::span<const double> xs) {
  if (xs.empty()) return std::nullopt;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

}  // namespace detail

inline constexpr double kBrunetExponent = -0.165;

// beta = v^(n^-0.165)
inline std::optional<double> brunet_index(std::size_t word_count, std::size_t vocabulary_size) {
  if (word_count == 0) return std::nullopt;
  const double alpha = std::pow(static_cast<double>(word_count), kBrunetExponent);
  return std::pow(static_cast<double>(vocabulary_size), alpha);
}

// Counts over word tokens (numbers and punctuation are not words).
inline ComplexityVector basic_counts(const TaggedDocument& doc) {
  ComplexityVector cv;
  cv.sentence_count = doc.sentence_count;
  std::unordered_set<std::string> types;
  for (const auto& t : doc.tokens) {
    if (!detail::is_word(t)) continue;
    ++cv.word_count;
    types.insert(t.token.normalized);
    switch (t.tag) {
      case Tag::adjective: ++cv.adjective_count; break;
      case Tag::adverb: ++cv.adverb_count; break;
      case Tag::verb: ++cv.verb_count; break;
      case Tag::noun: ++cv.noun_count; break;
      default: break;
    }
  }
  cv.vocabulary_size = types.size();
  if (cv.word_count > 0) cv.noun_ratio = static_cast<double>(cv.noun_count) / static_cast<double>(cv.word_count);
  if (cv.sentence_count > 0)
    cv.words_per_sentence = static_cast<double>(cv.word_count) / static_cast<double>(cv.sentence_count);
  return cv;
}

inline std::size_t logical_operator_count(const TaggedDocument& doc, const LexiconSet& lex) {
  std::size_t n = 0;
  for (const auto& t : doc.tokens)
    if (detail::is_word(t) && lex.logical_operators.count(t.token.normalized)) ++n;
  return n;
}

enum class TypeClass { function_word, preposition, punctuation };

// Distinct types of the selected class over the word vocabulary size.
// Punctuation types can in principle outnumber word types; the ratio is
// capped at 1.
inline std::optional<double> type_diversity(const TaggedDocument& doc, TypeClass cls) {
  std::unordered_set<std::string> vocab, selected;
  for (const auto& t : doc.tokens) {
    if (detail::is_word(t)) vocab.insert(t.token.normalized);
    bool hit = false;
    switch (cls) {
      case TypeClass::function_word: hit = detail::is_word(t) && t.is_function_word; break;
      case TypeClass::preposition: hit = detail::is_word(t) && t.tag == Tag::preposition; break;
      case TypeClass::punctuation: hit = t.token.kind == TokenKind::punctuation; break;
    }
    if (hit) selected.insert(t.token.normalized);
  }
  if (vocab.empty()) return std::nullopt;
  return std::min(1.0, static_cast<double>(selected.size()) / static_cast<double>(vocab.size()));
}

inline std::vector<double> nouns_per_sentence(const TaggedDocument& doc) {
  std::vector<double> counts(doc.sentence_count, 0.0);
  for (const auto& t : doc.tokens)
    if (detail::is_word(t) && t.tag == Tag::noun) counts.at(static_cast<std::size_t>(t.token.sentence_index)) += 1.0;
  return counts;
}

inline std::optional<double> noun_sd(const TaggedDocument& doc) {
  const auto counts = nouns_per_sentence(doc);
  return detail::population_sd(counts);
}

// Chunks matching determiner? adjective* noun+ (and, for Portuguese,
// trailing adjective*) scanned greedily left to right inside each sentence.
inline std::size_t count_noun_phrases(std::span<const TaggedToken> sentence, Language lang) {
  std::size_t chunks = 0;
  std::size_t i = 0;
  const auto tag_at = [&](std::size_t j) { return j < sentence.size() ? sentence[j].tag : Tag::punctuation; };
  while (i < sentence.size()) {
    std::size_t j = i;
    if (tag_at(j) == Tag::determiner) ++j;
    while (tag_at(j) == Tag::adjective) ++j;
    std::size_t nouns = 0;
    while (tag_at(j) == Tag::noun) {
      ++j;
      ++nouns;
    }
    if (nouns == 0) {
      ++i;
      continue;
    }
    if (lang == Language::pt)
      while (tag_at(j) == Tag::adjective) ++j;
    ++chunks;
    i = j;
  }
  return chunks;
}

inline std::optional<double> mean_noun_phrase(const TaggedDocument& doc) {
  if (doc.sentence_count == 0) return std::nullopt;
  std::size_t total = 0;
  std::size_t begin = 0;
  const auto& toks = doc.tokens;
  while (begin < toks.size()) {
    std::size_t end = begin;
    while (end < toks.size() && toks[end].token.sentence_index == toks[begin].token.sentence_index) ++end;
    total += count_noun_phrases(std::span(toks).subspan(begin, end - begin), doc.language);
    begin = end;
  }
  return static_cast<double>(total) / static_cast<double>(doc.sentence_count);
}

// Per-token scores; tokens missing from the norms are skipped, and fewer
// than two scored tokens give no value.
inline std::optional<double> concreteness_sd(const TaggedDocument& doc, const LexiconSet& lex) {
  std::vector<double> scores;
  for (const auto& t : doc.tokens) {
    if (!detail::is_word(t)) continue;
    if (auto it = lex.concreteness.find(t.token.normalized); it != lex.concreteness.end())
      scores.push_back(it->second);
  }
  if (scores.size() < 2) return std::nullopt;
  return detail::population_sd(scores);
}

inline std::optional<double> ne_ratio(const TaggedDocument& doc) {
  std::size_t words = 0;
  for (const auto& t : doc.tokens)
    if (detail::is_word(t)) ++words;
  if (words == 0) return std::nullopt;
  return static_cast<double>(doc.entity_spans) / static_cast<double>(words);
}

inline ComplexityVector complexity_of(const TaggedDocument& doc, const LexiconSet& lex) {
  ComplexityVector cv = basic_counts(doc);
  cv.logical_operator_count = logical_operator_count(doc, lex);
  cv.function_word_diversity = type_diversity(doc, TypeClass::function_word);
  cv.preposition_diversity = type_diversity(doc, TypeClass::preposition);
  cv.punctuation_diversity = type_diversity(doc, TypeClass::punctuation);
  cv.noun_sd = noun_sd(doc);
  cv.brunet_index = brunet_index(cv.word_count, cv.vocabulary_size);
  cv.mean_noun_phrase = mean_noun_phrase(doc);
  cv.concreteness_sd = concreteness_sd(doc, lex);
  cv.ne_ratio = ne_ratio(doc);
  return cv;
}

// Full pipeline from raw text. `record` only labels the error message.
inline ComplexityVector extract_complexity_vector(std::string_view text, const LexiconSet& lex,
                                                  std::string_view record = {}) {
  const auto doc = analyze_document(text, lex);
  if (doc.tokens.empty())
    throw ValidationError("empty text" + (record.empty() ? std::string() : " in record " + std::string(record)));
  return complexity_of(doc, lex);
}

}  // namespace grantlex
