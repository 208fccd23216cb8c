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

// Top-X unigram vocabularies and frequency / tf-idf sparse vectors.
//
// The tf-idf weight is (f / n_d) * (log N / log N_w). Because the idf part
// is a ratio of logarithms, the base of the logarithm does not matter.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "grantlex/common.hpp"
#include "grantlex/corpus.hpp"
#include "grantlex/text.hpp"

namespace grantlex {

inline constexpr std::size_t kTopXAbstract1 = 1100;
inline constexpr std::size_t kTopXAbstract2 = 7196;

enum class FieldSelector { title, subject, title_plus_subject, abstract };

inline const char* to_string(FieldSelector f) {
  switch (f) {
    case FieldSelector::title: return "title";
    case FieldSelector::subject: return "subject";
    case FieldSelector::title_plus_subject: return "title+subject";
    case FieldSelector::abstract: return "abstract";
  }
  return "abstract";
}

inline FieldSelector parse_field_selector(const std::string& s) {
  if (s == "title") return FieldSelector::title;
  if (s == "subject") return FieldSelector::subject;
  if (s == "title+subject" || s == "title_plus_subject") return FieldSelector::title_plus_subject;
  if (s == "abstract") return FieldSelector::abstract;
  throw ValidationError("unknown field selector '" + s + "'");
}

// Text of the selected field, or nullopt when the record lacks it in `lang`
// (English title/abstract are optional). Subject keywords are shared by both
// languages.
inline std::optional<std::string> field_text(const GrantRecord& r, FieldSelector f, Language lang) {
  auto join_subject = [&] {
    std::string out;
    for (const auto& kw : r.subject) {
      if (!out.empty()) out += ' ';
      out += kw;
    }
    return out;
  };
  const std::optional<std::string> title = lang == Language::pt ? std::optional(r.title_pt) : r.title_en;
  switch (f) {
    case FieldSelector::title:
      return title;
    case FieldSelector::subject:
      if (r.subject.empty()) return std::nullopt;
      return join_subject();
    case FieldSelector::title_plus_subject:
      if (!title) return std::nullopt;
      return *title + " " + join_subject();
    case FieldSelector::abstract:
      return lang == Language::pt ? std::optional(r.abstract_pt) : r.abstract_en;
  }
  return std::nullopt;
}

// Lowercased word tokens of `text`; numbers and punctuation are dropped.
inline std::vector<std::string> word_tokens(std::string_view text, Language lang) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text, 0, lang))
    if (t.kind == TokenKind::word) out.push_back(std::move(t.normalized));
  return out;
}

struct Vocabulary {
  std::vector<std::string> words;  // index -> word, ordered by corpus frequency
  std::vector<std::size_t> doc_freq;  // index -> N_w
  std::unordered_map<std::string, std::size_t> index;
  std::size_t corpus_size = 0;  // N
  std::size_t top_x = 0;

  std::size_t size() const { return words.size(); }

  std::optional<std::size_t> find(const std::string& w) const {
    auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Vocabulary& o) const {
    return words == o.words && doc_freq == o.doc_freq && corpus_size == o.corpus_size && top_x == o.top_x;
  }
};

// The `top_x` most frequent words over all documents; equal frequencies are
// ordered lexicographically so the cutoff is deterministic.
inline Vocabulary fit_vocabulary(std::span<const std::vector<std::string>> documents, std::size_t top_x) {
  if (documents.empty()) throw ValidationError("cannot fit a vocabulary on an empty corpus");
  if (top_x < 1) throw ValidationError("top_x must be at least 1");
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // word -> (freq, df)
  for (const auto& doc : documents) {
    std::unordered_map<std::string, bool> seen;
    for (const auto& w : doc) {
      auto& s = stats[w];
      ++s.first;
      if (!seen[w]) {
        seen[w] = true;
        ++s.second;
      }
    }
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(stats.begin(), stats.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.first < b.first;
  });
  if (ranked.size() > top_x) ranked.resize(top_x);

  Vocabulary v;
  v.corpus_size = documents.size();
  v.top_x = top_x;
  for (auto& [w, s] : ranked) {
    v.index.emplace(w, v.words.size());
    v.words.push_back(w);
    v.doc_freq.push_back(s.second);
  }
  return v;
}

inline Vocabulary fit_vocabulary(std::span<const GrantRecord> records, FieldSelector field, std::size_t top_x,
                                 Language lang) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(records.size());
  for (const auto& r : records) {
    const auto text = field_text(r, field, lang);
    if (!text)
      throw ValidationError(std::string("record ") + r.grant_id + " has no " + to_string(field) + " field in " +
                            to_string(lang));
    docs.push_back(word_tokens(*text, lang));
  }
  return fit_vocabulary(docs, top_x);
}

enum class IdfForm {
  printed,      // log N / log N_w, with log 2 substituted when N_w = 1
  conventional  // log (N / N_w)
};

class OutOfVocabulary : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double tfidf_weight(std::size_t f, std::size_t n_d, std::size_t N, std::size_t N_w,
                           IdfForm form = IdfForm::printed) {
  if (N_w == 0) throw OutOfVocabulary("word unseen at fit time (N_w = 0)");
  if (n_d < 1 || N < 1 || N_w > N) throw std::invalid_argument("tfidf_weight: need n_d >= 1 and 1 <= N_w <= N");
  if (f == 0) return 0.0;
  const double tf = static_cast<double>(f) / static_cast<double>(n_d);
  if (form == IdfForm::conventional) return tf * std::log(static_cast<double>(N) / static_cast<double>(N_w));
  if (N_w == N) return tf;  // log N / log N == 1, also for N = 1
  const double inner = static_cast<double>(N_w == 1 ? 2 : N_w);
  return tf * (std::log(static_cast<double>(N)) / std::log(inner));
}

struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;  // strictly increasing index

  bool empty() const { return entries.empty(); }
  bool operator==(const SparseVector&) const = default;
};

enum class Weighting { raw_frequency, tfidf };

inline SparseVector vectorize(std::span<const std::string> document, const Vocabulary& vocab, Weighting mode,
                              IdfForm form = IdfForm::printed) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& w : document)
    if (auto idx = vocab.find(w)) ++counts[*idx];
  SparseVector v;
  v.entries.reserve(counts.size());
  const std::size_t n_d = document.size();
  for (const auto& [idx, f] : counts) {
    const double w = mode == Weighting::raw_frequency
                         ? static_cast<double>(f)
                         : tfidf_weight(f, n_d, vocab.corpus_size, vocab.doc_freq[idx], form);
    v.entries.emplace_back(static_cast<std::uint32_t>(idx), w);
  }
  return v;
}

// Vocabulary TSV: a "#N=<N>\ttop_x=<top_x>" line, then word\tindex\tdoc_freq.
inline void write_vocabulary(std::ostream& out, const Vocabulary& v) {
  out << "#N=" << v.corpus_size << "\ttop_x=" << v.top_x << '\n';
  for (std::size_t i = 0; i < v.words.size(); ++i) out << v.words[i] << '\t' << i << '\t' << v.doc_freq[i] << '\n';
}

inline Vocabulary read_vocabulary(std::istream& in) {
  Vocabulary v;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#N=", 0) != 0) throw ValidationError("vocabulary: missing header line");
  const auto tab = line.find("\ttop_x=");
  if (tab == std::string::npos) throw ValidationError("vocabulary: header lacks top_x");
  try {
    v.corpus_size = std::stoull(line.substr(3, tab - 3));
    v.top_x = std::stoull(line.substr(tab + 7));
  } catch (const std::exception&) {
    throw ValidationError("vocabulary: bad header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word, idx, df;
    if (!std::getline(row, word, '\t') || !std::getline(row, idx, '\t') || !std::getline(row, df))
      throw ValidationError("vocabulary: bad row '" + line + "'");
    if (std::stoull(idx) != v.words.size()) throw ValidationError("vocabulary: indices must be dense and ordered");
    v.index.emplace(word, v.words.size());
    v.words.push_back(word);
    v.doc_freq.push_back(std::stoull(df));
  }
  return v;
}

}  // namespace grantlex
