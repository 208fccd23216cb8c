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

// Sentence splitting, tokenization, lexicon-driven POS tagging and a
// capitalization heuristic for named entities.

#pragma once

#include <array>
#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grantlex/common.hpp"
#include "grantlex/lexicon.hpp"
#include "grantlex/unicode.hpp"

namespace grantlex {

enum class TokenKind { word, punctuation, number };

struct Token {
  std::string surface;
  std::string normalized;
  TokenKind kind = TokenKind::word;
  int sentence_index = 0;
  int position_in_sentence = 0;
};

struct TaggedToken {
  Token token;
  Tag tag = Tag::other;
  bool is_function_word = false;
  bool is_named_entity = false;
};

// Lowercased forms (with their trailing period) that never end a sentence.
// "al." only counts when preceded by "et".
inline constexpr std::array<std::string_view, 40> kAbbreviations = {
    "dr.",   "dra.",  "drs.",  "dras.", "sr.",    "sra.",    "srs.",  "prof.", "profa.", "profs.",
    "mr.",   "mrs.",  "ms.",   "st.",   "e.g.",   "i.e.",    "cf.",   "vs.",   "fig.",   "figs.",
    "eq.",   "ref.",  "refs.", "vol.",  "no.",    "nº.",     "pp.",   "p.",    "ex.",    "aprox.",
    "approx.", "ca.", "sp.",   "spp.",  "var.",   "subsp.",  "lab.",  "dept.", "depto.", "al.",
};

namespace detail {

inline bool is_terminator(UChar32 c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

inline bool is_closer(UChar32 c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x201D || c == 0x2019 || c == 0xBB;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e) {
    std::size_t i = b;
    if (!utf8::is_space(utf8::next(s, i))) break;
    b = i;
  }
  while (e > b) {
    // Step back over one code point.
    std::size_t start = e - 1;
    while (start > b && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    std::size_t i = start;
    if (!utf8::is_space(utf8::next(s, i))) break;
    e = start;
  }
  return s.substr(b, e - b);
}

// The whitespace-delimited chunk ending at byte `end` (exclusive).
inline std::string_view chunk_before(std::string_view text, std::size_t end) {
  std::size_t b = end;
  while (b > 0 && !std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
  return text.substr(b, end - b);
}

inline bool is_abbreviation(std::string_view text, std::size_t period_end, Language lang) {
  const std::string_view chunk = chunk_before(text, period_end);
  if (chunk.empty()) return false;
  std::string low = utf8::lower(chunk, lang);
  // Strip opening brackets/quotes glued to the word.
  while (!low.empty() && (low.front() == '(' || low.front() == '[' || low.front() == '"')) low.erase(0, 1);
  for (auto abbr : kAbbreviations) {
    if (low != abbr) continue;
    if (abbr != "al.") return true;
    std::size_t prev_end = period_end - chunk.size();
    while (prev_end > 0 && std::isspace(static_cast<unsigned char>(text[prev_end - 1]))) --prev_end;
    return utf8::lower(chunk_before(text, prev_end), lang) == "et";
  }
  return false;
}

}  // namespace detail

// Rule-based splitter: a run of terminators followed by whitespace or end of
// text closes a sentence, unless the period belongs to a listed abbreviation.
inline std::vector<std::string> split_sentences(std::string_view raw, Language lang = Language::pt) {
  const std::string text = utf8::nfc(raw);
  const std::string_view s(text);
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const UChar32 c = utf8::next(s, i);
    if (!detail::is_terminator(c)) continue;
    // Absorb further terminators and closing quotes/brackets.
    std::size_t end = i;
    while (end < s.size()) {
      std::size_t j = end;
      const UChar32 d = utf8::next(s, j);
      if (!detail::is_terminator(d) && !detail::is_closer(d)) break;
      end = j;
    }
    const UChar32 after = utf8::peek(s, end);
    if (after != -1 && !utf8::is_space(after)) {
      i = end;
      continue;
    }
    if (c == '.' && end == i && detail::is_abbreviation(s, i, lang)) continue;
    const auto sentence = detail::trim(s.substr(start, end - start));
    if (!sentence.empty()) out.emplace_back(sentence);
    start = end;
    i = end;
  }
  const auto tail = detail::trim(s.substr(start));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

// Letter runs (joined across single hyphens between letters) are words,
// digit runs (with inner '.' or ',' between digits) are numbers, any other
// non-space code point is a punctuation token.
inline std::vector<Token> tokenize(std::string_view raw, int sentence_index = 0, Language lang = Language::pt) {
  const std::string text = utf8::nfc(raw);
  const std::string_view s(text);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t begin = i;
    const UChar32 c = utf8::next(s, i);
    if (utf8::is_space(c)) continue;
    Token tok;
    tok.sentence_index = sentence_index;
    tok.position_in_sentence = static_cast<int>(out.size());
    if (utf8::is_letter(c)) {
      while (i < s.size()) {
        std::size_t j = i;
        const UChar32 d = utf8::next(s, j);
        if (utf8::is_letter(d)) {
          i = j;
        } else if (utf8::is_hyphen(d) && utf8::is_letter(utf8::peek(s, j))) {
          i = j;
        } else {
          break;
        }
      }
      tok.kind = TokenKind::word;
      tok.surface = std::string(s.substr(begin, i - begin));
      tok.normalized = utf8::lower(tok.surface, lang);
    } else if (utf8::is_digit(c)) {
      while (i < s.size()) {
        std::size_t j = i;
        const UChar32 d = utf8::next(s, j);
        if (utf8::is_digit(d)) {
          i = j;
        } else if ((d == '.' || d == ',') && utf8::is_digit(utf8::peek(s, j))) {
          i = j;
        } else {
          break;
        }
      }
      tok.kind = TokenKind::number;
      tok.surface = std::string(s.substr(begin, i - begin));
      tok.normalized = tok.surface;
    } else {
      tok.kind = TokenKind::punctuation;
      tok.surface = std::string(s.substr(begin, i - begin));
      tok.normalized = tok.surface;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

// Sentence split followed by per-sentence tokenization.
inline std::vector<Token> tokenize_document(std::string_view text, Language lang = Language::pt) {
  std::vector<Token> out;
  int index = 0;
  for (const auto& sentence : split_sentences(text, lang)) {
    auto toks = tokenize(sentence, index++, lang);
    out.insert(out.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
  }
  return out;
}

inline Tag tag_word(const std::string& normalized, const LexiconSet& lex) {
  if (auto it = lex.pos_lexicon.find(normalized); it != lex.pos_lexicon.end()) return it->second;
  const std::size_t len = utf8::length(normalized);
  for (const auto& rule : lex.suffix_rules) {
    if (!utf8::ends_with(normalized, rule.suffix)) continue;
    if (len >= utf8::length(rule.suffix) + rule.min_stem) return rule.tag;
  }
  return Tag::noun;
}

inline std::vector<TaggedToken> tag_pos(std::span<const Token> tokens, const LexiconSet& lex) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    TaggedToken t;
    t.token = tok;
    switch (tok.kind) {
      case TokenKind::punctuation: t.tag = Tag::punctuation; break;
      case TokenKind::number: t.tag = Tag::number; break;
      case TokenKind::word: t.tag = tag_word(tok.normalized, lex); break;
    }
    t.is_function_word = tok.kind == TokenKind::word &&
                         (is_closed_class(t.tag) || lex.function_words.count(tok.normalized) > 0);
    out.push_back(std::move(t));
  }
  return out;
}

namespace detail {

inline bool is_acronym(std::string_view surface) {
  std::size_t letters = 0;
  for (std::size_t i = 0; i < surface.size();) {
    const UChar32 c = utf8::next(surface, i);
    if (utf8::is_hyphen(c)) continue;
    if (!utf8::is_upper(c)) return false;
    ++letters;
  }
  return letters >= 2;
}

inline bool is_capitalized(std::string_view surface) {
  std::size_t i = 0;
  return !surface.empty() && utf8::is_upper(utf8::next(surface, i));
}

}  // namespace detail

// Marks a word iff it is capitalized and not the first word of its sentence,
// or it is an all-caps acronym of two or more letters. Returns the number of
// entity spans (maximal runs of adjacent marked tokens within a sentence).
inline std::size_t detect_named_entities(std::vector<TaggedToken>& tagged) {
  std::size_t spans = 0;
  int current_sentence = -1;
  bool seen_word = false;
  bool prev_marked = false;
  for (auto& t : tagged) {
    if (t.token.sentence_index != current_sentence) {
      current_sentence = t.token.sentence_index;
      seen_word = false;
      prev_marked = false;
    }
    t.is_named_entity = false;
    if (t.token.kind == TokenKind::word) {
      const bool initial = !seen_word;
      seen_word = true;
      const auto& surf = t.token.surface;
      t.is_named_entity = detail::is_acronym(surf) || (!initial && detail::is_capitalized(surf));
    }
    if (t.is_named_entity && !prev_marked) ++spans;
    prev_marked = t.is_named_entity;
  }
  return spans;
}

}  // namespace grantlex
