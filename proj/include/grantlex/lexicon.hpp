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

// Closed-class word lists, suffix heuristics and concreteness norms for
// Portuguese and English, plus loaders for user-supplied lexicon files.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "grantlex/common.hpp"
#include "grantlex/unicode.hpp"

namespace grantlex {

enum class Tag {
  noun,
  verb,
  adjective,
  adverb,
  preposition,
  pronoun,
  determiner,
  conjunction,
  interjection,
  punctuation,
  number,
  other
};

inline const char* to_string(Tag t) {
  switch (t) {
    case Tag::noun: return "noun";
    case Tag::verb: return "verb";
    case Tag::adjective: return "adjective";
    case Tag::adverb: return "adverb";
    case Tag::preposition: return "preposition";
    case Tag::pronoun: return "pronoun";
    case Tag::determiner: return "determiner";
    case Tag::conjunction: return "conjunction";
    case Tag::interjection: return "interjection";
    case Tag::punctuation: return "punctuation";
    case Tag::number: return "number";
    case Tag::other: return "other";
  }
  return "other";
}

inline std::optional<Tag> parse_tag(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Tag::other); ++i)
    if (s == to_string(static_cast<Tag>(i))) return static_cast<Tag>(i);
  return std::nullopt;
}

constexpr bool is_closed_class(Tag t) {
  return t == Tag::preposition || t == Tag::pronoun || t == Tag::determiner || t == Tag::conjunction;
}

struct SuffixRule {
  std::string suffix;
  Tag tag;
  std::size_t min_stem = 2;  // code points that must precede the suffix
};

struct LexiconSet {
  Language language = Language::pt;
  std::unordered_set<std::string> function_words;
  std::unordered_set<std::string> prepositions;
  std::unordered_set<std::string> logical_operators;
  std::unordered_map<std::string, Tag> pos_lexicon;
  std::vector<SuffixRule> suffix_rules;  // longest suffix first
  std::unordered_map<std::string, double> concreteness;  // 100..700

  static LexiconSet builtin(Language lang);

  // Throws ValidationError when an invariant is broken.
  void validate() const {
    for (const auto& p : prepositions)
      if (!function_words.count(p))
        throw ValidationError("lexicon: preposition '" + p + "' missing from function words");
    if (logical_operators.empty()) throw ValidationError("lexicon: logical operator list is empty");
    auto check_lower = [&](const std::string& w) {
      if (utf8::lower(w, language) != w) throw ValidationError("lexicon: key '" + w + "' is not lowercase");
    };
    for (const auto& w : function_words) check_lower(w);
    for (const auto& w : logical_operators) check_lower(w);
    for (const auto& [w, t] : pos_lexicon) check_lower(w);
    for (const auto& [w, s] : concreteness) {
      check_lower(w);
      if (!(s >= 100.0 && s <= 700.0))
        throw ValidationError("lexicon: concreteness of '" + w + "' outside [100, 700]");
    }
  }

  void add_word(const std::string& word, Tag tag) {
    pos_lexicon[word] = tag;
    if (is_closed_class(tag)) function_words.insert(word);
    if (tag == Tag::preposition) prepositions.insert(word);
  }

  void sort_suffix_rules() {
    std::stable_sort(suffix_rules.begin(), suffix_rules.end(), [](const SuffixRule& a, const SuffixRule& b) {
      return utf8::length(a.suffix) > utf8::length(b.suffix);
    });
  }
};

namespace detail {

struct WordList {
  Tag tag;
  std::initializer_list<const char*> words;
};

inline void fill(LexiconSet& lex, std::initializer_list<WordList> lists) {
  for (const auto& list : lists)
    for (const char* w : list.words) lex.add_word(w, list.tag);
}

inline void fill_suffixes(LexiconSet& lex, Tag tag, std::initializer_list<const char*> suffixes) {
  for (const char* s : suffixes) lex.suffix_rules.push_back({s, tag, 2});
}

inline void fill_concreteness(LexiconSet& lex, std::initializer_list<std::pair<const char*, double>> entries) {
  for (const auto& [w, s] : entries) lex.concreteness[w] = s;
}

inline LexiconSet builtin_pt() {
  LexiconSet lex;
  lex.language = Language::pt;
  fill(lex, {
      {Tag::determiner,
       {"o", "a", "os", "as", "um", "uma", "uns", "umas", "este", "esta", "estes", "estas", "esse", "essa",
        "esses", "essas", "aquele", "aquela", "aqueles", "aquelas", "meu", "minha", "meus", "minhas", "seu",
        "sua", "seus", "suas", "nosso", "nossa", "nossos", "nossas", "todo", "toda", "todos", "todas", "cada",
        "algum", "alguma", "alguns", "algumas", "nenhum", "nenhuma", "outro", "outra", "outros", "outras",
        "vários", "várias", "muitos", "muitas", "poucos", "poucas", "tal", "tais", "qualquer", "quaisquer",
        "mesmo", "mesma", "mesmos", "mesmas", "ambos", "ambas", "demais"}},
      {Tag::preposition,
       {"ante", "após", "até", "com", "contra", "de", "desde", "em", "entre", "para", "perante", "por", "sem",
        "sob", "sobre", "trás", "do", "da", "dos", "das", "no", "na", "nos", "nas", "ao", "aos", "à", "às",
        "pelo", "pela", "pelos", "pelas", "num", "numa", "nuns", "numas", "dum", "duma", "deste", "desta",
        "destes", "destas", "neste", "nesta", "nestes", "nestas", "desse", "dessa", "nesse", "nessa", "naquele",
        "naquela", "daquele", "daquela", "dele", "dela", "deles", "delas", "nele", "nela", "pra", "mediante",
        "durante", "segundo", "via"}},
      {Tag::pronoun,
       {"eu", "tu", "ele", "ela", "nós", "vós", "eles", "elas", "você", "vocês", "me", "te", "lhe", "lhes",
        "vos", "quem", "qual", "quais", "cujo", "cuja", "cujos", "cujas", "onde", "isto", "isso", "aquilo",
        "si", "mim", "ti", "consigo", "conosco", "nada", "tudo", "algo", "alguém", "ninguém"}},
      {Tag::conjunction,
       {"e", "ou", "mas", "porém", "contudo", "todavia", "entretanto", "pois", "porque", "portanto", "que",
        "se", "caso", "quando", "enquanto", "embora", "conforme", "nem", "como", "logo", "conquanto",
        "porquanto"}},
      {Tag::adverb,
       {"não", "sim", "muito", "mais", "menos", "bem", "mal", "já", "ainda", "também", "sempre", "nunca",
        "aqui", "ali", "lá", "hoje", "ontem", "amanhã", "assim", "apenas", "somente", "só", "quase",
        "bastante", "tão", "tanto", "talvez", "depois", "antes", "agora", "então", "além", "ainda", "cerca",
        "pouco", "jamais"}},
      {Tag::verb,
       {"é", "são", "foi", "foram", "ser", "será", "serão", "sendo", "sido", "era", "eram", "seja", "sejam",
        "está", "estão", "estar", "estava", "estavam", "esteve", "tem", "têm", "ter", "tinha", "tinham", "teve",
        "há", "haver", "houve", "pode", "podem", "poder", "poderá", "deve", "devem", "dever", "vai", "vão",
        "ir", "faz", "fazem", "fazer", "dorme", "dormem", "estuda", "estudam", "estudamos", "visa", "visam",
        "propõe", "propomos", "pretende", "pretendem", "pretendemos", "objetiva", "apresenta", "apresentam",
        "permite", "permitem", "mostra", "mostram", "possui", "possuem", "contribui", "envolve", "inclui",
        "constitui", "representa", "representam", "existe", "existem", "parece", "sugere", "indica",
        "colabora", "colaboram", "analisa", "avalia", "investiga", "descreve", "sabe", "afeta", "afetam"}},
      {Tag::adjective,
       {"novo", "nova", "novos", "novas", "grande", "grandes", "pequeno", "pequena", "pequenos", "pequenas",
        "importante", "importantes", "principal", "principais", "diferente", "diferentes", "melhor",
        "melhores", "maior", "maiores", "menor", "menores", "alto", "alta", "altos", "altas", "baixo", "baixa",
        "baixos", "baixas", "bom", "boa", "bons", "boas", "primeiro", "primeira", "último", "última", "forte",
        "fortes", "comum", "comuns", "possível", "possíveis", "atual", "atuais"}},
      {Tag::interjection, {"oh", "ah", "olá", "ufa"}},
  });
  lex.logical_operators = {"e", "ou", "se", "não", "caso"};
  fill_suffixes(lex, Tag::adverb, {"mente"});
  fill_suffixes(lex, Tag::noun,
                {"ções", "ção", "sões", "dades", "dade", "mentos", "mento", "ismos", "ismo", "istas", "ista",
                 "agens", "agem", "ências", "ência", "âncias", "ância", "eza", "ura", "uras", "ites", "ite",
                 "oses", "ose", "ogia", "ogias", "ores", "or"});
  fill_suffixes(lex, Tag::verb,
                {"ando", "endo", "indo", "ariam", "eriam", "aram", "eram", "iram", "avam", "ava", "aremos",
                 "eremos", "iremos", "amos", "emos", "imos", "ará", "erá", "irá", "ar", "er", "ir", "ou"});
  fill_suffixes(lex, Tag::adjective,
                {"osos", "osas", "oso", "osa", "áveis", "ável", "íveis", "ível", "ivos", "ivas", "ivo", "iva",
                 "icos", "icas", "ico", "ica", "ários", "árias", "ário", "ária", "ados", "adas", "ado", "ada",
                 "idos", "idas", "ido", "ida", "entes", "ente", "ais", "al"});
  lex.sort_suffix_rules();
  // Small seed list on the 100-700 psycholinguistic scale; supply full norms
  // through a concreteness file for real runs.
  fill_concreteness(lex, {
      {"carro", 620}, {"cão", 615}, {"cachorro", 615}, {"feijão", 600}, {"sangue", 610}, {"dente", 620},
      {"dentes", 620}, {"célula", 560}, {"células", 560}, {"rato", 610}, {"ratos", 610}, {"camundongo", 605},
      {"camundongos", 605}, {"paciente", 520}, {"pacientes", 520}, {"osso", 620}, {"ossos", 620},
      {"água", 615}, {"hospital", 590}, {"animal", 580}, {"animais", 580}, {"cavalo", 630}, {"cavalos", 630},
      {"gado", 600}, {"leite", 620}, {"tecido", 540}, {"droga", 520}, {"fármaco", 500}, {"doença", 420},
      {"tratamento", 380}, {"estudo", 330}, {"análise", 280}, {"método", 290}, {"teoria", 250}, {"fé", 260},
      {"caos", 290}, {"ideia", 230}, {"qualidade", 250}, {"efeito", 270}, {"risco", 280},
      {"conhecimento", 260}, {"desenvolvimento", 290}, {"gato", 610}, {"casa", 620}, {"rua", 600},
  });
  return lex;
}

inline LexiconSet builtin_en() {
  LexiconSet lex;
  lex.language = Language::en;
  fill(lex, {
      {Tag::determiner,
       {"the", "a", "an", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our", "their",
        "some", "any", "each", "every", "no", "all", "both", "either", "neither", "another", "other", "such",
        "several", "many", "few", "much", "most"}},
      {Tag::preposition,
       {"of", "in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through",
        "during", "before", "after", "above", "below", "to", "from", "up", "down", "over", "under", "within",
        "without", "among", "across", "upon", "via", "per", "toward", "towards", "onto", "throughout",
        "beyond", "despite", "along", "around", "behind"}},
      {Tag::pronoun,
       {"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "who", "whom", "whose",
        "which", "what", "myself", "itself", "themselves", "ourselves", "something", "nothing", "everything"}},
      {Tag::conjunction,
       {"and", "or", "but", "if", "unless", "because", "although", "though", "while", "whereas", "since", "so",
        "nor", "yet", "whether", "than", "as", "when", "once"}},
      {Tag::adverb,
       {"not", "very", "also", "more", "less", "well", "only", "however", "therefore", "thus", "often",
        "never", "always", "here", "there", "now", "then", "already", "still", "even", "too", "just",
        "almost", "rather", "quite", "moreover", "furthermore"}},
      {Tag::verb,
       {"is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "do", "does", "did",
        "can", "could", "will", "would", "shall", "should", "may", "might", "must", "aim", "aims", "propose",
        "proposes", "study", "studies", "evaluate", "investigate", "sleeps", "sleep", "show", "shows",
        "allow", "allows", "include", "includes", "remain", "remains", "seem", "seems", "collaborate"}},
      {Tag::adjective,
       {"new", "large", "small", "important", "different", "main", "high", "low", "good", "better", "best",
        "clinical", "first", "last", "strong", "common", "possible", "current", "major", "novel"}},
      {Tag::interjection, {"oh", "ah", "hello", "wow"}},
  });
  lex.logical_operators = {"and", "or", "if", "not", "unless"};
  fill_suffixes(lex, Tag::adverb, {"ly"});
  fill_suffixes(lex, Tag::noun,
                {"tions", "tion", "sions", "sion", "ments", "ment", "ness", "ities", "ity", "isms", "ism", "ists",
                 "ist", "ance", "ence", "ogy", "itis", "osis", "ship", "hood"});
  fill_suffixes(lex, Tag::verb, {"ing", "ed", "izes", "ized", "ize", "ises", "ised", "ise", "ates", "ate"});
  fill_suffixes(lex, Tag::adjective,
                {"ous", "able", "ible", "ive", "ical", "ic", "al", "ful", "less", "ary"});
  lex.sort_suffix_rules();
  fill_concreteness(lex, {
      {"car", 620}, {"dog", 615}, {"bean", 600}, {"beans", 600}, {"blood", 610}, {"tooth", 620},
      {"teeth", 620}, {"cell", 560}, {"cells", 560}, {"rat", 610}, {"rats", 610}, {"mouse", 605},
      {"mice", 605}, {"patient", 520}, {"patients", 520}, {"bone", 620}, {"bones", 620}, {"water", 615},
      {"hospital", 590}, {"animal", 580}, {"animals", 580}, {"horse", 630}, {"horses", 630}, {"cattle", 600},
      {"milk", 620}, {"tissue", 540}, {"drug", 520}, {"disease", 420}, {"treatment", 380}, {"study", 330},
      {"analysis", 280}, {"method", 290}, {"theory", 250}, {"faith", 260}, {"chaos", 290}, {"idea", 230},
      {"quality", 250}, {"effect", 270}, {"risk", 280}, {"knowledge", 260}, {"development", 290},
      {"cat", 610}, {"house", 620}, {"street", 600},
  });
  return lex;
}

inline std::vector<std::pair<std::string, std::string>> read_tsv_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open lexicon file '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected word<TAB>value");
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

inline std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open lexicon file '" + path.string() + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace detail

inline LexiconSet LexiconSet::builtin(Language lang) {
  return lang == Language::pt ? detail::builtin_pt() : detail::builtin_en();
}

// Optional override files inside `dir`; each one that exists is merged over
// the built-in lexicon for `lang`:
//   pos.tsv                word<TAB>tag
//   concreteness.tsv       word<TAB>score (100..700)
//   function_words.txt     one word per line
//   logical_operators.txt  one word per line (replaces the built-in list)
//   suffixes.tsv           suffix<TAB>tag
inline LexiconSet load_lexicons(const std::filesystem::path& dir, Language lang) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ValidationError("lexicon directory '" + dir.string() + "' not found");
  LexiconSet lex = LexiconSet::builtin(lang);
  auto norm = [&](const std::string& w) { return utf8::lower(utf8::nfc(w), lang); };

  if (fs::exists(dir / "pos.tsv")) {
    for (const auto& [w, t] : detail::read_tsv_pairs(dir / "pos.tsv")) {
      const auto tag = parse_tag(t);
      if (!tag) throw ValidationError("pos.tsv: unknown tag '" + t + "'");
      lex.add_word(norm(w), *tag);
    }
  }
  if (fs::exists(dir / "concreteness.tsv")) {
    for (const auto& [w, s] : detail::read_tsv_pairs(dir / "concreteness.tsv")) {
      double score = 0;
      try {
        score = std::stod(s);
      } catch (const std::exception&) {
        throw ValidationError("concreteness.tsv: bad score '" + s + "' for '" + w + "'");
      }
      lex.concreteness[norm(w)] = score;
    }
  }
  if (fs::exists(dir / "function_words.txt"))
    for (const auto& w : detail::read_word_list(dir / "function_words.txt")) lex.function_words.insert(norm(w));
  if (fs::exists(dir / "logical_operators.txt")) {
    lex.logical_operators.clear();
    for (const auto& w : detail::read_word_list(dir / "logical_operators.txt"))
      lex.logical_operators.insert(norm(w));
  }
  if (fs::exists(dir / "suffixes.tsv")) {
    for (const auto& [s, t] : detail::read_tsv_pairs(dir / "suffixes.tsv")) {
      const auto tag = parse_tag(t);
      if (!tag) throw ValidationError("suffixes.tsv: unknown tag '" + t + "'");
      lex.suffix_rules.push_back({norm(s), *tag, 2});
    }
    lex.sort_suffix_rules();
  }
  lex.validate();
  return lex;
}

}  // namespace grantlex
