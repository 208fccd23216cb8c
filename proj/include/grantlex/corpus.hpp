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

// Grant records, productivity labels, and the resampling protocol:
// majority-class undersampling repeated under derived seeds, followed by
// stratified k-fold assignment.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "grantlex/common.hpp"
#include "json.hpp"

namespace grantlex {

enum class Area { MED, DENT, VET, OTHER };

inline const char* to_string(Area a) {
  switch (a) {
    case Area::MED: return "MED";
    case Area::DENT: return "DENT";
    case Area::VET: return "VET";
    case Area::OTHER: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<Area> parse_area(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "MED") return Area::MED;
  if (up == "DENT") return Area::DENT;
  if (up == "VET") return Area::VET;
  if (up == "OTHER") return Area::OTHER;
  return std::nullopt;
}

struct GrantRecord {
  std::string grant_id;  // "aaaa/nnnnn-d"
  std::string title_pt;
  std::string abstract_pt;
  std::optional<std::string> title_en;
  std::optional<std::string> abstract_en;
  std::vector<std::string> subject;
  Area area = Area::OTHER;
  int year = 0;
  std::int64_t publication_count = 0;

  bool operator==(const GrantRecord&) const = default;
};

// digits "/" digits "-" digit
inline bool valid_grant_id(std::string_view id) {
  std::size_t i = 0;
  auto digits = [&] {
    const std::size_t start = i;
    while (i < id.size() && id[i] >= '0' && id[i] <= '9') ++i;
    return i - start;
  };
  if (digits() == 0 || i >= id.size() || id[i] != '/') return false;
  ++i;
  if (digits() == 0 || i >= id.size() || id[i] != '-') return false;
  ++i;
  return digits() == 1 && i == id.size();
}

enum class Label { ZeroPublications = 0, Productive = 1 };

inline const char* to_string(Label l) {
  return l == Label::Productive ? "Productive" : "ZeroPublications";
}

constexpr Label derive_label(std::int64_t publication_count) {
  return publication_count >= 1 ? Label::Productive : Label::ZeroPublications;
}

inline std::vector<Label> derive_labels(std::span<const GrantRecord> records) {
  std::vector<Label> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(derive_label(r.publication_count));
  return out;
}

// ---------------------------------------------------------------------------
// Loading

enum class CorpusFormat { csv, jsonl };

inline CorpusFormat parse_format(const std::string& s) {
  if (s == "csv") return CorpusFormat::csv;
  if (s == "jsonl") return CorpusFormat::jsonl;
  throw ValidationError("unknown corpus format '" + s + "' (expected csv or jsonl)");
}

struct Rejection {
  std::size_t row = 0;  // 1-based; the CSV header is row 1, JSONL lines count from 1
  std::string grant_id;
  std::string field;
  std::string reason;
};

struct LoadReport {
  std::vector<GrantRecord> records;
  std::vector<Rejection> rejections;
  std::size_t empty_abstract_count = 0;
};

inline const std::vector<std::string>& required_columns() {
  static const std::vector<std::string> cols = {
      "grant_id", "title_pt", "abstract_pt", "area", "year", "publication_count"};
  return cols;
}

namespace detail {

struct MalformedField {
  std::string field;
  std::string reason;
};

// RFC 4180 record reader. Quoted fields may contain commas, doubled quotes
// and line breaks. Returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ValidationError("unterminated quoted field at end of file");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

inline std::vector<std::string> split_subject(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view part = s.substr(start, end - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (!part.empty()) out.emplace_back(part);
    start = end + 1;
  }
  return out;
}

// Shared validation of typed values. Throws MalformedField.
inline void validate_record(const GrantRecord& r) {
  if (!valid_grant_id(r.grant_id))
    throw MalformedField{"grant_id", "'" + r.grant_id + "' is not of the form digits/digits-digit"};
  if (r.publication_count < 0)
    throw MalformedField{"publication_count", "must be a non-negative integer"};
}

inline GrantRecord record_from_csv(const std::vector<std::string>& row,
                                   const std::unordered_map<std::string, std::size_t>& col) {
  auto get = [&](const char* name) -> std::optional<std::string> {
    auto it = col.find(name);
    if (it == col.end() || it->second >= row.size()) return std::nullopt;
    return row[it->second];
  };
  GrantRecord r;
  r.grant_id = get("grant_id").value_or("");
  r.title_pt = get("title_pt").value_or("");
  r.abstract_pt = get("abstract_pt").value_or("");
  if (auto v = get("title_en"); v && !v->empty()) r.title_en = *v;
  if (auto v = get("abstract_en"); v && !v->empty()) r.abstract_en = *v;
  if (auto v = get("subject")) r.subject = split_subject(*v);
  const auto area = parse_area(get("area").value_or(""));
  if (!area) throw MalformedField{"area", "expected one of MED, DENT, VET, OTHER"};
  r.area = *area;
  const auto year = parse_int<int>(get("year").value_or(""));
  if (!year) throw MalformedField{"year", "not an integer"};
  r.year = *year;
  const auto pubs = parse_int<std::int64_t>(get("publication_count").value_or(""));
  if (!pubs) throw MalformedField{"publication_count", "must be a non-negative integer"};
  r.publication_count = *pubs;
  validate_record(r);
  return r;
}

inline GrantRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedField{"<line>", "not a JSON object"};
  for (const auto& key : required_columns())
    if (!j.contains(key) || j.at(key).is_null()) throw MalformedField{key, "missing"};
  auto str = [&](const char* key) -> std::string {
    const auto& v = j.at(key);
    if (!v.is_string()) throw MalformedField{key, "expected a string"};
    return v.get<std::string>();
  };
  auto opt_str = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string()) throw MalformedField{key, "expected a string"};
    auto s = j.at(key).get<std::string>();
    if (s.empty()) return std::nullopt;
    return s;
  };
  GrantRecord r;
  r.grant_id = str("grant_id");
  r.title_pt = str("title_pt");
  r.abstract_pt = str("abstract_pt");
  r.title_en = opt_str("title_en");
  r.abstract_en = opt_str("abstract_en");
  if (j.contains("subject") && !j.at("subject").is_null()) {
    const auto& s = j.at("subject");
    if (s.is_array()) {
      for (const auto& kw : s) {
        if (!kw.is_string()) throw MalformedField{"subject", "array items must be strings"};
        r.subject.push_back(kw.get<std::string>());
      }
    } else if (s.is_string()) {
      r.subject = split_subject(s.get<std::string>());
    } else {
      throw MalformedField{"subject", "expected an array of strings"};
    }
  }
  const auto area = parse_area(str("area"));
  if (!area) throw MalformedField{"area", "expected one of MED, DENT, VET, OTHER"};
  r.area = *area;
  const auto& year = j.at("year");
  if (!year.is_number_integer()) throw MalformedField{"year", "not an integer"};
  r.year = year.get<int>();
  const auto& pubs = j.at("publication_count");
  if (!pubs.is_number_integer()) throw MalformedField{"publication_count", "must be a non-negative integer"};
  r.publication_count = pubs.get<std::int64_t>();
  validate_record(r);
  return r;
}

inline bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace detail

// Parses a corpus stream. With `strict`, the first malformed row throws a
// ValidationError naming the row and field; otherwise malformed rows are
// collected in `rejections`. Empty Portuguese abstracts are always rejected
// and counted. Missing required columns and duplicate grant ids reject the
// whole input in both modes.
inline LoadReport read_corpus(std::istream& in, CorpusFormat format, bool strict = true) {
  LoadReport report;
  std::unordered_set<std::string> seen;

  auto admit = [&](GrantRecord r, std::size_t row) {
    if (!seen.insert(r.grant_id).second)
      throw ValidationError("duplicate grant_id '" + r.grant_id + "' at row " + std::to_string(row));
    if (detail::blank(r.abstract_pt)) {
      ++report.empty_abstract_count;
      report.rejections.push_back({row, r.grant_id, "abstract_pt", "empty abstract"});
      return;
    }
    report.records.push_back(std::move(r));
  };
  auto reject = [&](std::size_t row, std::string id, detail::MalformedField m) {
    if (strict)
      throw ValidationError("malformed row " + std::to_string(row) + ": field '" + m.field + "' " + m.reason);
    report.rejections.push_back({row, std::move(id), std::move(m.field), std::move(m.reason)});
  };

  if (format == CorpusFormat::csv) {
    std::vector<std::string> fields;
    std::size_t row = 0;
    std::unordered_map<std::string, std::size_t> col;
    // Leading '#' lines are comments (config echo written by our own tools).
    while (true) {
      if (!detail::read_csv_record(in, fields)) return report;  // empty file
      ++row;
      if (!(fields.size() >= 1 && !fields[0].empty() && fields[0][0] == '#')) break;
    }
    if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
    for (std::size_t i = 0; i < fields.size(); ++i) col.emplace(fields[i], i);
    for (const auto& req : required_columns())
      if (!col.count(req)) throw ValidationError("missing required column '" + req + "'");
    while (detail::read_csv_record(in, fields)) {
      ++row;
      if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
      const std::string id = fields.size() > col["grant_id"] ? fields[col["grant_id"]] : "";
      if (fields.size() != col.size()) {
        reject(row, id, {"<row>", "expected " + std::to_string(col.size()) + " fields, got " +
                                      std::to_string(fields.size())});
        continue;
      }
      try {
        admit(detail::record_from_csv(fields, col), row);
      } catch (detail::MalformedField& m) {
        reject(row, id, std::move(m));
      }
    }
  } else {
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      if (detail::blank(line)) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        reject(row, "", {"<line>", std::string("invalid JSON: ") + e.what()});
        continue;
      }
      std::string id = j.is_object() && j.contains("grant_id") && j["grant_id"].is_string()
                           ? j["grant_id"].get<std::string>()
                           : "";
      try {
        admit(detail::record_from_json(j), row);
      } catch (detail::MalformedField& m) {
        reject(row, std::move(id), std::move(m));
      }
    }
  }
  return report;
}

inline LoadReport load_corpus_report(const std::string& path, CorpusFormat format, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open corpus file '" + path + "'");
  return read_corpus(in, format, strict);
}

// Strict load: returns the well-formed records in file order.
inline std::vector<GrantRecord> load_corpus(const std::string& path, CorpusFormat format) {
  return load_corpus_report(path, format, true).records;
}

inline nlohmann::ordered_json to_json(const GrantRecord& r) {
  nlohmann::ordered_json j;
  j["grant_id"] = r.grant_id;
  j["title_pt"] = r.title_pt;
  j["abstract_pt"] = r.abstract_pt;
  j["title_en"] = r.title_en ? nlohmann::ordered_json(*r.title_en) : nlohmann::ordered_json(nullptr);
  j["abstract_en"] = r.abstract_en ? nlohmann::ordered_json(*r.abstract_en) : nlohmann::ordered_json(nullptr);
  j["subject"] = r.subject;
  j["area"] = to_string(r.area);
  j["year"] = r.year;
  j["publication_count"] = r.publication_count;
  return j;
}

inline void write_jsonl(std::ostream& out, std::span<const GrantRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Statistics

struct HistogramRow {
  int threshold = 0;
  double fraction = 0.0;  // fraction of records with publication_count >= threshold
};

inline std::vector<HistogramRow> productivity_histogram(std::span<const GrantRecord> records,
                                                        int first = 2, int last = 8) {
  if (records.empty()) throw ValidationError("productivity histogram of an empty corpus");
  std::vector<HistogramRow> rows;
  for (int n = first; n <= last; ++n) {
    const auto hits = std::count_if(records.begin(), records.end(),
                                    [n](const GrantRecord& r) { return r.publication_count >= n; });
    rows.push_back({n, static_cast<double>(hits) / static_cast<double>(records.size())});
  }
  return rows;
}

inline double positive_fraction(std::span<const GrantRecord> records) {
  if (records.empty()) throw ValidationError("positive fraction of an empty corpus");
  const auto pos = std::count_if(records.begin(), records.end(),
                                 [](const GrantRecord& r) { return r.publication_count >= 1; });
  return static_cast<double>(pos) / static_cast<double>(records.size());
}

// ---------------------------------------------------------------------------
// Resampling

struct Instance {
  std::size_t record = 0;  // index into the source list
  Label label = Label::ZeroPublications;
};

struct BalancedDataset {
  std::vector<Instance> instances;  // ascending source index
  std::uint64_t resample_seed = 0;
  std::size_t source_count_pos = 0;
  std::size_t source_count_neg = 0;

  std::size_t size() const { return instances.size(); }
};

// Keeps every minority-class instance and draws the same number of
// majority-class instances without replacement.
inline BalancedDataset balanced_resample(std::span<const Label> labels, std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] == Label::Productive ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty())
    throw ValidationError(std::string("balanced resample needs both classes; ") +
                          (pos.empty() ? "Productive" : "ZeroPublications") + " class is empty");

  BalancedDataset ds;
  ds.resample_seed = seed;
  ds.source_count_pos = pos.size();
  ds.source_count_neg = neg.size();

  auto& minority = pos.size() <= neg.size() ? pos : neg;
  auto& majority = pos.size() <= neg.size() ? neg : pos;
  Rng rng(seed);
  // Partial Fisher-Yates: the first |minority| slots become the sample.
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(majority.size() - i));
    std::swap(majority[i], majority[j]);
  }
  majority.resize(minority.size());

  std::vector<std::size_t> chosen = minority;
  chosen.insert(chosen.end(), majority.begin(), majority.end());
  std::sort(chosen.begin(), chosen.end());
  ds.instances.reserve(chosen.size());
  for (auto idx : chosen) ds.instances.push_back({idx, labels[idx]});
  return ds;
}

inline std::vector<BalancedDataset> repeat_resamples(std::span<const Label> labels, int n_repeats,
                                                     std::uint64_t base_seed) {
  if (n_repeats < 0) throw ValidationError("n_repeats must be non-negative");
  std::vector<BalancedDataset> out;
  out.reserve(static_cast<std::size_t>(n_repeats));
  for (int i = 0; i < n_repeats; ++i)
    out.push_back(balanced_resample(labels, derive_seed(base_seed, static_cast<std::uint64_t>(i))));
  return out;
}

struct FoldAssignment {
  int k = 0;
  std::vector<int> assignment;  // instance index -> fold in [0, k)

  std::vector<std::size_t> test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == fold) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] != fold) out.push_back(i);
    return out;
  }
};

// Stratified assignment over arbitrary labels. Each class is shuffled and
// dealt round-robin; the dealing position carries over from one class to the
// next, so fold sizes differ by at most one overall and within each class.
inline FoldAssignment stratified_kfold(std::span<const Label> labels, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("k must be at least 2");
  if (labels.size() < static_cast<std::size_t>(k))
    throw ValidationError("dataset of " + std::to_string(labels.size()) + " instances is smaller than k = " +
                          std::to_string(k));
  FoldAssignment fa;
  fa.k = k;
  fa.assignment.assign(labels.size(), -1);
  Rng rng(seed);
  std::size_t cursor = 0;
  for (Label cls : {Label::Productive, Label::ZeroPublications}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    rng.shuffle(members);
    for (auto idx : members) {
      fa.assignment[idx] = static_cast<int>(cursor % static_cast<std::size_t>(k));
      ++cursor;
    }
  }
  return fa;
}

inline FoldAssignment stratified_kfold(const BalancedDataset& ds, int k, std::uint64_t seed) {
  std::vector<Label> labels;
  labels.reserve(ds.size());
  for (const auto& inst : ds.instances) labels.push_back(inst.label);
  return stratified_kfold(labels, k, seed);
}

}  // namespace grantlex
