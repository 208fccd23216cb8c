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

// Command-line driver: ingest, stats, featurize, evaluate, relevance.
// Exit codes: 0 success, 2 validation failure, 3 runtime failure.

#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "grantlex/corpus.hpp"
#include "grantlex/evaluate.hpp"
#include "grantlex/features.hpp"
#include "grantlex/lexicon.hpp"
#include "grantlex/relevance.hpp"

namespace grantlex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

struct RunConfig {
  std::string command;
  std::string input;
  std::string format;  // empty: from the file extension
  std::string lang = "pt";
  std::string fields = "abstract";
  std::string features = "complexity";
  std::string top_x = "1100";
  std::vector<std::string> algo;
  int folds = 10;
  int resamples = 10;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out = ".";
  std::string lexicon_dir;
  std::string idf = "printed";
  std::string vocab_scope = "fold";
  std::string weighting = "tfidf";
  std::string importance = "node-mean";
  std::string complexity_text = "abstract";
  bool split_areas = false;
  bool strict = false;
  bool no_timestamp = false;

  nlohmann::ordered_json echo() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["input"] = input;
    j["format"] = format;
    j["lang"] = lang;
    j["features"] = features;
    j["fields"] = fields;
    j["top_x"] = top_x;
    j["algo"] = algo;
    j["folds"] = folds;
    j["resamples"] = resamples;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    j["idf"] = idf;
    j["vocab_scope"] = vocab_scope;
    j["weighting"] = weighting;
    j["importance"] = importance;
    j["complexity_text"] = complexity_text;
    j["split_areas"] = split_areas;
    j["lexicon_dir"] = lexicon_dir;
    return j;
  }
};

inline std::size_t parse_top_x(const std::string& s) {
  if (s == "abstract1") return kTopXAbstract1;
  if (s == "abstract2") return kTopXAbstract2;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v < 1) throw ValidationError("--top-x must be 1100, 7196 or a positive integer");
  return static_cast<std::size_t>(v);
}

inline CorpusFormat format_for(const RunConfig& rc) {
  if (!rc.format.empty()) return parse_format(rc.format);
  const auto ext = std::filesystem::path(rc.input).extension().string();
  return ext == ".jsonl" || ext == ".json" ? CorpusFormat::jsonl : CorpusFormat::csv;
}

inline FeatureConfig feature_config(const RunConfig& rc) {
  FeatureConfig fc;
  fc.family = parse_feature_family(rc.features);
  fc.language = parse_language(rc.lang);
  fc.field = parse_field_selector(rc.fields);
  fc.top_x = parse_top_x(rc.top_x);
  if (rc.weighting == "tfidf") fc.weighting = Weighting::tfidf;
  else if (rc.weighting == "raw") fc.weighting = Weighting::raw_frequency;
  else throw ValidationError("--weighting must be tfidf or raw");
  if (rc.idf == "printed") fc.idf = IdfForm::printed;
  else if (rc.idf == "conventional") fc.idf = IdfForm::conventional;
  else throw ValidationError("--idf must be printed or conventional");
  if (rc.vocab_scope == "fold") fc.vocab_scope = VocabScope::per_fold;
  else if (rc.vocab_scope == "global") fc.vocab_scope = VocabScope::global;
  else throw ValidationError("--vocab-scope must be fold or global");
  if (rc.complexity_text == "abstract") fc.complexity_text = ComplexityText::abstract;
  else if (rc.complexity_text == "title+abstract") fc.complexity_text = ComplexityText::title_plus_abstract;
  else throw ValidationError("--complexity-text must be abstract or title+abstract");
  return fc;
}

inline std::vector<ml::Algorithm> algorithms(const RunConfig& rc, std::vector<ml::Algorithm> fallback) {
  if (rc.algo.empty()) return fallback;
  std::vector<ml::Algorithm> out;
  for (const auto& a : rc.algo) {
    if (a == "all") {
      for (auto x : ml::all_algorithms())
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
      continue;
    }
    const auto x = ml::parse_algorithm(a);
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

inline LexiconSet lexicons(const RunConfig& rc) {
  const auto lang = parse_language(rc.lang);
  auto lex = rc.lexicon_dir.empty() ? LexiconSet::builtin(lang) : load_lexicons(rc.lexicon_dir, lang);
  lex.validate();
  return lex;
}

inline std::uint64_t require_seed(const RunConfig& rc) {
  if (!rc.seed) throw ValidationError("--seed is required for " + rc.command);
  return *rc.seed;
}

inline std::filesystem::path out_dir(const RunConfig& rc) {
  std::filesystem::path p(rc.out);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw RuntimeFailure("cannot create output directory '" + rc.out + "': " + ec.message());
  return p;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw RuntimeFailure("cannot write '" + p.string() + "'");
  return f;
}

inline LoadReport load_input(const RunConfig& rc, std::ostream& err) {
  if (rc.input.empty()) throw ValidationError("--input is required");
  auto rep = load_corpus_report(rc.input, format_for(rc), rc.strict);
  for (const auto& r : rep.rejections)
    err << "rejected row " << r.row << (r.grant_id.empty() ? "" : " (" + r.grant_id + ")") << ": field '" << r.field
        << "' " << r.reason << '\n';
  return rep;
}

// Datasets: the whole corpus, or one per area present (in enum order).
inline std::vector<std::pair<std::string, std::vector<GrantRecord>>> datasets(const RunConfig& rc,
                                                                              const std::vector<GrantRecord>& all) {
  std::vector<std::pair<std::string, std::vector<GrantRecord>>> out;
  if (!rc.split_areas) {
    out.emplace_back("all", all);
    return out;
  }
  for (Area a : {Area::MED, Area::DENT, Area::VET, Area::OTHER}) {
    std::vector<GrantRecord> part;
    for (const auto& r : all)
      if (r.area == a) part.push_back(r);
    if (!part.empty()) out.emplace_back(to_string(a), std::move(part));
  }
  return out;
}

inline int cmd_ingest(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto rep = load_input(rc, err);
  out << "accepted " << rep.records.size() << ", rejected " << rep.rejections.size() << " (empty abstract "
      << rep.empty_abstract_count << ")\n";
  if (rep.records.empty()) throw ValidationError("no records accepted from '" + rc.input + "'");
  const auto dir = out_dir(rc);
  {
    auto f = open_out(dir / "corpus.jsonl");
    write_jsonl(f, rep.records);
  }
  nlohmann::ordered_json j;
  j["config"] = rc.echo();
  j["accepted"] = rep.records.size();
  j["rejected"] = rep.rejections.size();
  j["empty_abstract"] = rep.empty_abstract_count;
  j["rejections"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rejections)
    j["rejections"].push_back({{"row", r.row}, {"grant_id", r.grant_id}, {"field", r.field}, {"reason", r.reason}});
  auto f = open_out(dir / "ingest_report.json");
  f << j.dump(2) << '\n';
  return kExitOk;
}

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

inline int cmd_stats(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto rep = load_input(rc, err);
  if (rep.records.empty()) throw ValidationError("empty corpus");
  std::vector<std::pair<std::string, std::vector<GrantRecord>>> groups;
  RunConfig by_area = rc;
  by_area.split_areas = true;
  groups = datasets(by_area, rep.records);
  if (groups.size() > 1) groups.emplace_back("all", rep.records);

  std::ostringstream table;
  table << "area,grants,positive";
  for (int n = 2; n <= 8; ++n) table << ',' << n << '+';
  table << '\n';
  for (const auto& [name, recs] : groups) {
    table << name << ',' << recs.size() << ',' << percent(positive_fraction(recs));
    for (const auto& row : productivity_histogram(recs)) table << ',' << percent(row.fraction);
    table << '\n';
  }
  out << table.str();
  if (rc.out != ".") {
    auto f = open_out(out_dir(rc) / "stats.csv");
    f << "# " << rc.echo().dump() << '\n' << table.str();
  }
  return kExitOk;
}

inline int cmd_featurize(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto rep = load_input(rc, err);
  const auto fc = feature_config(rc);
  const auto table = build_feature_table(rep.records, fc, lexicons(rc));
  const auto dir = out_dir(rc);
  if (fc.family == FeatureFamily::complexity) {
    auto f = open_out(dir / "features_complexity.csv");
    f << "# " << rc.echo().dump() << '\n';
    write_complexity_csv(f, table);
  } else {
    if (table.size() == 0) throw ValidationError("no records have the selected field");
    const auto vocab = fit_global_vocabulary(table, fc.top_x);
    {
      auto f = open_out(dir / "vocabulary.tsv");
      write_vocabulary(f, vocab);
    }
    auto f = open_out(dir / "features_tfidf.csv");
    f << "# " << rc.echo().dump() << '\n';
    write_tfidf_csv(f, table, vocab, fc.weighting, fc.idf);
  }
  out << "featurized " << table.size() << " records";
  if (table.excluded) out << " (" << table.excluded << " excluded: no " << rc.lang << " text)";
  out << '\n';
  return kExitOk;
}

inline int cmd_evaluate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto seed = require_seed(rc);
  const auto rep = load_input(rc, err);
  const auto fc = feature_config(rc);
  const auto lex = lexicons(rc);
  const auto algos = algorithms(rc, ml::all_algorithms());
  EvalOptions opt;
  opt.folds = rc.folds;
  opt.resamples = rc.resamples;
  opt.seed = seed;
  opt.jobs = std::max<std::size_t>(1, rc.jobs);

  const auto dir = out_dir(rc);
  std::vector<EvalReport> reports;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& [name, recs] : datasets(rc, rep.records)) {
    FeatureTable table;
    try {
      table = build_feature_table(recs, fc, lex);
      if (table.excluded)
        err << name << ": " << table.excluded << " records excluded (no " << rc.lang << " text)\n";
    } catch (const std::exception& e) {
      failures.push_back({{"dataset", name}, {"algo", "*"}, {"error", e.what()}});
      continue;
    }
    for (auto a : algos) {
      try {
        reports.push_back(cross_validate(table, fc, a, opt, name));
        const auto& r = reports.back();
        out << name << ' ' << r.algorithm << " F1 " << format4(r.mean_f1) << " +- " << format4(r.sd_f1) << " p "
            << format_p(r.p_value) << (r.significant ? " *" : "") << '\n';
      } catch (const std::exception& e) {
        failures.push_back({{"dataset", name}, {"algo", ml::to_string(a)}, {"error", e.what()}});
        err << name << ' ' << ml::to_string(a) << ": " << e.what() << '\n';
      }
    }
  }
  const auto echo = rc.echo();
  {
    auto f = open_out(dir / "eval_summary.csv");
    write_summary_csv(f, reports, echo);
  }
  {
    nlohmann::ordered_json j;
    j["config"] = echo;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) j["reports"].push_back(to_json(r));
    auto f = open_out(dir / "eval_report.json");
    f << j.dump(2) << '\n';
  }
  if (!failures.empty()) {
    nlohmann::ordered_json j;
    j["config"] = echo;
    j["failures"] = failures;
    auto f = open_out(dir / "failures.json");
    f << j.dump(2) << '\n';
    return reports.empty() ? kExitValidation : kExitRuntime;
  }
  return kExitOk;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline int cmd_relevance(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto seed = require_seed(rc);
  const auto rep = load_input(rc, err);
  const auto fc = feature_config(rc);
  const auto algos = algorithms(rc, {ml::Algorithm::random_forest});
  if (algos.size() != 1) throw ValidationError("relevance takes a single --algo (rforest or dtrees)");
  RelevanceOptions opt;
  opt.algorithm = algos.front();
  opt.resamples = rc.resamples;
  opt.seed = seed;
  opt.jobs = std::max<std::size_t>(1, rc.jobs);
  if (rc.importance == "node-mean") opt.weighting = ImportanceWeighting::node_mean;
  else if (rc.importance == "weighted") opt.weighting = ImportanceWeighting::instance_weighted;
  else throw ValidationError("--importance must be node-mean or weighted");

  const auto table = build_feature_table(rep.records, fc, lexicons(rc));
  auto rel = compute_relevance(table, fc, opt);
  rel.config = rc.echo();
  const auto dir = out_dir(rc);
  {
    auto f = open_out(dir / "relevance.csv");
    write_ranking_csv(f, rel);
  }
  {
    auto f = open_out(dir / "rank_diagram.svg");
    write_rank_svg(f, rel, rc.no_timestamp ? std::string() : utc_timestamp());
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(5, rel.rows.size()); ++i)
    out << i + 1 << ". " << rel.rows[i].feature << " (average rank " << format4(rel.rows[i].average_rank) << ")\n";
  if (rel.cd) out << "CD = " << format4(*rel.cd) << '\n';
  return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"grantlex: grant productivity prediction from lexical features", "grantlex"};
  app.set_config("--config", "", "key = value file mirroring the flags (flags win)");
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  std::uint64_t seed = 0;

  app.add_option("--input", rc.input, "corpus file (csv or jsonl)");
  app.add_option("--format", rc.format, "csv or jsonl (default: from extension)")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--lang", rc.lang, "pt or en")->check(CLI::IsMember({"pt", "en"}));
  app.add_option("--fields", rc.fields, "title, subject, title+subject or abstract")
      ->check(CLI::IsMember({"title", "subject", "title+subject", "abstract"}));
  app.add_option("--features", rc.features, "complexity or tfidf")->check(CLI::IsMember({"complexity", "tfidf"}));
  app.add_option("--top-x", rc.top_x, "vocabulary size: 1100, 7196 or N");
  app.add_option("--algo", rc.algo, "dtrees, rforest, svm, knn, bayes, mlp or all")->delimiter(',');
  app.add_option("--folds", rc.folds, "cross-validation folds");
  app.add_option("--resamples", rc.resamples, "balanced resamples");
  auto* seed_opt = app.add_option("--seed", seed, "base seed");
  app.add_option("--jobs", rc.jobs, "parallel evaluation cells");
  app.add_option("--out", rc.out, "output directory");
  app.add_option("--lexicon-dir", rc.lexicon_dir, "directory with lexicon override files");
  app.add_option("--idf", rc.idf, "printed or conventional")->check(CLI::IsMember({"printed", "conventional"}));
  app.add_option("--vocab-scope", rc.vocab_scope, "fold or global")->check(CLI::IsMember({"fold", "global"}));
  app.add_option("--weighting", rc.weighting, "tfidf or raw")->check(CLI::IsMember({"tfidf", "raw"}));
  app.add_option("--importance", rc.importance, "node-mean or weighted")
      ->check(CLI::IsMember({"node-mean", "weighted"}));
  app.add_option("--complexity-text", rc.complexity_text, "abstract or title+abstract")
      ->check(CLI::IsMember({"abstract", "title+abstract"}));
  app.add_flag("--split-areas", rc.split_areas, "one dataset per area");
  app.add_flag("--strict", rc.strict, "fail on the first malformed row");
  app.add_flag("--no-timestamp", rc.no_timestamp, "omit the timestamp comment from the SVG");

  std::map<std::string, int (*)(const RunConfig&, std::ostream&, std::ostream&)> commands = {
      {"ingest", cmd_ingest},       {"stats", cmd_stats},         {"featurize", cmd_featurize},
      {"evaluate", cmd_evaluate},   {"relevance", cmd_relevance},
  };
  const std::map<std::string, std::string> help = {
      {"ingest", "validate a corpus and write canonical JSONL"},
      {"stats", "positive-class percentages and the 2+..8+ table"},
      {"featurize", "write the feature matrix"},
      {"evaluate", "balanced-resample cross-validation"},
      {"relevance", "Gini feature ranking and rank diagram"},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }
  for (auto* sub : app.get_subcommands()) rc.command = sub->get_name();
  if (seed_opt->count() > 0) rc.seed = seed;

  try {
    return commands.at(rc.command)(rc, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const RuntimeFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace grantlex::cli
