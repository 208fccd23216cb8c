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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "grantlex/cli.hpp"
#include "support/paths.hpp"
#include "support/synthetic.hpp"

namespace grantlex {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "grantlex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write_corpus(const fs::path& dir, const std::string& name, const std::vector<GrantRecord>& recs) {
  const auto p = dir / name;
  std::ofstream f(p);
  write_jsonl(f, recs);
  return p.string();
}

TEST(Cli, IngestValidCsv) {
  const auto dir = scratch_dir("ingest_ok");
  const auto r = cli({"ingest", "--input", test_data("toy3.csv"), "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accepted 3, rejected 0"), std::string::npos);
  const auto back = load_corpus((dir / "corpus.jsonl").string(), CorpusFormat::jsonl);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].grant_id, "2010/00001-1");
  const auto report = nlohmann::json::parse(slurp(dir / "ingest_report.json"));
  EXPECT_EQ(report["accepted"], 3);
  EXPECT_EQ(report["config"]["command"], "ingest");
}

TEST(Cli, IngestBadRowIsListed) {
  const auto dir = scratch_dir("ingest_bad");
  const auto r = cli({"ingest", "--input", test_data("bad_row.csv"), "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accepted 2, rejected 1"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir / "ingest_report.json"));
  ASSERT_EQ(report["rejections"].size(), 1u);
  EXPECT_EQ(report["rejections"][0]["field"], "publication_count");
  EXPECT_FALSE(report["rejections"][0]["reason"].get<std::string>().empty());
  // --strict turns the bad row into a failure.
  EXPECT_EQ(cli({"ingest", "--strict", "--input", test_data("bad_row.csv"), "--out", dir.string()}).code, 2);
}

TEST(Cli, IngestMissingColumn) {
  const auto dir = scratch_dir("ingest_missing");
  const auto r = cli({"ingest", "--input", test_data("missing_column.csv"), "--out", dir.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("publication_count"), std::string::npos);
  EXPECT_EQ(cli({"ingest", "--input", test_data("no_such_file.csv")}).code, 3);
  EXPECT_EQ(cli({"ingest", "--input", test_data("header_only.csv"), "--out", dir.string()}).code, 2);
}

TEST(Cli, StatsHandCounts) {
  const auto dir = scratch_dir("stats");
  const auto r = cli({"stats", "--input", test_data("toy3.csv"), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  // Counts 0 (VET), 3 (DENT), 1 (MED).
  const std::string expected =
      "area,grants,positive,2+,3+,4+,5+,6+,7+,8+\n"
      "MED,1,100.00%,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%\n"
      "DENT,1,100.00%,100.00%,100.00%,0.00%,0.00%,0.00%,0.00%,0.00%\n"
      "VET,1,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%\n"
      "all,3,66.67%,33.33%,33.33%,0.00%,0.00%,0.00%,0.00%,0.00%\n";
  EXPECT_EQ(r.out, expected);
  const auto file = slurp(dir / "stats.csv");
  EXPECT_EQ(file.substr(0, 2), "# ");
  EXPECT_NE(file.find(expected), std::string::npos);
}

TEST(Cli, StatsSingleAreaAllZero) {
  const auto dir = scratch_dir("stats_zero");
  auto recs = testing::planted_complexity_corpus(1, 10, 0);
  const auto input = write_corpus(dir, "zero.jsonl", recs);
  const auto r = cli({"stats", "--input", input});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "area,grants,positive,2+,3+,4+,5+,6+,7+,8+\n"
            "VET,10,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%,0.00%\n");
}

TEST(Cli, FeaturizeWritesMatrices) {
  const auto dir = scratch_dir("featurize");
  ASSERT_EQ(cli({"featurize", "--input", test_data("toy3.csv"), "--out", dir.string()}).code, 0);
  const auto csv = slurp(dir / "features_complexity.csv");
  EXPECT_NE(csv.find("grant_id,label,sentence_count,word_count"), std::string::npos);
  EXPECT_NE(csv.find("2011/00002-2,1,2,"), std::string::npos);

  ASSERT_EQ(cli({"featurize", "--features", "tfidf", "--fields", "title", "--top-x", "5", "--input",
                 test_data("toy3.csv"), "--out", dir.string()})
                .code,
            0);
  std::ifstream vocab(dir / "vocabulary.tsv");
  const auto v = read_vocabulary(vocab);
  EXPECT_EQ(v.size(), 5u);
  EXPECT_EQ(v.corpus_size, 3u);
  EXPECT_NE(slurp(dir / "features_tfidf.csv").find("grant_id,label,entries"), std::string::npos);
}

TEST(Cli, EnglishRunExcludesRecordsWithoutEnglishText) {
  const auto dir = scratch_dir("featurize_en");
  const auto r = cli({"featurize", "--lang", "en", "--input", test_data("toy3.csv"), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir / "features_complexity.csv");
  EXPECT_EQ(csv.find("2011/00002-2"), std::string::npos);
  EXPECT_NE(csv.find("2012/00003-3"), std::string::npos);
}

class CliEvaluate : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(scratch_dir("evaluate"));
    planted_ = write_corpus(*dir_, "planted.jsonl", testing::planted_text_corpus(21, {.documents = 200, .positives = 90}));
    shuffled_ = write_corpus(*dir_, "shuffled.jsonl",
                             testing::shuffle_labels(testing::planted_text_corpus(21, {.documents = 200, .positives = 90}), 5));
  }
  static void TearDownTestSuite() { delete dir_; }

  static CliRun evaluate(const std::string& input, const fs::path& out, std::vector<std::string> extra = {},
                      const std::string& jobs = "4") {
    std::vector<std::string> args = {"evaluate", "--input", input, "--features", "tfidf", "--top-x", "500",
                                     "--folds", "5", "--resamples", "4", "--jobs", jobs, "--seed", "11",
                                     "--out", out.string()};
    if (extra.empty()) extra = {"--algo", "dtrees"};
    args.insert(args.end(), extra.begin(), extra.end());
    return cli(args);
  }

  static inline fs::path* dir_ = nullptr;
  static inline std::string planted_, shuffled_;
};

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line.rfind("dataset,", 0) != 0) rows.push_back(line);
  return rows;
}

TEST_F(CliEvaluate, PlantedCorpusFlagged) {
  const auto out = *dir_ / "planted";
  const auto r = evaluate(planted_, out);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(slurp(out / "eval_summary.csv"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].substr(0, 12), "all,dtrees,t");
  EXPECT_EQ(rows[0].back(), '*');
  const auto j = nlohmann::json::parse(slurp(out / "eval_report.json"));
  EXPECT_EQ(j["config"]["seed"], 11);
  EXPECT_TRUE(j["reports"][0]["significant"].get<bool>());
  EXPECT_FALSE(fs::exists(out / "failures.json"));
}

TEST_F(CliEvaluate, ShuffledCorpusNotFlagged) {
  const auto out = *dir_ / "shuffled";
  ASSERT_EQ(evaluate(shuffled_, out).code, 0);
  const auto rows = data_rows(slurp(out / "eval_summary.csv"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NE(rows[0].back(), '*');
}

TEST_F(CliEvaluate, DoubleRunByteIdentical) {
  const auto a = *dir_ / "run_a", b = *dir_ / "run_b";
  ASSERT_EQ(evaluate(planted_, a).code, 0);
  ASSERT_EQ(evaluate(planted_, b, {}, "1").code, 0);
  EXPECT_EQ(slurp(a / "eval_summary.csv"), slurp(b / "eval_summary.csv"));
  EXPECT_EQ(slurp(a / "eval_report.json"), slurp(b / "eval_report.json"));
}

TEST_F(CliEvaluate, MissingSeedIsValidationError) {
  const auto r = cli({"evaluate", "--input", planted_, "--out", (*dir_ / "noseed").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
}

TEST_F(CliEvaluate, ConfigFileWithFlagsWinning) {
  const auto cfg = *dir_ / "run.toml";
  {
    std::ofstream f(cfg);
    f << "seed = 11\nfeatures = \"tfidf\"\ntop-x = \"500\"\nalgo = \"dtrees\"\nfolds = 5\nresamples = 9\n";
  }
  const auto out = *dir_ / "config";
  const auto r = cli({"evaluate", "--config", cfg.string(), "--input", planted_, "--resamples", "4", "--jobs", "4",
                      "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(out / "eval_report.json"));
  EXPECT_EQ(j["config"]["resamples"], 4);
  EXPECT_EQ(j["config"]["seed"], 11);
  EXPECT_EQ(j["config"]["features"], "tfidf");
  // Same settings as the flag-only run.
  const auto flags = *dir_ / "flags_only";
  ASSERT_EQ(evaluate(planted_, flags).code, 0);
  EXPECT_EQ(data_rows(slurp(out / "eval_summary.csv")), data_rows(slurp(flags / "eval_summary.csv")));
}

TEST_F(CliEvaluate, UnknownAlgorithmRejected) {
  const auto r = evaluate(planted_, *dir_ / "bad_algo", {"--algo", "lstm"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, RelevanceDeterministicAndPlantedFirst) {
  const auto dir = scratch_dir("relevance");
  const auto input = write_corpus(dir, "planted.jsonl", testing::planted_complexity_corpus(8, 120, 50));
  auto run = [&](const std::string& sub) {
    return cli({"relevance", "--input", input, "--seed", "3", "--resamples", "5", "--jobs", "4", "--no-timestamp",
                "--out", (dir / sub).string()});
  };
  const auto a = run("a");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(run("b").code, 0);
  EXPECT_EQ(slurp(dir / "a" / "relevance.csv"), slurp(dir / "b" / "relevance.csv"));
  EXPECT_EQ(slurp(dir / "a" / "rank_diagram.svg"), slurp(dir / "b" / "rank_diagram.svg"));
  EXPECT_EQ(slurp(dir / "a" / "rank_diagram.svg").find("<!--"), std::string::npos);
  EXPECT_EQ(a.out.substr(0, 26), "1. logical_operator_count ");

  const auto csv = slurp(dir / "a" / "relevance.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 3), "# {");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 5), "# cd=");
  std::getline(in, line);
  EXPECT_EQ(line, "feature,mean_importance,average_rank,nodes,cd_flag");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 23), "logical_operator_count,");

  // Without --no-timestamp the SVG carries a comment line.
  ASSERT_EQ(cli({"relevance", "--input", input, "--seed", "3", "--resamples", "2", "--out", (dir / "c").string()}).code,
            0);
  EXPECT_NE(slurp(dir / "c" / "rank_diagram.svg").find("<!-- generated "), std::string::npos);
}

TEST(Cli, RelevanceRejectsNonTreeModels) {
  const auto dir = scratch_dir("relevance_bad");
  const auto input = write_corpus(dir, "c.jsonl", testing::planted_complexity_corpus(8, 40, 20));
  const auto r = cli({"relevance", "--input", input, "--seed", "1", "--algo", "knn", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unsupported"), std::string::npos);
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"stats", "--lang", "fr", "--input", test_data("toy3.csv")}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

}  // namespace
}  // namespace grantlex
