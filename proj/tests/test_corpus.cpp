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

#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "grantlex/corpus.hpp"
#include "support/paths.hpp"

namespace grantlex {
namespace {

std::vector<Label> make_labels(std::size_t pos, std::size_t neg) {
  std::vector<Label> v(pos, Label::Productive);
  v.insert(v.end(), neg, Label::ZeroPublications);
  return v;
}

TEST(LoadCorpus, HeaderOnlyGivesEmptyList) {
  EXPECT_TRUE(load_corpus(test_data("header_only.csv"), CorpusFormat::csv).empty());
}

TEST(LoadCorpus, ThreeRowsKeepOrder) {
  const auto recs = load_corpus(test_data("toy3.csv"), CorpusFormat::csv);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].grant_id, "2010/00001-1");
  EXPECT_EQ(recs[1].grant_id, "2011/00002-2");
  EXPECT_EQ(recs[2].grant_id, "2012/00003-3");
  EXPECT_EQ(recs[0].subject, (std::vector<std::string>{"gato", "sono"}));
  EXPECT_EQ(recs[1].title_pt, "Dentes, ossos e sangue");
  EXPECT_EQ(recs[2].abstract_pt, "Os pacientes do \"Hospital\" são avaliados.");
  EXPECT_FALSE(recs[1].title_en.has_value());
  EXPECT_EQ(recs[0].area, Area::VET);
  EXPECT_EQ(recs[1].publication_count, 3);
}

TEST(LoadCorpus, NegativeCountNamesFieldAndRow) {
  try {
    load_corpus(test_data("bad_row.csv"), CorpusFormat::csv);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("publication_count"), std::string::npos) << msg;
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
  }
}

TEST(LoadCorpus, LenientModeCollectsBadRows) {
  const auto rep = load_corpus_report(test_data("bad_row.csv"), CorpusFormat::csv, false);
  EXPECT_EQ(rep.records.size(), 2u);
  ASSERT_EQ(rep.rejections.size(), 1u);
  EXPECT_EQ(rep.rejections[0].field, "publication_count");
  EXPECT_EQ(rep.rejections[0].grant_id, "2010/00002-2");
}

TEST(LoadCorpus, MissingColumnIsNamed) {
  try {
    load_corpus(test_data("missing_column.csv"), CorpusFormat::csv);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("publication_count"), std::string::npos);
  }
}

TEST(LoadCorpus, DuplicateIdRejectsFile) {
  std::istringstream in(
      "grant_id,title_pt,abstract_pt,area,year,publication_count\n"
      "2010/00001-1,a,b.,MED,2010,0\n"
      "2010/00001-1,c,d.,MED,2010,1\n");
  EXPECT_THROW(read_corpus(in, CorpusFormat::csv, false), ValidationError);
}

TEST(LoadCorpus, EmptyAbstractIsRejectedAndCounted) {
  std::istringstream in(
      "grant_id,title_pt,abstract_pt,area,year,publication_count\n"
      "2010/00001-1,a,,MED,2010,0\n"
      "2010/00002-1,c,Texto.,MED,2010,1\n");
  const auto rep = read_corpus(in, CorpusFormat::csv, true);
  EXPECT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.empty_abstract_count, 1u);
}

TEST(LoadCorpus, BadGrantIdRejected) {
  std::istringstream in(
      "grant_id,title_pt,abstract_pt,area,year,publication_count\n"
      "2010-00001-1,a,b.,MED,2010,0\n");
  EXPECT_THROW(read_corpus(in, CorpusFormat::csv, true), ValidationError);
}

TEST(LoadCorpus, QuotedNewlineInsideField) {
  std::istringstream in(
      "grant_id,title_pt,abstract_pt,area,year,publication_count\n"
      "2010/00001-1,a,\"linha um.\nlinha dois.\",MED,2010,0\n");
  const auto rep = read_corpus(in, CorpusFormat::csv, true);
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.records[0].abstract_pt, "linha um.\nlinha dois.");
}

TEST(LoadCorpus, MissingFileIsRuntimeFailure) {
  EXPECT_THROW(load_corpus(test_data("does_not_exist.csv"), CorpusFormat::csv), RuntimeFailure);
}

TEST(LoadCorpus, JsonlMatchesSchema) {
  const auto recs = load_corpus(test_data("toy3.jsonl"), CorpusFormat::jsonl);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].subject, (std::vector<std::string>{"gato", "sono"}));
  EXPECT_EQ(recs[2].abstract_en, std::optional<std::string>("Patients are evaluated."));
  EXPECT_EQ(recs[1].publication_count, 2);
}

TEST(LoadCorpus, JsonlRoundTrip) {
  const auto recs = load_corpus(test_data("toy3.csv"), CorpusFormat::csv);
  std::stringstream buf;
  write_jsonl(buf, recs);
  const auto back = read_corpus(buf, CorpusFormat::jsonl, true).records;
  EXPECT_EQ(back, recs);
}

TEST(DeriveLabel, Examples) {
  EXPECT_EQ(derive_label(0), Label::ZeroPublications);
  EXPECT_EQ(derive_label(1), Label::Productive);
  EXPECT_EQ(derive_label(7), Label::Productive);
}

std::vector<GrantRecord> with_counts(std::initializer_list<int> counts) {
  std::vector<GrantRecord> out;
  int i = 0;
  for (int c : counts) {
    GrantRecord r;
    r.grant_id = "2010/" + std::to_string(++i) + "-0";
    r.abstract_pt = "x.";
    r.publication_count = c;
    out.push_back(r);
  }
  return out;
}

TEST(Histogram, Examples) {
  auto h = productivity_histogram(with_counts({0, 0, 0, 0, 0, 1, 1, 1, 2, 2}));
  ASSERT_EQ(h.size(), 7u);
  EXPECT_EQ(h[0].threshold, 2);
  EXPECT_DOUBLE_EQ(h[0].fraction, 0.2);
  for (const auto& row : productivity_histogram(with_counts({0, 0, 0}))) EXPECT_EQ(row.fraction, 0.0);
  h = productivity_histogram(with_counts({3, 3, 3, 3}));
  EXPECT_EQ(h[0].fraction, 1.0);
  EXPECT_EQ(h[1].fraction, 1.0);
  EXPECT_EQ(h[2].fraction, 0.0);
  EXPECT_THROW(productivity_histogram(std::vector<GrantRecord>{}), ValidationError);
}

TEST(Histogram, NonIncreasing) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GrantRecord> recs;
    for (int i = 0; i < 40; ++i) {
      GrantRecord r;
      r.publication_count = static_cast<std::int64_t>(rng.below(12));
      recs.push_back(r);
    }
    const auto h = productivity_histogram(recs);
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i].fraction, h[i - 1].fraction);
  }
}

void expect_balanced(const BalancedDataset& ds, std::span<const Label> labels) {
  std::size_t pos = 0, neg = 0;
  std::set<std::size_t> seen;
  for (const auto& inst : ds.instances) {
    EXPECT_TRUE(seen.insert(inst.record).second) << "repeated instance";
    EXPECT_EQ(inst.label, labels[inst.record]);
    (inst.label == Label::Productive ? pos : neg)++;
  }
  EXPECT_EQ(pos, neg);
  // The minority class is kept whole.
  const auto minority = ds.source_count_pos <= ds.source_count_neg ? Label::Productive : Label::ZeroPublications;
  for (std::size_t i = 0; i < labels.size(); ++i)
    EXPECT_TRUE(labels[i] != minority || seen.count(i)) << i;
}

TEST(BalancedResample, FivePositivesTwentyNegatives) {
  const auto labels = make_labels(5, 20);
  const auto ds = balanced_resample(labels, 42);
  EXPECT_EQ(ds.size(), 10u);
  EXPECT_EQ(ds.source_count_pos, 5u);
  EXPECT_EQ(ds.source_count_neg, 20u);
  expect_balanced(ds, labels);
}

TEST(BalancedResample, AlreadyBalancedKeepsAll) {
  const auto labels = make_labels(5, 5);
  for (std::uint64_t seed : {1u, 2u, 99u}) EXPECT_EQ(balanced_resample(labels, seed).size(), 10u);
}

TEST(BalancedResample, SeedDeterminism) {
  const auto labels = make_labels(5, 200);
  auto ids = [&](std::uint64_t s) {
    std::vector<std::size_t> v;
    for (const auto& i : balanced_resample(labels, s).instances) v.push_back(i.record);
    return v;
  };
  EXPECT_EQ(ids(1), ids(1));
  EXPECT_NE(ids(1), ids(2));
}

TEST(BalancedResample, PositiveMajoritySwapsRoles) {
  const auto labels = make_labels(30, 4);
  const auto ds = balanced_resample(labels, 7);
  EXPECT_EQ(ds.size(), 8u);
  expect_balanced(ds, labels);
}

TEST(BalancedResample, EmptyClassIsAnError) {
  EXPECT_THROW(balanced_resample(make_labels(0, 4), 1), ValidationError);
  EXPECT_THROW(balanced_resample(make_labels(4, 0), 1), ValidationError);
}

TEST(BalancedResample, EqualCountsForManySeeds) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<Label> labels;
    const auto n = 2 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(rng.below(3) ? Label::ZeroPublications : Label::Productive);
    if (std::count(labels.begin(), labels.end(), Label::Productive) == 0) labels[0] = Label::Productive;
    if (std::count(labels.begin(), labels.end(), Label::ZeroPublications) == 0) labels[1] = Label::ZeroPublications;
    expect_balanced(balanced_resample(labels, rng.next()), labels);
  }
}

TEST(RepeatResamples, Shapes) {
  const auto labels = make_labels(6, 30);
  const auto ten = repeat_resamples(labels, 10, 5);
  ASSERT_EQ(ten.size(), 10u);
  for (const auto& ds : ten) expect_balanced(ds, labels);
  const auto one = repeat_resamples(labels, 1, 5);
  ASSERT_EQ(one.size(), 1u);
  const auto direct = balanced_resample(labels, derive_seed(5, 0));
  ASSERT_EQ(one[0].size(), direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_EQ(one[0].instances[i].record, direct.instances[i].record);
  EXPECT_TRUE(repeat_resamples(labels, 0, 5).empty());
}

TEST(SeedDerivation, SplitmixReference) {
  // First splitmix64 output from state 0.
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(derive_seed(12345, 3), mix64(12345 ^ mix64(3)));
}

std::vector<std::size_t> fold_sizes(const FoldAssignment& fa) {
  std::vector<std::size_t> s(static_cast<std::size_t>(fa.k), 0);
  for (int f : fa.assignment) ++s[static_cast<std::size_t>(f)];
  return s;
}

TEST(StratifiedKfold, TwentyInstancesTenFolds) {
  const auto labels = make_labels(10, 10);
  const auto fa = stratified_kfold(labels, 10, 3);
  for (int f = 0; f < 10; ++f) {
    const auto test = fa.test_indices(f);
    ASSERT_EQ(test.size(), 2u);
    EXPECT_NE(labels[test[0]], labels[test[1]]);
  }
}

TEST(StratifiedKfold, LeaveOneOut) {
  const auto fa = stratified_kfold(make_labels(10, 10), 20, 3);
  for (auto s : fold_sizes(fa)) EXPECT_EQ(s, 1u);
}

TEST(StratifiedKfold, TwentyOneInstances) {
  const auto fa = stratified_kfold(make_labels(11, 10), 10, 3);
  auto s = fold_sizes(fa);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, (std::vector<std::size_t>{2, 2, 2, 2, 2, 2, 2, 2, 2, 3}));
}

TEST(StratifiedKfold, SmallerThanKIsAnError) {
  EXPECT_THROW(stratified_kfold(make_labels(2, 2), 5, 1), ValidationError);
}

TEST(StratifiedKfold, PartitionSkewAndStratification) {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto pos = 1 + rng.below(40), neg = 1 + rng.below(40);
    const auto labels = make_labels(pos, neg);
    const int k = 2 + static_cast<int>(rng.below(std::min<std::uint64_t>(9, labels.size() - 1)));
    const auto seed = rng.next();
    const auto fa = stratified_kfold(labels, k, seed);
    std::vector<int> hit(labels.size(), 0);
    for (int f = 0; f < k; ++f)
      for (auto i : fa.test_indices(f)) ++hit[i];
    for (int h : hit) EXPECT_EQ(h, 1);
    const auto s = fold_sizes(fa);
    EXPECT_LE(*std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end()), 1u);
    for (int f = 0; f < k; ++f) {
      const auto test = fa.test_indices(f);
      double p = 0;
      for (auto i : test) p += labels[i] == Label::Productive;
      const double expected = static_cast<double>(test.size()) * static_cast<double>(pos) / labels.size();
      EXPECT_LE(std::abs(p - expected), 1.0 + 1e-9);
    }
    EXPECT_EQ(stratified_kfold(labels, k, seed).assignment, fa.assignment);
  }
}

}  // namespace
}  // namespace grantlex
