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

#include <cmath>
#include <fstream>
#include <sstream>

#include "grantlex/relevance.hpp"
#include "support/synthetic.hpp"

namespace grantlex {
namespace {

constexpr Label P = Label::Productive;
constexpr Label Z = Label::ZeroPublications;

double round4(double v) { return std::round(v * 1e4) / 1e4; }

TEST(Gini, FigureConstants) {
  EXPECT_EQ(round4(gini_impurity(0.5, 0.5)), 0.5);
  EXPECT_EQ(gini_impurity(1.0, 0.0), 0.0);
  EXPECT_EQ(round4(gini_impurity(1.0 / 17, 16.0 / 17)), 0.1107);
  // 2 * (1/17) * (16/17) = 32/289.
  EXPECT_NEAR(gini_impurity(1.0 / 17, 16.0 / 17), 32.0 / 289.0, 1e-15);
}

TEST(Gini, RejectsBadDistributions) {
  EXPECT_THROW(gini_impurity(0.5, 0.6), std::invalid_argument);
  EXPECT_THROW(gini_impurity(-0.1, 1.1), std::invalid_argument);
}

TEST(Gini, SymmetricAndMaximalAtUniform) {
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    EXPECT_DOUBLE_EQ(gini_impurity(p, 1 - p), gini_impurity(1 - p, p));
    EXPECT_LE(gini_impurity(p, 1 - p), 0.5);
  }
  const std::vector<double> three = {0.2, 0.3, 0.5};
  EXPECT_NEAR(gini_impurity(three), 1 - 0.04 - 0.09 - 0.25, 1e-15);
}

TEST(ImpurityDecrease, FigureExample) {
  const double g_r = gini_impurity(1.0 / 17, 16.0 / 17);
  const double dg = impurity_decrease(0.5, 0.0, g_r, 15, 17);
  EXPECT_EQ(round4(dg), 0.4412);
  // 0.5 - (17/32)(32/289) = 0.5 - 1/17.
  EXPECT_NEAR(dg, 0.5 - 1.0 / 17.0, 1e-15);
}

TEST(ImpurityDecrease, DegenerateSplits) {
  EXPECT_NEAR(impurity_decrease(0.42, 0.42, 0.42, 3, 9), 0.0, 1e-15);
  EXPECT_EQ(impurity_decrease(0.0, 0.0, 0.0, 4, 4), 0.0);
  EXPECT_THROW(impurity_decrease(0.5, 0.5, 0.5, 0, 0), std::invalid_argument);
}

ml::Dataset random_dataset(Rng& rng, std::size_t n, std::size_t d) {
  ml::Dataset ds;
  ds.x = ml::Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) ds.x.row(i)[j] = std::floor(rng.uniform(0, 5));
    ds.y.push_back(rng.below(2) ? P : Z);
  }
  return ds;
}

TEST(ImpurityRecords, ReplayReproducesDeltaG) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_dataset(rng, 60, 4);
    const auto forest = ml::RandomForest::train(d, {.n_trees = 5}, 100 + trial);
    for (const auto& tree : forest.trees())
      for (const auto& rec : tree.impurity_records()) {
        EXPECT_NEAR(impurity_decrease(rec.g_before, rec.g_left, rec.g_right, rec.n_left, rec.n_right), rec.delta_g,
                    1e-12);
        EXPECT_GE(rec.delta_g, -1e-12);
        EXPECT_LT(rec.feature, 4u);
      }
  }
}

TEST(FeatureImportance, SingleNode) {
  const auto d = [] {
    ml::Dataset ds;
    ds.x = ml::Matrix(4, 3);
    const double rows[4][3] = {{0, 5, 1}, {0, 5, 2}, {1, 5, 1}, {1, 5, 2}};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) ds.x.row(i)[j] = rows[i][j];
    ds.y = {Z, Z, P, P};
    return ds;
  }();
  const auto tree = ml::DecisionTree::train(d);
  ASSERT_EQ(tree.impurity_records().size(), 1u);
  const auto fi = feature_importance({&tree}, 3);
  EXPECT_DOUBLE_EQ(fi.importance[0], tree.impurity_records()[0].delta_g);
  EXPECT_DOUBLE_EQ(fi.importance[0], 0.5);
  EXPECT_EQ(fi.importance[1], 0.0);
  EXPECT_EQ(fi.importance[2], 0.0);
  EXPECT_EQ(fi.node_count[0], 1u);
}

TEST(FeatureImportance, MeanOverTrees) {
  // Tree A: dG = 0.5. Tree B: dG = 0.25. Importance is the mean over both nodes.
  auto make = [](std::vector<double> x, std::vector<Label> y) {
    ml::Dataset ds;
    ds.x = ml::Matrix(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) ds.x.row(i)[0] = x[i];
    ds.y = y;
    return ds;
  };
  const auto a = ml::DecisionTree::train(make({0, 0, 1, 1}, {Z, Z, P, P}));
  // Labels Z Z Z P | P P with a max-depth-1 stump: G_B = 0.5,
  // left {3Z,1P} G = 0.375, right pure; dG = 0.5 - 4/6 * 0.375 = 0.25.
  ml::TreeParams stump;
  stump.max_depth = 1;
  const auto b = ml::DecisionTree::train(make({0, 0, 0, 0, 1, 1}, {Z, Z, Z, P, P, P}), stump);
  ASSERT_EQ(b.impurity_records().size(), 1u);
  EXPECT_NEAR(b.impurity_records()[0].delta_g, 0.25, 1e-15);
  const auto fi = feature_importance({&a, &b}, 1);
  EXPECT_NEAR(fi.importance[0], (0.5 + 0.25) / 2, 1e-15);
  EXPECT_EQ(fi.node_count[0], 2u);
}

TEST(FeatureImportance, UnsupportedModel) {
  ml::Dataset d;
  d.x = ml::Matrix(2, 1);
  d.x.row(1)[0] = 1;
  d.y = {Z, P};
  const auto knn = ml::train_model(ml::Algorithm::knn, d, {}, 1);
  EXPECT_THROW(feature_importance(knn), ValidationError);
  const auto tree = ml::train_model(ml::Algorithm::dtree, d, {}, 1);
  EXPECT_NO_THROW(feature_importance(tree));
}

TEST(Ranks, TiesAndConservation) {
  EXPECT_EQ(descending_ranks(std::vector<double>{0.9, 0.1, 0.5}), (std::vector<double>{1, 3, 2}));
  EXPECT_EQ(descending_ranks(std::vector<double>{0.9, 0.5, 0.5, 0.1}), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(descending_ranks(std::vector<double>{0, 0, 0}), (std::vector<double>{2, 2, 2}));
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.below(20);
    std::vector<double> v(k);
    for (auto& x : v) x = static_cast<double>(rng.below(5));
    const auto r = descending_ranks(v);
    double sum = 0;
    for (double x : r) {
      sum += x;
      EXPECT_GE(x, 1.0);
      EXPECT_LE(x, static_cast<double>(k));
    }
    EXPECT_DOUBLE_EQ(sum, k * (k + 1) / 2.0);
  }
}

TEST(Ranks, Average) {
  EXPECT_EQ(average_rank({{0.3, 0.2, 0.1}}), (std::vector<double>{1, 2, 3}));
  const auto avg = average_rank({{0.9, 0.5, 0.1}, {0.1, 0.5, 0.9}});
  EXPECT_EQ(avg, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(average_rank({{0.9, 0.5, 0.1}, {0.0, 0.5, 0.9}})[0], 2.0);
  EXPECT_THROW(average_rank({{1, 2}, {1, 2, 3}}), ValidationError);
}

TEST(CriticalDifference, Formula) {
  for (std::size_t n : {2u, 5u, 10u, 40u})
    EXPECT_NEAR(critical_difference(2, n), nemenyi_q(2, 0.05) * std::sqrt(1.0 / n), 1e-15);
  // k = 5, n = 10: 2.727774 * sqrt(30 / 60).
  EXPECT_NEAR(critical_difference(5, 10, 0.05), 2.727774 * std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(critical_difference(5, 10, 0.05), 1.928827, 1e-6);
}

TEST(CriticalDifference, Errors) {
  try {
    critical_difference(51, 10);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("2..50"), std::string::npos);
  }
  EXPECT_THROW(critical_difference(1, 10), ValidationError);
  EXPECT_THROW(critical_difference(5, 1), ValidationError);
  EXPECT_THROW(nemenyi_q(5, 0.2), ValidationError);
}

TEST(CriticalDifference, EmbeddedTableMatchesDataFile) {
  std::ifstream in(std::string(GRANTLEX_DATA_DIR) + "/nemenyi_q.tsv");
  ASSERT_TRUE(in);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream s(line);
    int k;
    double q01, q05, q10;
    s >> k >> q01 >> q05 >> q10;
    EXPECT_NEAR(nemenyi_q(static_cast<std::size_t>(k), 0.01), q01, 1e-6) << k;
    EXPECT_NEAR(nemenyi_q(static_cast<std::size_t>(k), 0.05), q05, 1e-6) << k;
    EXPECT_NEAR(nemenyi_q(static_cast<std::size_t>(k), 0.10), q10, 1e-6) << k;
    ++rows;
  }
  EXPECT_EQ(rows, kNemenyiTable.size());
  // q grows with k and shrinks with alpha.
  for (std::size_t i = 1; i < kNemenyiTable.size(); ++i) EXPECT_GT(kNemenyiTable[i].q05, kNemenyiTable[i - 1].q05);
  for (const auto& r : kNemenyiTable) {
    EXPECT_GT(r.q01, r.q05);
    EXPECT_GT(r.q05, r.q10);
  }
}

TEST(RelevanceReport, RowsAndFlags) {
  std::vector<FeatureImportance> per;
  for (int r = 0; r < 10; ++r) per.push_back({{0.5, 0.3, 0.2, 0.1, 0.0}, {3, 2, 2, 1, 0}});
  const auto rep = build_relevance_report(per, {"a", "b", "c", "d", "e"}, 0.05);
  ASSERT_TRUE(rep.cd);
  EXPECT_NEAR(*rep.cd, critical_difference(5, 10), 1e-15);
  ASSERT_EQ(rep.rows.size(), 5u);
  EXPECT_EQ(rep.rows[0].feature, "a");
  EXPECT_DOUBLE_EQ(rep.rows[0].average_rank, 1.0);
  EXPECT_EQ(rep.rows[4].feature, "e");
  EXPECT_EQ(rep.rows[4].node_count, 0u);
  EXPECT_FALSE(rep.rows[0].differs_from_best);
  EXPECT_FALSE(rep.rows[1].differs_from_best);  // gap 1 < CD
  EXPECT_TRUE(rep.rows[4].differs_from_best);   // gap 4 > CD
}

TEST(ComputeRelevance, PlantedComplexityFeatureRanksFirst) {
  const auto records = testing::planted_complexity_corpus(17);
  const FeatureConfig cfg;
  const auto lex = LexiconSet::builtin(Language::pt);
  const auto table = build_feature_table(records, cfg, lex);
  RelevanceOptions opt;
  opt.seed = 4;
  opt.jobs = 4;
  opt.model.forest.n_trees = 50;
  const auto rep = compute_relevance(table, cfg, opt);
  ASSERT_FALSE(rep.rows.empty());
  EXPECT_EQ(rep.rows.front().feature, "logical_operator_count");
  EXPECT_EQ(rep.ranks.size(), 10u);
  for (const auto& r : rep.ranks) {
    double sum = 0;
    for (double x : r) sum += x;
    EXPECT_DOUBLE_EQ(sum, 18.0 * 19.0 / 2.0);
  }
  opt.algorithm = ml::Algorithm::linear_svm;
  EXPECT_THROW(compute_relevance(table, cfg, opt), ValidationError);
}

}  // namespace
}  // namespace grantlex
