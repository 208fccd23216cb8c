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

// Binary decision trees over continuous features and bagged forests of them.
//
// Splits are thresholds at midpoints between consecutive distinct values
// (x <= t goes left). The split criterion defaults to information gain,
// H(D) - sum_j |D_j|/|D| H(D_j), with entropy in bits. Every internal node
// also stores its Gini impurity decrease for importance analysis.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "grantlex/common.hpp"
#include "grantlex/impurity.hpp"
#include "grantlex/ml/dataset.hpp"

namespace grantlex::ml {

enum class SplitCriterion { entropy, gini };

inline double entropy_bits(double c0, double c1) {
  const double n = c0 + c1;
  if (n <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : {c0, c1})
    if (c > 0.0) h -= (c / n) * std::log2(c / n);
  return h;
}

inline double node_impurity(SplitCriterion crit, double c0, double c1) {
  return crit == SplitCriterion::entropy ? entropy_bits(c0, c1) : gini_from_counts(c0, c1);
}

struct TreeParams {
  SplitCriterion criterion = SplitCriterion::entropy;
  int max_depth = 0;  // 0: unlimited
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // candidate features per node; 0: all
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Label prediction = Label::ZeroPublications;
  std::array<std::size_t, 2> class_counts{0, 0};
  double gain = 0.0;  // criterion decrease of the split
  std::optional<ImpurityRecord> impurity;

  bool is_leaf() const { return feature < 0; }
};

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = -1.0;
  std::array<std::size_t, 2> left_counts{0, 0};
};

namespace detail {

struct ValueGroup {
  double value;
  std::array<std::size_t, 2> counts;
};

// Sorted distinct values of `column` over `rows` with per-class counts.
// Zeros are counted in one pass and only non-zero entries are sorted, which
// keeps sparse term features cheap.
inline void value_groups(std::span<const double> column, std::span<const std::size_t> rows,
                         std::span<const Label> labels, std::vector<std::pair<double, int>>& scratch,
                         std::vector<ValueGroup>& groups) {
  scratch.clear();
  groups.clear();
  std::array<std::size_t, 2> zero{0, 0};
  for (auto r : rows) {
    const double v = column[r];
    if (v == 0.0) ++zero[static_cast<std::size_t>(as_int(labels[r]))];
    else scratch.emplace_back(v, as_int(labels[r]));
  }
  std::sort(scratch.begin(), scratch.end());
  bool zero_done = zero[0] + zero[1] == 0;
  auto push = [&](double v, std::array<std::size_t, 2> c) {
    if (!groups.empty() && groups.back().value == v) {
      groups.back().counts[0] += c[0];
      groups.back().counts[1] += c[1];
    } else {
      groups.push_back({v, c});
    }
  };
  for (const auto& [v, cls] : scratch) {
    if (!zero_done && v > 0.0) {
      push(0.0, zero);
      zero_done = true;
    }
    std::array<std::size_t, 2> c{0, 0};
    ++c[static_cast<std::size_t>(cls)];
    push(v, c);
  }
  if (!zero_done) push(0.0, zero);
}

}  // namespace detail

class DecisionTree {
 public:
  // Trains on the rows `rows` of `data` (repeats allowed, for bootstrap).
  static DecisionTree train(const Dataset& data, std::span<const std::size_t> rows, const TreeParams& params,
                            std::uint64_t seed = 0) {
    if (rows.empty()) throw ValidationError("decision tree: empty training set");
    DecisionTree tree;
    tree.n_features_ = data.dims();
    Builder b{data, params, Rng(seed), tree.nodes_, {}, {}, {}};
    b.columns.resize(data.dims());
    for (std::size_t j = 0; j < data.dims(); ++j) {
      b.columns[j].resize(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) b.columns[j][i] = data.x(i, j);
    }
    std::vector<std::size_t> root(rows.begin(), rows.end());
    b.grow(root, 0, Label::ZeroPublications);
    return tree;
  }

  static DecisionTree train(const Dataset& data, const TreeParams& params = {}, std::uint64_t seed = 0) {
    std::vector<std::size_t> rows(data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return train(data, rows, params, seed);
  }

  Label predict(std::span<const double> x) const {
    int n = 0;
    while (!nodes_[static_cast<std::size_t>(n)].is_leaf()) {
      const auto& node = nodes_[static_cast<std::size_t>(n)];
      n = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(n)].prediction;
  }

  std::vector<ImpurityRecord> impurity_records() const {
    std::vector<ImpurityRecord> out;
    for (const auto& n : nodes_)
      if (n.impurity) out.push_back(*n.impurity);
    return out;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }

 private:
  struct Builder {
    const Dataset& data;
    const TreeParams& params;
    Rng rng;
    std::vector<TreeNode>& nodes;
    std::vector<std::vector<double>> columns;
    std::vector<std::pair<double, int>> scratch;
    std::vector<detail::ValueGroup> groups;

    std::optional<SplitChoice> best_on(std::size_t f, std::span<const std::size_t> rows,
                                       std::array<std::size_t, 2> total, double parent) {
      detail::value_groups(columns[f], rows, data.y, scratch, groups);
      if (groups.size() < 2) return std::nullopt;
      const double n = static_cast<double>(rows.size());
      std::optional<SplitChoice> best;
      std::array<std::size_t, 2> left{0, 0};
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        left[0] += groups[g].counts[0];
        left[1] += groups[g].counts[1];
        const std::size_t nl = left[0] + left[1];
        const std::size_t nr = rows.size() - nl;
        if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
        const double hl = node_impurity(params.criterion, static_cast<double>(left[0]), static_cast<double>(left[1]));
        const double hr = node_impurity(params.criterion, static_cast<double>(total[0] - left[0]),
                                        static_cast<double>(total[1] - left[1]));
        const double gain = parent - (static_cast<double>(nl) / n) * hl - (static_cast<double>(nr) / n) * hr;
        if (!best || gain > best->gain + 1e-12) {
          const double t = 0.5 * (groups[g].value + groups[g + 1].value);
          best = SplitChoice{f, t, gain, left};
        }
      }
      return best;
    }

    int grow(std::vector<std::size_t>& rows, int depth, Label parent_prediction) {
      const int id = static_cast<int>(nodes.size());
      nodes.emplace_back();
      std::array<std::size_t, 2> counts{0, 0};
      for (auto r : rows) ++counts[static_cast<std::size_t>(as_int(data.y[r]))];
      {
        auto& node = nodes.back();
        node.class_counts = counts;
        node.prediction = counts[1] > counts[0]   ? Label::Productive
                          : counts[0] > counts[1] ? Label::ZeroPublications
                                                  : parent_prediction;
      }
      const Label here = nodes.back().prediction;
      const bool pure = counts[0] == 0 || counts[1] == 0;
      if (pure || rows.size() < params.min_samples_split || (params.max_depth > 0 && depth >= params.max_depth))
        return id;

      const double parent = node_impurity(params.criterion, static_cast<double>(counts[0]), static_cast<double>(counts[1]));
      const std::size_t d = data.dims();
      const std::size_t k = params.max_features == 0 || params.max_features >= d ? d : params.max_features;

      std::optional<SplitChoice> best;
      auto consider = [&](std::size_t f) {
        auto s = best_on(f, rows, counts, parent);
        if (s && (!best || s->gain > best->gain + 1e-12)) best = s;
      };
      if (k == d) {
        for (std::size_t f = 0; f < d; ++f) consider(f);
      } else {
        std::vector<std::size_t> order(d);
        for (std::size_t f = 0; f < d; ++f) order[f] = f;
        rng.shuffle(order);
        std::vector<std::size_t> subset(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(subset.begin(), subset.end());
        for (auto f : subset) consider(f);
        // Keep drawing when every sampled feature is constant on this node.
        for (std::size_t i = k; !best && i < d; ++i) consider(order[i]);
      }
      if (!best) return id;

      std::vector<std::size_t> left_rows, right_rows;
      for (auto r : rows) (columns[best->feature][r] <= best->threshold ? left_rows : right_rows).push_back(r);
      rows.clear();
      rows.shrink_to_fit();

      ImpurityRecord rec;
      rec.node_id = static_cast<std::size_t>(id);
      rec.feature = best->feature;
      rec.g_before = gini_from_counts(static_cast<double>(counts[0]), static_cast<double>(counts[1]));
      rec.g_left = gini_from_counts(static_cast<double>(best->left_counts[0]), static_cast<double>(best->left_counts[1]));
      rec.g_right = gini_from_counts(static_cast<double>(counts[0] - best->left_counts[0]),
                                     static_cast<double>(counts[1] - best->left_counts[1]));
      rec.n_left = left_rows.size();
      rec.n_right = right_rows.size();
      rec.delta_g = impurity_decrease(rec.g_before, rec.g_left, rec.g_right, rec.n_left, rec.n_right);

      const SplitChoice chosen = *best;
      const int l = grow(left_rows, depth + 1, here);
      const int r = grow(right_rows, depth + 1, here);
      auto& node = nodes[static_cast<std::size_t>(id)];
      node.feature = static_cast<int>(chosen.feature);
      node.threshold = chosen.threshold;
      node.gain = chosen.gain;
      node.left = l;
      node.right = r;
      node.impurity = rec;
      return id;
    }
  };

  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_features = 0;  // 0: floor(sqrt(d)), at least 1
  bool bootstrap = true;
  TreeParams tree{};
};

class RandomForest {
 public:
  static RandomForest train(const Dataset& data, const ForestParams& params, std::uint64_t seed) {
    if (data.size() == 0) throw ValidationError("random forest: empty training set");
    if (params.n_trees == 0) throw ValidationError("random forest: n_trees must be positive");
    RandomForest forest;
    TreeParams tp = params.tree;
    const std::size_t d = data.dims();
    tp.max_features = params.max_features == 0
                          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))))
                          : params.max_features;
    std::vector<std::size_t> rows(data.size());
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      const std::uint64_t tree_seed = derive_seed(seed, t);
      Rng rng(tree_seed);
      if (params.bootstrap) {
        for (auto& r : rows) r = static_cast<std::size_t>(rng.below(data.size()));
      } else {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      }
      forest.trees_.push_back(DecisionTree::train(data, rows, tp, rng.next()));
    }
    return forest;
  }

  // Per-class vote counts {ZeroPublications, Productive}.
  std::array<std::size_t, 2> votes(std::span<const double> x) const {
    std::array<std::size_t, 2> v{0, 0};
    for (const auto& t : trees_) ++v[static_cast<std::size_t>(as_int(t.predict(x)))];
    return v;
  }

  // Majority vote; a tied vote predicts ZeroPublications.
  Label predict(std::span<const double> x) const {
    const auto v = votes(x);
    return v[1] > v[0] ? Label::Productive : Label::ZeroPublications;
  }

  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
};

}  // namespace grantlex::ml
