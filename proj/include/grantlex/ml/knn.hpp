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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "grantlex/ml/dataset.hpp"
#include "grantlex/ml/metrics.hpp"

namespace grantlex::ml {

enum class DistanceMetric { euclidean, cosine };

inline constexpr std::array<std::size_t, 6> kKnnGrid = {1, 3, 5, 7, 11, 15};

inline double distance(std::span<const double> a, std::span<const double> b, DistanceMetric m) {
  if (m == DistanceMetric::euclidean) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dot += a[j] * b[j];
    na += a[j] * a[j];
    nb += b[j] * b[j];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / std::sqrt(na * nb);
}

class Knn {
 public:
  Knn(Dataset train, std::size_t k, DistanceMetric metric = DistanceMetric::euclidean)
      : train_(std::move(train)), k_(k), metric_(metric) {
    if (train_.size() == 0) throw ValidationError("kNN: empty training set");
    if (k_ < 1 || k_ > train_.size()) throw ValidationError("kNN: k must lie in [1, |train|]");
  }

  // Training indices ordered by (distance, index).
  std::vector<std::size_t> neighbours(std::span<const double> query) const {
    std::vector<std::pair<double, std::size_t>> d(train_.size());
    for (std::size_t i = 0; i < train_.size(); ++i) d[i] = {distance(train_.x.row(i), query, metric_), i};
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].second;
    return out;
  }

  // Majority among the k nearest; a tied vote goes to the nearest neighbour's
  // class. Equal distances are ordered by training index.
  static Label vote(std::span<const std::size_t> ordered, std::span<const Label> labels, std::size_t k) {
    std::array<std::size_t, 2> v{0, 0};
    for (std::size_t i = 0; i < k; ++i) ++v[static_cast<std::size_t>(as_int(labels[ordered[i]]))];
    if (v[0] == v[1]) return labels[ordered[0]];
    return v[1] > v[0] ? Label::Productive : Label::ZeroPublications;
  }

  Label predict(std::span<const double> query) const { return vote(neighbours(query), train_.y, k_); }

  std::size_t k() const { return k_; }
  DistanceMetric metric() const { return metric_; }

 private:
  Dataset train_;
  std::size_t k_;
  DistanceMetric metric_;
};

inline Label knn_predict(const Dataset& train, std::span<const double> query, std::size_t k,
                         DistanceMetric metric = DistanceMetric::euclidean) {
  return Knn(train, k, metric).predict(query);
}

// Picks k from `grid` by mean F1 over an inner stratified split of the
// training data; ties prefer the smaller k.
inline std::size_t select_k(const Dataset& train, std::span<const std::size_t> grid, DistanceMetric metric,
                            int inner_folds, std::uint64_t seed) {
  if (train.size() < 2 || inner_folds < 2) return 1;
  const auto folds = stratified_kfold(train.y, std::min<int>(inner_folds, static_cast<int>(train.size())), seed);
  std::vector<double> f1_sum(grid.size(), 0.0);
  std::vector<int> f1_n(grid.size(), 0);
  for (int f = 0; f < folds.k; ++f) {
    const auto tr = folds.train_indices(f), te = folds.test_indices(f);
    if (tr.empty() || te.empty()) continue;
    const Dataset inner = train.subset(tr);
    const Knn probe(inner, 1, metric);
    std::vector<std::vector<std::size_t>> orders;
    orders.reserve(te.size());
    std::vector<Label> truth;
    for (auto i : te) {
      orders.push_back(probe.neighbours(train.x.row(i)));
      truth.push_back(train.y[i]);
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (grid[g] > inner.size()) continue;
      std::vector<Label> pred;
      for (const auto& o : orders) pred.push_back(Knn::vote(o, inner.y, grid[g]));
      f1_sum[g] += f1_score(pred, truth);
      ++f1_n[g];
    }
  }
  std::size_t best = grid.empty() ? 1 : grid[0];
  double best_f1 = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!f1_n[g]) continue;
    const double m = f1_sum[g] / f1_n[g];
    if (m > best_f1 + 1e-12) {
      best_f1 = m;
      best = grid[g];
    }
  }
  return std::min(best, train.size());
}

}  // namespace grantlex::ml
