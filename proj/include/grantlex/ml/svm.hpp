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

// Linear SVM trained by stochastic subgradient descent (Pegasos) on
//   lambda/2 ||w||^2 + 1/n sum_i max(0, 1 - y_i (w.x_i + b)),  lambda = 1/(C n).
// The bias is handled as a weight on a constant input of 1. The returned
// weights are the average of the iterates from the second half of training.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "grantlex/ml/dataset.hpp"
#include "grantlex/ml/metrics.hpp"

namespace grantlex::ml {

struct SvmParams {
  double c = 1.0;
  std::size_t epochs = 50;
};

inline constexpr std::array<double, 4> kSvmCGrid = {0.01, 0.1, 1.0, 10.0};

class LinearSvm {
 public:
  static LinearSvm train(const Dataset& data, const SvmParams& params, std::uint64_t seed) {
    if (data.size() == 0) throw ValidationError("linear SVM: empty training set");
    if (!(params.c > 0.0) || params.epochs == 0) throw ValidationError("linear SVM: need C > 0 and epochs > 0");
    LinearSvm svm;
    const std::size_t n = data.size(), d = data.dims();
    const std::size_t pos = data.count(Label::Productive);
    if (pos == 0 || pos == n) {
      svm.constant_ = pos ? Label::Productive : Label::ZeroPublications;
      svm.w_.assign(d, 0.0);
      return svm;
    }
    const double lambda = 1.0 / (params.c * static_cast<double>(n));
    std::vector<double> w(d + 1, 0.0), avg(d + 1, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    const std::size_t total = params.epochs * n;
    const std::size_t average_from = total / 2;
    std::size_t t = 0, averaged = 0;
    for (std::size_t e = 0; e < params.epochs; ++e) {
      rng.shuffle(order);
      for (auto i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const auto x = data.x.row(i);
        const double y = data.y[i] == Label::Productive ? 1.0 : -1.0;
        double score = w[d];
        for (std::size_t j = 0; j < d; ++j) score += w[j] * x[j];
        const double shrink = 1.0 - eta * lambda;
        for (auto& wj : w) wj *= shrink;
        if (y * score < 1.0) {
          for (std::size_t j = 0; j < d; ++j) w[j] += eta * y * x[j];
          w[d] += eta * y;
        }
        if (t > average_from) {
          ++averaged;
          const double a = 1.0 / static_cast<double>(averaged);
          for (std::size_t j = 0; j <= d; ++j) avg[j] += a * (w[j] - avg[j]);
        }
      }
    }
    svm.bias_ = avg[d];
    avg.pop_back();
    svm.w_ = std::move(avg);
    return svm;
  }

  double decision(std::span<const double> x) const {
    double s = bias_;
    for (std::size_t j = 0; j < w_.size(); ++j) s += w_[j] * x[j];
    return s;
  }

  Label predict(std::span<const double> x) const {
    if (constant_) return *constant_;
    return decision(x) > 0.0 ? Label::Productive : Label::ZeroPublications;
  }

  const std::vector<double>& weights() const { return w_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> w_;
  double bias_ = 0.0;
  std::optional<Label> constant_;
};

// C from `grid` by mean inner-fold F1; ties prefer the smaller C.
inline double select_c(const Dataset& train, std::span<const double> grid, std::size_t epochs, int inner_folds,
                       std::uint64_t seed) {
  if (grid.size() == 1 || train.size() < 2 || inner_folds < 2) return grid.empty() ? 1.0 : grid[0];
  const auto folds = stratified_kfold(train.y, std::min<int>(inner_folds, static_cast<int>(train.size())), seed);
  double best = grid.empty() ? 1.0 : grid[0];
  double best_f1 = -1.0;
  for (double c : grid) {
    double sum = 0.0;
    int n = 0;
    for (int f = 0; f < folds.k; ++f) {
      const auto tr = folds.train_indices(f), te = folds.test_indices(f);
      if (tr.empty() || te.empty()) continue;
      const auto inner = train.subset(tr);
      const auto model = LinearSvm::train(inner, {c, epochs}, derive_seed(seed, static_cast<std::uint64_t>(f)));
      std::vector<Label> pred, truth;
      for (auto i : te) {
        pred.push_back(model.predict(train.x.row(i)));
        truth.push_back(train.y[i]);
      }
      sum += f1_score(pred, truth);
      ++n;
    }
    if (n && sum / n > best_f1 + 1e-12) {
      best_f1 = sum / n;
      best = c;
    }
  }
  return best;
}

}  // namespace grantlex::ml
