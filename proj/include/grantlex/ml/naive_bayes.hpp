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

// Naive Bayes: c = argmax_k [ sum_i log P(f_i | c_k) + log P(c_k) ].

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "grantlex/ml/dataset.hpp"

namespace grantlex::ml {

enum class Likelihood { gaussian, multinomial };

class NaiveBayes {
 public:
  static NaiveBayes train(const Dataset& data, Likelihood likelihood, double alpha = 1.0) {
    if (data.size() == 0) throw ValidationError("naive bayes: empty training set");
    NaiveBayes nb;
    nb.likelihood_ = likelihood;
    const std::size_t n = data.size(), d = data.dims();
    std::array<std::size_t, 2> count{0, 0};
    for (auto l : data.y) ++count[static_cast<std::size_t>(as_int(l))];
    for (int c = 0; c < 2; ++c) {
      nb.present_[c] = count[c] > 0;
      nb.log_prior_[c] = count[c] > 0 ? std::log(static_cast<double>(count[c]) / static_cast<double>(n)) : 0.0;
    }

    if (likelihood == Likelihood::gaussian) {
      // Variance floor: 1e-9 times the mean per-feature variance of the
      // whole training set.
      std::vector<double> mean_all(d, 0.0), var_all(d, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean_all[j] += data.x(i, j);
      for (auto& m : mean_all) m /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) var_all[j] += std::pow(data.x(i, j) - mean_all[j], 2);
      double mean_var = 0.0;
      for (auto v : var_all) mean_var += v / static_cast<double>(n);
      mean_var = d ? mean_var / static_cast<double>(d) : 0.0;
      nb.var_floor_ = mean_var > 0.0 ? 1e-9 * mean_var : 1e-9;

      for (int c = 0; c < 2; ++c) {
        nb.mean_[c].assign(d, 0.0);
        nb.var_[c].assign(d, 0.0);
        if (!count[c]) continue;
        for (std::size_t i = 0; i < n; ++i)
          if (as_int(data.y[i]) == c)
            for (std::size_t j = 0; j < d; ++j) nb.mean_[c][j] += data.x(i, j);
        for (auto& m : nb.mean_[c]) m /= static_cast<double>(count[c]);
        for (std::size_t i = 0; i < n; ++i)
          if (as_int(data.y[i]) == c)
            for (std::size_t j = 0; j < d; ++j) nb.var_[c][j] += std::pow(data.x(i, j) - nb.mean_[c][j], 2);
        for (auto& v : nb.var_[c]) v = v / static_cast<double>(count[c]) + nb.var_floor_;
      }
    } else {
      for (int c = 0; c < 2; ++c) {
        std::vector<double> totals(d, 0.0);
        double all = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (as_int(data.y[i]) != c) continue;
          for (std::size_t j = 0; j < d; ++j) {
            const double v = data.x(i, j);
            if (v < 0.0) throw ValidationError("multinomial naive bayes needs non-negative features");
            totals[j] += v;
            all += v;
          }
        }
        nb.log_theta_[c].resize(d);
        const double denom = all + alpha * static_cast<double>(d);
        for (std::size_t j = 0; j < d; ++j) nb.log_theta_[c][j] = std::log((totals[j] + alpha) / denom);
      }
    }
    return nb;
  }

  // sum_i log P(f_i | c), without the prior.
  double log_likelihood(std::span<const double> x, Label cls) const {
    const auto c = static_cast<std::size_t>(as_int(cls));
    double s = 0.0;
    if (likelihood_ == Likelihood::gaussian) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = var_[c][j];
        s += -0.5 * std::log(2.0 * std::numbers::pi * v) - (x[j] - mean_[c][j]) * (x[j] - mean_[c][j]) / (2.0 * v);
      }
    } else {
      for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * log_theta_[c][j];
    }
    return s;
  }

  double log_prior(Label cls) const { return log_prior_[static_cast<std::size_t>(as_int(cls))]; }

  // Ties go to ZeroPublications.
  Label predict(std::span<const double> x, bool use_prior = true) const {
    if (!present_[0]) return Label::Productive;
    if (!present_[1]) return Label::ZeroPublications;
    double score[2];
    for (int c = 0; c < 2; ++c) {
      score[c] = log_likelihood(x, as_label(c));
      if (use_prior) score[c] += log_prior_[c];
    }
    return score[1] > score[0] ? Label::Productive : Label::ZeroPublications;
  }

  Likelihood likelihood() const { return likelihood_; }
  double variance_floor() const { return var_floor_; }
  const std::vector<double>& means(Label c) const { return mean_[static_cast<std::size_t>(as_int(c))]; }
  const std::vector<double>& variances(Label c) const { return var_[static_cast<std::size_t>(as_int(c))]; }

 private:
  Likelihood likelihood_ = Likelihood::gaussian;
  std::array<bool, 2> present_{false, false};
  std::array<double, 2> log_prior_{0.0, 0.0};
  std::array<std::vector<double>, 2> mean_, var_, log_theta_;
  double var_floor_ = 0.0;
};

}  // namespace grantlex::ml
