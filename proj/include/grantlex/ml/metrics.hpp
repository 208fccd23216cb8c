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
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "grantlex/corpus.hpp"

namespace grantlex::ml {

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t correct() const { return tp + tn; }
  std::size_t total() const { return tp + fp + fn + tn; }

  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
};

inline Confusion confusion(std::span<const Label> predicted, std::span<const Label> truth,
                           Label positive = Label::Productive) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("prediction/truth length mismatch: " + std::to_string(predicted.size()) + " vs " +
                                std::to_string(truth.size()));
  Confusion c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == positive, t = truth[i] == positive;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

// F1 of the positive class; 0 when precision + recall = 0.
inline double f1_from(const Confusion& c) {
  const double p = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  const double r = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

inline double f1_score(std::span<const Label> predicted, std::span<const Label> truth,
                       Label positive = Label::Productive) {
  return f1_from(confusion(predicted, truth, positive));
}

inline double macro_f1(std::span<const Label> predicted, std::span<const Label> truth) {
  return 0.5 * (f1_score(predicted, truth, Label::Productive) + f1_score(predicted, truth, Label::ZeroPublications));
}

// P[Binomial(n_total, p) >= n_correct], summed in log space.
inline double significance_pvalue(std::size_t n_correct, std::size_t n_total, double p_dominant) {
  if (n_correct > n_total) throw std::invalid_argument("significance_pvalue: n_correct > n_total");
  if (!(p_dominant > 0.0 && p_dominant < 1.0))
    throw std::invalid_argument("significance_pvalue: p_dominant must lie in (0, 1)");
  if (n_correct == 0) return 1.0;
  const double n = static_cast<double>(n_total);
  const double lp = std::log(p_dominant), lq = std::log1p(-p_dominant);
  const double lgn = std::lgamma(n + 1.0);
  std::vector<double> logs;
  logs.reserve(n_total - n_correct + 1);
  for (std::size_t j = n_correct; j <= n_total; ++j) {
    const double k = static_cast<double>(j);
    logs.push_back(lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp + (n - k) * lq);
  }
  const double mx = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - mx);
  return std::clamp(std::exp(mx + std::log(sum)), 0.0, 1.0);
}

}  // namespace grantlex::ml
