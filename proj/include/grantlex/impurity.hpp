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

// Gini impurity and the weighted impurity decrease of a binary split.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace grantlex {

// G = sum_i p_i (1 - p_i)
inline double gini_impurity(std::span<const double> p) {
  double sum = 0.0, g = 0.0;
  for (double pi : p) {
    if (pi < 0.0) throw std::invalid_argument("gini_impurity: negative probability");
    sum += pi;
    g += pi * (1.0 - pi);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("gini_impurity: probabilities must sum to 1");
  return g;
}

inline double gini_impurity(double p0, double p1) {
  const double p[2] = {p0, p1};
  return gini_impurity(p);
}

// Gini impurity of a node from its two class counts (0 for an empty node).
inline double gini_from_counts(double c0, double c1) {
  const double n = c0 + c1;
  if (n <= 0.0) return 0.0;
  const double p0 = c0 / n, p1 = c1 / n;
  return p0 * (1.0 - p0) + p1 * (1.0 - p1);
}

// dG = G_before - (n_l/n) G_left - (n_r/n) G_right
inline double impurity_decrease(double g_before, double g_left, double g_right, std::size_t n_left,
                                std::size_t n_right) {
  const std::size_t n = n_left + n_right;
  if (n == 0) throw std::invalid_argument("impurity_decrease: both children are empty");
  const double bl = static_cast<double>(n_left) / static_cast<double>(n);
  const double br = static_cast<double>(n_right) / static_cast<double>(n);
  return g_before - bl * g_left - br * g_right;
}

// Impurity bookkeeping of one internal tree node.
struct ImpurityRecord {
  std::size_t node_id = 0;
  std::size_t feature = 0;
  double g_before = 0.0;
  double g_left = 0.0;
  double g_right = 0.0;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  double delta_g = 0.0;
};

}  // namespace grantlex
