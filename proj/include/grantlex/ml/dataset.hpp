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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grantlex/common.hpp"
#include "grantlex/corpus.hpp"

namespace grantlex::ml {

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) std::copy_n(row(idx[i]).begin(), cols_, out.row(i).begin());
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Training/test data: features plus one label per row.
struct Dataset {
  Matrix x;
  std::vector<Label> y;

  std::size_t size() const { return y.size(); }
  std::size_t dims() const { return x.cols(); }

  Dataset subset(std::span<const std::size_t> idx) const {
    Dataset out;
    out.x = x.select_rows(idx);
    out.y.reserve(idx.size());
    for (auto i : idx) out.y.push_back(y[i]);
    return out;
  }

  std::size_t count(Label l) const { return static_cast<std::size_t>(std::count(y.begin(), y.end(), l)); }
};

inline int as_int(Label l) { return l == Label::Productive ? 1 : 0; }
inline Label as_label(int v) { return v ? Label::Productive : Label::ZeroPublications; }

inline Fingerprint fingerprint_of(const Dataset& d, std::uint64_t seed) {
  Fingerprint fp;
  fp.add(d.x.rows());
  fp.add(d.x.cols());
  if (!d.x.data().empty()) fp.add_bytes(d.x.data().data(), d.x.data().size() * sizeof(double));
  for (auto l : d.y) fp.add(as_int(l));
  fp.add(seed);
  return fp;
}

// Column medians over rows with a value; columns with no value impute 0.
class MedianImputer {
 public:
  static MedianImputer fit(std::span<const std::vector<std::optional<double>>> rows) {
    MedianImputer m;
    if (rows.empty()) return m;
    const std::size_t d = rows.front().size();
    m.medians_.assign(d, 0.0);
    std::vector<double> col;
    for (std::size_t j = 0; j < d; ++j) {
      col.clear();
      for (const auto& r : rows)
        if (r[j]) col.push_back(*r[j]);
      if (col.empty()) continue;
      std::sort(col.begin(), col.end());
      const std::size_t n = col.size();
      m.medians_[j] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    }
    return m;
  }

  std::vector<double> apply(std::span<const std::optional<double>> row) const {
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = row[j] ? *row[j] : medians_.at(j);
    return out;
  }

  const std::vector<double>& medians() const { return medians_; }
  bool operator==(const MedianImputer&) const = default;

 private:
  std::vector<double> medians_;
};

// z-score with training statistics; constant columns are only centred.
class Standardizer {
 public:
  static Standardizer fit(const Matrix& x) {
    Standardizer s;
    const std::size_t n = x.rows(), d = x.cols();
    s.mean_.assign(d, 0.0);
    s.scale_.assign(d, 1.0);
    if (n == 0) return s;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) s.mean_[j] += x(i, j);
    for (auto& m : s.mean_) m /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double dv = x(i, j) - s.mean_[j];
        var[j] += dv * dv;
      }
    for (std::size_t j = 0; j < d; ++j) {
      const double sd = std::sqrt(var[j] / static_cast<double>(n));
      s.scale_[j] = sd > 0.0 ? sd : 1.0;
    }
    return s;
  }

  void apply(Matrix& x) const {
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = (x(i, j) - mean_[j]) / scale_[j];
  }

  bool operator==(const Standardizer&) const = default;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

}  // namespace grantlex::ml
