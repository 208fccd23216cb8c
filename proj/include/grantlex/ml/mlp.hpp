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

// Feed-forward network: tanh hidden layers, one sigmoid output unit, mean
// binary cross-entropy loss, mini-batch gradient descent. Each unit computes
// s = sum_i w_i a_i + b before its transfer function.

#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "grantlex/ml/dataset.hpp"

namespace grantlex::ml {

struct MlpParams {
  std::vector<std::size_t> hidden = {16};  // empty: a single output neuron
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
};

class Mlp {
 public:
  // Layer widths from input to output, e.g. {d, 16, 1}.
  static std::vector<std::size_t> layout_for(std::size_t inputs, std::span<const std::size_t> hidden) {
    for (auto h : hidden)
      if (h == 0) throw ValidationError("MLP: hidden layers must have at least one unit");
    std::vector<std::size_t> layout{inputs};
    layout.insert(layout.end(), hidden.begin(), hidden.end());
    layout.push_back(1);
    return layout;
  }

  // Weights (row-major, out x in) then biases, layer by layer.
  static std::size_t parameter_count(std::span<const std::size_t> layout) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layout.size(); ++l) n += layout[l + 1] * layout[l] + layout[l + 1];
    return n;
  }

  static std::vector<double> initial_parameters(std::span<const std::size_t> layout, Rng& rng) {
    std::vector<double> p;
    p.reserve(parameter_count(layout));
    for (std::size_t l = 0; l + 1 < layout.size(); ++l) {
      const double r = std::sqrt(6.0 / static_cast<double>(layout[l] + layout[l + 1]));
      for (std::size_t i = 0; i < layout[l + 1] * layout[l]; ++i) p.push_back(rng.uniform(-r, r));
      for (std::size_t i = 0; i < layout[l + 1]; ++i) p.push_back(0.0);
    }
    return p;
  }

  // Mean cross-entropy over `rows` and its gradient with respect to `params`.
  static std::pair<double, std::vector<double>> loss_and_gradient(std::span<const std::size_t> layout,
                                                                  std::span<const double> params, const Matrix& x,
                                                                  std::span<const Label> y,
                                                                  std::span<const std::size_t> rows) {
    std::vector<double> grad(params.size(), 0.0);
    double loss = 0.0;
    const std::size_t layers = layout.size() - 1;
    std::vector<std::vector<double>> act(layout.size());
    std::vector<double> delta, next_delta;
    for (auto r : rows) {
      forward(layout, params, x.row(r), act);
      const double p = act.back()[0];
      const double t = y[r] == Label::Productive ? 1.0 : 0.0;
      const double eps = 1e-15;
      loss -= t * std::log(std::max(p, eps)) + (1.0 - t) * std::log(std::max(1.0 - p, eps));
      // dL/ds at the sigmoid output unit.
      delta.assign(1, p - t);
      std::size_t offset = params.size();
      for (std::size_t l = layers; l-- > 0;) {
        const std::size_t in = layout[l], out = layout[l + 1];
        offset -= out * in + out;
        const std::size_t w0 = offset, b0 = offset + out * in;
        for (std::size_t o = 0; o < out; ++o) {
          for (std::size_t i = 0; i < in; ++i) grad[w0 + o * in + i] += delta[o] * act[l][i];
          grad[b0 + o] += delta[o];
        }
        if (l == 0) break;
        next_delta.assign(in, 0.0);
        for (std::size_t o = 0; o < out; ++o)
          for (std::size_t i = 0; i < in; ++i) next_delta[i] += params[w0 + o * in + i] * delta[o];
        for (std::size_t i = 0; i < in; ++i) next_delta[i] *= 1.0 - act[l][i] * act[l][i];  // tanh'
        std::swap(delta, next_delta);
      }
    }
    const double n = static_cast<double>(rows.size());
    for (auto& g : grad) g /= n;
    return {loss / n, std::move(grad)};
  }

  static Mlp train(const Dataset& data, const MlpParams& params, std::uint64_t seed) {
    if (data.size() == 0) throw ValidationError("MLP: empty training set");
    if (!(params.learning_rate > 0.0) || params.epochs == 0 || params.batch_size == 0)
      throw ValidationError("MLP: learning rate, epochs and batch size must be positive");
    Mlp m;
    m.layout_ = layout_for(data.dims(), params.hidden);
    Rng rng(seed);
    m.params_ = initial_parameters(m.layout_, rng);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t e = 0; e < params.epochs; ++e) {
      rng.shuffle(order);
      double epoch_loss = 0.0;
      for (std::size_t b = 0; b < order.size(); b += params.batch_size) {
        const std::size_t end = std::min(order.size(), b + params.batch_size);
        const std::span<const std::size_t> batch(order.data() + b, end - b);
        auto [loss, grad] = loss_and_gradient(m.layout_, m.params_, data.x, data.y, batch);
        if (!std::isfinite(loss)) {
          std::ostringstream msg;
          msg << "MLP: non-finite loss at epoch " << e << ", batch starting at " << b << " (learning rate "
              << params.learning_rate << ")";
          throw RuntimeFailure(msg.str());
        }
        epoch_loss += loss * static_cast<double>(batch.size());
        for (std::size_t i = 0; i < grad.size(); ++i) m.params_[i] -= params.learning_rate * grad[i];
      }
      m.final_loss_ = epoch_loss / static_cast<double>(order.size());
    }
    return m;
  }

  double probability(std::span<const double> x) const {
    std::vector<std::vector<double>> act(layout_.size());
    forward(layout_, params_, x, act);
    return act.back()[0];
  }

  Label predict(std::span<const double> x) const {
    return probability(x) > 0.5 ? Label::Productive : Label::ZeroPublications;
  }

  const std::vector<std::size_t>& layout() const { return layout_; }
  const std::vector<double>& parameters() const { return params_; }
  double final_loss() const { return final_loss_; }

 private:
  static void forward(std::span<const std::size_t> layout, std::span<const double> params,
                      std::span<const double> input, std::vector<std::vector<double>>& act) {
    act[0].assign(input.begin(), input.end());
    std::size_t offset = 0;
    const std::size_t layers = layout.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t in = layout[l], out = layout[l + 1];
      const std::size_t w0 = offset, b0 = offset + out * in;
      act[l + 1].assign(out, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        double s = params[b0 + o];
        for (std::size_t i = 0; i < in; ++i) s += params[w0 + o * in + i] * act[l][i];
        act[l + 1][o] = l + 1 == layers ? 1.0 / (1.0 + std::exp(-s)) : std::tanh(s);
      }
      offset += out * in + out;
    }
  }

  std::vector<std::size_t> layout_;
  std::vector<double> params_;
  double final_loss_ = 0.0;
};

}  // namespace grantlex::ml
