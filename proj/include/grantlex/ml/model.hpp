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

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "grantlex/ml/dataset.hpp"
#include "grantlex/ml/knn.hpp"
#include "grantlex/ml/mlp.hpp"
#include "grantlex/ml/naive_bayes.hpp"
#include "grantlex/ml/svm.hpp"
#include "grantlex/ml/tree.hpp"

namespace grantlex::ml {

enum class Algorithm { dtree, random_forest, knn, naive_bayes, linear_svm, mlp };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dtree: return "dtrees";
    case Algorithm::random_forest: return "rforest";
    case Algorithm::knn: return "knn";
    case Algorithm::naive_bayes: return "bayes";
    case Algorithm::linear_svm: return "svm";
    case Algorithm::mlp: return "mlp";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "dtrees" || s == "dtree") return Algorithm::dtree;
  if (s == "rforest" || s == "random_forest") return Algorithm::random_forest;
  if (s == "knn") return Algorithm::knn;
  if (s == "bayes" || s == "naive_bayes") return Algorithm::naive_bayes;
  if (s == "svm" || s == "linear_svm") return Algorithm::linear_svm;
  if (s == "mlp") return Algorithm::mlp;
  throw ValidationError("unknown algorithm '" + s + "' (expected dtrees, rforest, knn, bayes, svm, mlp or all)");
}

// The five families compared in the evaluation tables.
inline std::vector<Algorithm> all_algorithms() {
  return {Algorithm::dtree, Algorithm::linear_svm, Algorithm::knn, Algorithm::naive_bayes, Algorithm::mlp};
}

// kNN, SVM and MLP see z-scored inputs.
inline bool wants_standardized(Algorithm a) {
  return a == Algorithm::knn || a == Algorithm::linear_svm || a == Algorithm::mlp;
}

struct ModelConfig {
  TreeParams tree{};
  ForestParams forest{};
  std::vector<std::size_t> knn_grid{kKnnGrid.begin(), kKnnGrid.end()};
  DistanceMetric knn_metric = DistanceMetric::euclidean;
  Likelihood nb_likelihood = Likelihood::gaussian;
  std::vector<double> svm_c_grid{kSvmCGrid.begin(), kSvmCGrid.end()};
  std::size_t svm_epochs = 50;
  MlpParams mlp{};
  int inner_folds = 3;
};

using ModelState = std::variant<DecisionTree, RandomForest, Knn, NaiveBayes, LinearSvm, Mlp>;

struct TrainedModel {
  Algorithm algorithm = Algorithm::dtree;
  ModelState state;
  nlohmann::ordered_json hyperparameters;
  std::uint64_t fingerprint = 0;

  Label predict(std::span<const double> x) const {
    return std::visit([&](const auto& m) { return m.predict(x); }, state);
  }
};

inline TrainedModel train_model(Algorithm algo, const Dataset& train, const ModelConfig& cfg, std::uint64_t seed) {
  if (train.size() == 0) throw ValidationError(to_string(algo) + ": empty training set");
  nlohmann::ordered_json hp;
  auto make = [&](ModelState s) {
    return TrainedModel{algo, std::move(s), hp, fingerprint_of(train, seed).value()};
  };
  switch (algo) {
    case Algorithm::dtree:
      hp["criterion"] = "entropy";
      hp["max_depth"] = cfg.tree.max_depth;
      hp["min_samples_split"] = cfg.tree.min_samples_split;
      hp["min_samples_leaf"] = cfg.tree.min_samples_leaf;
      return make(DecisionTree::train(train, cfg.tree, seed));
    case Algorithm::random_forest:
      hp["n_trees"] = cfg.forest.n_trees;
      hp["max_features"] = cfg.forest.max_features;
      hp["bootstrap"] = cfg.forest.bootstrap;
      return make(RandomForest::train(train, cfg.forest, seed));
    case Algorithm::knn: {
      const std::size_t k = select_k(train, cfg.knn_grid, cfg.knn_metric, cfg.inner_folds, seed);
      hp["k"] = k;
      hp["metric"] = cfg.knn_metric == DistanceMetric::euclidean ? "euclidean" : "cosine";
      return make(Knn(train, k, cfg.knn_metric));
    }
    case Algorithm::naive_bayes:
      hp["likelihood"] = cfg.nb_likelihood == Likelihood::gaussian ? "gaussian" : "multinomial";
      return make(NaiveBayes::train(train, cfg.nb_likelihood));
    case Algorithm::linear_svm: {
      const double c = select_c(train, cfg.svm_c_grid, cfg.svm_epochs, cfg.inner_folds, seed);
      hp["C"] = c;
      hp["epochs"] = cfg.svm_epochs;
      return make(LinearSvm::train(train, {c, cfg.svm_epochs}, seed));
    }
    case Algorithm::mlp:
      hp["hidden"] = cfg.mlp.hidden;
      hp["learning_rate"] = cfg.mlp.learning_rate;
      hp["epochs"] = cfg.mlp.epochs;
      hp["batch_size"] = cfg.mlp.batch_size;
      return make(Mlp::train(train, cfg.mlp, seed));
  }
  throw ValidationError("unsupported algorithm");
}

}  // namespace grantlex::ml
