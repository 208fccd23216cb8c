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

// Balanced-resample x stratified k-fold evaluation.
//
// Seeds: resample r uses derive_seed(base, r); its fold assignment uses
// derive_seed(that, kFoldStream) and the model of fold f uses
// derive_seed(derive_seed(that, kModelStream), f).

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "grantlex/features.hpp"
#include "grantlex/ml/metrics.hpp"
#include "grantlex/ml/model.hpp"

namespace grantlex {

inline constexpr std::uint64_t kFoldStream = 0x666f6c64;   // "fold"
inline constexpr std::uint64_t kModelStream = 0x6d6f646c;  // "modl"

// Runs fn(0..n-1) on up to `jobs` threads. Exceptions are rethrown after all
// workers stop; the one from the lowest index wins.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct EvalOptions {
  int folds = 10;
  int resamples = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double alpha = 0.05;
  ml::ModelConfig model{};
};

struct EvalReport {
  std::string dataset;
  std::string algorithm;
  std::vector<double> per_run_f1;  // resample-major, fold-minor
  std::vector<double> per_run_macro_f1;
  double mean_f1 = 0.0;
  double sd_f1 = 0.0;  // population SD over per_run_f1
  double pooled_f1 = 0.0;
  double mean_macro_f1 = 0.0;
  std::size_t n_correct_total = 0;
  std::size_t n_total = 0;
  int resamples = 0;
  double p_dominant = 0.5;
  double p_value = 1.0;
  bool significant = false;
  std::size_t instances_per_resample = 0;
  std::size_t excluded_records = 0;
  std::vector<nlohmann::ordered_json> hyperparameters;  // per run
  nlohmann::ordered_json config;
};

// Per-algorithm model settings for a feature family: multinomial likelihood
// and cosine distance for term vectors.
inline ml::ModelConfig model_config_for(FeatureFamily family, ml::ModelConfig base) {
  if (family == FeatureFamily::tfidf) {
    base.nb_likelihood = ml::Likelihood::multinomial;
    base.knn_metric = ml::DistanceMetric::cosine;
  }
  return base;
}

inline bool standardize_for(FeatureFamily family, ml::Algorithm algo) {
  if (!ml::wants_standardized(algo)) return false;
  return !(family == FeatureFamily::tfidf && algo == ml::Algorithm::knn);
}

// The p-value tests the per-resample accuracy: n = instances in one balanced
// resample (each is tested once per resample), n_g = mean correct count over
// resamples rounded to the nearest integer, p = dominant-class fraction.
inline double report_pvalue(std::size_t n_correct_total, std::size_t n_total, int resamples, double p_dominant) {
  if (resamples <= 0 || n_total == 0) return 1.0;
  const double r = static_cast<double>(resamples);
  const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(n_total) / r));
  const auto g = std::min(n, static_cast<std::size_t>(std::llround(static_cast<double>(n_correct_total) / r)));
  return ml::significance_pvalue(g, n, p_dominant);
}

inline EvalReport cross_validate(const FeatureTable& table, const FeatureConfig& cfg, ml::Algorithm algo,
                                 const EvalOptions& opt, const std::string& dataset = "all") {
  if (opt.folds < 2) throw ValidationError("--folds must be at least 2");
  if (opt.resamples < 1) throw ValidationError("--resamples must be at least 1");
  if (table.size() == 0) throw ValidationError("no eligible records for dataset '" + dataset + "'");

  const auto mcfg = model_config_for(cfg.family, opt.model);
  const bool standardize = standardize_for(cfg.family, algo);
  std::optional<Vocabulary> global_vocab;
  if (cfg.family == FeatureFamily::tfidf && cfg.vocab_scope == VocabScope::global)
    global_vocab = fit_global_vocabulary(table, cfg.top_x);

  std::vector<BalancedDataset> resamples;
  std::vector<FoldAssignment> assignments;
  for (int r = 0; r < opt.resamples; ++r) {
    const std::uint64_t rs = derive_seed(opt.seed, static_cast<std::uint64_t>(r));
    resamples.push_back(balanced_resample(table.labels, rs));
    assignments.push_back(stratified_kfold(resamples.back(), opt.folds, derive_seed(rs, kFoldStream)));
  }

  struct Cell {
    ml::Confusion confusion;
    double f1 = 0.0;
    double macro = 0.0;
    nlohmann::ordered_json hyper;
  };
  const std::size_t k = static_cast<std::size_t>(opt.folds);
  std::vector<Cell> cells(resamples.size() * k);
  parallel_for(cells.size(), opt.jobs, [&](std::size_t c) {
    const std::size_t r = c / k;
    const int f = static_cast<int>(c % k);
    const auto& ds = resamples[r];
    std::vector<std::size_t> train_rows, test_rows;
    for (auto i : assignments[r].train_indices(f)) train_rows.push_back(ds.instances[i].record);
    for (auto i : assignments[r].test_indices(f)) test_rows.push_back(ds.instances[i].record);

    const auto transform = fit_fold_transform(table, train_rows, cfg, standardize, global_vocab ? &*global_vocab : nullptr);
    ml::Dataset train{transform.matrix(table, train_rows), {}};
    for (auto i : train_rows) train.y.push_back(table.labels[i]);
    const auto test_x = transform.matrix(table, test_rows);

    const std::uint64_t rs = derive_seed(opt.seed, static_cast<std::uint64_t>(r));
    const auto model =
        ml::train_model(algo, train, mcfg, derive_seed(derive_seed(rs, kModelStream), static_cast<std::uint64_t>(f)));
    std::vector<Label> pred, truth;
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      pred.push_back(model.predict(test_x.row(i)));
      truth.push_back(table.labels[test_rows[i]]);
    }
    auto& cell = cells[c];
    cell.confusion = ml::confusion(pred, truth);
    cell.f1 = ml::f1_from(cell.confusion);
    cell.macro = ml::macro_f1(pred, truth);
    cell.hyper = model.hyperparameters;
  });

  EvalReport rep;
  rep.dataset = dataset;
  rep.algorithm = ml::to_string(algo);
  rep.resamples = opt.resamples;
  rep.instances_per_resample = resamples.front().size();
  rep.excluded_records = table.excluded;
  ml::Confusion pooled;
  for (const auto& c : cells) {
    rep.per_run_f1.push_back(c.f1);
    rep.per_run_macro_f1.push_back(c.macro);
    rep.hyperparameters.push_back(c.hyper);
    pooled += c.confusion;
  }
  const double n = static_cast<double>(cells.size());
  for (double v : rep.per_run_f1) rep.mean_f1 += v / n;
  for (double v : rep.per_run_macro_f1) rep.mean_macro_f1 += v / n;
  double var = 0.0;
  for (double v : rep.per_run_f1) var += (v - rep.mean_f1) * (v - rep.mean_f1) / n;
  rep.sd_f1 = std::sqrt(var);
  rep.pooled_f1 = ml::f1_from(pooled);
  rep.n_correct_total = pooled.correct();
  rep.n_total = pooled.total();
  // Balanced resamples: the dominant class holds half the instances.
  rep.p_dominant = 0.5;
  rep.p_value = report_pvalue(rep.n_correct_total, rep.n_total, rep.resamples, rep.p_dominant);
  rep.significant = rep.p_value < opt.alpha;

  rep.config = cfg.to_json();
  rep.config["algo"] = rep.algorithm;
  rep.config["dataset"] = dataset;
  rep.config["folds"] = opt.folds;
  rep.config["resamples"] = opt.resamples;
  rep.config["seed"] = opt.seed;
  return rep;
}

inline std::string format4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string format_p(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["config"] = r.config;
  j["dataset"] = r.dataset;
  j["algorithm"] = r.algorithm;
  j["mean_f1"] = r.mean_f1;
  j["sd_f1"] = r.sd_f1;
  j["pooled_f1"] = r.pooled_f1;
  j["mean_macro_f1"] = r.mean_macro_f1;
  j["n_correct_total"] = r.n_correct_total;
  j["n_total"] = r.n_total;
  j["instances_per_resample"] = r.instances_per_resample;
  j["p_dominant"] = r.p_dominant;
  j["p_value"] = r.p_value;
  j["significant"] = r.significant;
  j["excluded_records"] = r.excluded_records;
  j["per_run_f1"] = r.per_run_f1;
  j["per_run_macro_f1"] = r.per_run_macro_f1;
  j["hyperparameters"] = r.hyperparameters;
  return j;
}

// Summary rows: dataset, method, features, F1 +- SD, p-value. Within each
// dataset the cell with the highest mean F1 is marked '*' when significant.
inline void write_summary_csv(std::ostream& out, const std::vector<EvalReport>& reports,
                              const nlohmann::ordered_json& echo) {
  out << "# " << echo.dump() << '\n';
  out << "dataset,method,features,f1_mean,f1_sd,f1_pooled,macro_f1,p_value,significant,best\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    bool best = true;
    for (const auto& o : reports)
      if (o.dataset == r.dataset && o.mean_f1 > r.mean_f1) best = false;
    for (std::size_t j = 0; j < i; ++j)
      if (reports[j].dataset == r.dataset && reports[j].mean_f1 == r.mean_f1) best = false;
    std::string features = r.config.value("features", "");
    if (r.config.contains("fields")) features += ":" + r.config["fields"].get<std::string>();
    if (r.config.contains("top_x")) features += ":" + std::to_string(r.config["top_x"].get<std::size_t>());
    out << r.dataset << ',' << r.algorithm << ',' << features << ',' << format4(r.mean_f1) << ','
        << format4(r.sd_f1) << ',' << format4(r.pooled_f1) << ',' << format4(r.mean_macro_f1) << ','
        << format_p(r.p_value) << ',' << (r.significant ? 1 : 0) << ',' << (best && r.significant ? "*" : "")
        << '\n';
  }
}

}  // namespace grantlex
