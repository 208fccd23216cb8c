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

// Mean-decrease-impurity feature relevance, rank aggregation over resamples
// and the Nemenyi critical difference.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "grantlex/evaluate.hpp"
#include "grantlex/impurity.hpp"
#include "grantlex/ml/model.hpp"
#include "grantlex/nemenyi_table.hpp"

namespace grantlex {

enum class ImportanceWeighting {
  node_mean,          // plain mean of dG over the nodes using a feature
  instance_weighted,  // dG weighted by the node's share of its tree's samples
};

struct FeatureImportance {
  std::vector<double> importance;
  std::vector<std::size_t> node_count;
};

// Mean of dG per feature over the internal nodes of all `trees`; unused
// features score 0.
inline FeatureImportance feature_importance(const std::vector<const ml::DecisionTree*>& trees, std::size_t n_features,
                                            ImportanceWeighting weighting = ImportanceWeighting::node_mean) {
  FeatureImportance fi;
  fi.importance.assign(n_features, 0.0);
  fi.node_count.assign(n_features, 0);
  std::vector<double> weight(n_features, 0.0);
  for (const auto* tree : trees) {
    const auto& nodes = tree->nodes();
    if (nodes.empty()) continue;
    const auto& rc = nodes.front().class_counts;
    const double root_n = static_cast<double>(rc[0] + rc[1]);
    for (const auto& rec : tree->impurity_records()) {
      if (rec.feature >= n_features) throw ValidationError("impurity record refers to an unknown feature");
      double w = 1.0;
      if (weighting == ImportanceWeighting::instance_weighted)
        w = static_cast<double>(rec.n_left + rec.n_right) / root_n;
      fi.importance[rec.feature] += w * rec.delta_g;
      weight[rec.feature] += w;
      ++fi.node_count[rec.feature];
    }
  }
  for (std::size_t j = 0; j < n_features; ++j)
    if (weight[j] > 0.0) fi.importance[j] /= weight[j];
  return fi;
}

inline FeatureImportance feature_importance(const ml::TrainedModel& model,
                                            ImportanceWeighting weighting = ImportanceWeighting::node_mean) {
  if (const auto* t = std::get_if<ml::DecisionTree>(&model.state))
    return feature_importance({t}, t->n_features(), weighting);
  if (const auto* f = std::get_if<ml::RandomForest>(&model.state)) {
    std::vector<const ml::DecisionTree*> trees;
    for (const auto& t : f->trees()) trees.push_back(&t);
    const std::size_t d = trees.empty() ? 0 : trees.front()->n_features();
    return feature_importance(trees, d, weighting);
  }
  throw ValidationError("feature importance is unsupported for model family '" + ml::to_string(model.algorithm) +
                        "' (use dtrees or rforest)");
}

// Rank 1 = largest value; tied values share the mean of their positions.
inline std::vector<double> descending_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> rank(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    i = j + 1;
  }
  return rank;
}

// Per-resample ranks and their average; every row must have the same width.
inline std::vector<double> average_rank(const std::vector<std::vector<double>>& importances,
                                        std::vector<std::vector<double>>* per_resample = nullptr) {
  if (importances.empty()) return {};
  const std::size_t k = importances.front().size();
  std::vector<double> avg(k, 0.0);
  for (const auto& imp : importances) {
    if (imp.size() != k) throw ValidationError("feature schema mismatch between resamples");
    auto r = descending_ranks(imp);
    for (std::size_t j = 0; j < k; ++j) avg[j] += r[j] / static_cast<double>(importances.size());
    if (per_resample) per_resample->push_back(std::move(r));
  }
  return avg;
}

inline double nemenyi_q(std::size_t k, double alpha) {
  const auto lo = kNemenyiTable.front().k, hi = kNemenyiTable.back().k;
  if (k < static_cast<std::size_t>(lo) || k > static_cast<std::size_t>(hi))
    throw ValidationError("critical difference: k = " + std::to_string(k) + " outside the supported range " +
                          std::to_string(lo) + ".." + std::to_string(hi));
  const auto& row = kNemenyiTable[k - static_cast<std::size_t>(lo)];
  if (std::abs(alpha - 0.01) < 1e-12) return row.q01;
  if (std::abs(alpha - 0.05) < 1e-12) return row.q05;
  if (std::abs(alpha - 0.10) < 1e-12) return row.q10;
  throw ValidationError("critical difference: alpha must be 0.01, 0.05 or 0.10");
}

// CD = q_alpha(k) sqrt(k (k + 1) / (6 n))
inline double critical_difference(std::size_t k, std::size_t n_datasets, double alpha = 0.05) {
  if (n_datasets < 2) throw ValidationError("critical difference needs at least 2 datasets");
  const double q = nemenyi_q(k, alpha);
  const double kd = static_cast<double>(k);
  return q * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

struct RankingRow {
  std::string feature;
  std::size_t index = 0;
  double mean_importance = 0.0;
  double average_rank = 0.0;
  std::size_t node_count = 0;
  bool differs_from_best = false;  // rank gap to the top feature exceeds CD
};

struct RelevanceReport {
  std::vector<RankingRow> rows;  // ascending average rank
  std::vector<std::vector<double>> importance;  // per resample
  std::vector<std::vector<double>> ranks;  // per resample
  std::optional<double> cd;
  double alpha = 0.05;
  nlohmann::ordered_json config;
};

inline RelevanceReport build_relevance_report(const std::vector<FeatureImportance>& per_resample,
                                              const std::vector<std::string>& names, double alpha) {
  RelevanceReport rep;
  rep.alpha = alpha;
  for (const auto& fi : per_resample) {
    if (fi.importance.size() != names.size()) throw ValidationError("feature schema mismatch between resamples");
    rep.importance.push_back(fi.importance);
  }
  const auto avg = average_rank(rep.importance, &rep.ranks);
  const std::size_t k = names.size();
  if (k >= 2 && per_resample.size() >= 2 && k <= static_cast<std::size_t>(kNemenyiTable.back().k))
    rep.cd = critical_difference(k, per_resample.size(), alpha);
  for (std::size_t j = 0; j < k; ++j) {
    RankingRow row;
    row.feature = names[j];
    row.index = j;
    row.average_rank = avg[j];
    for (const auto& fi : per_resample) {
      row.mean_importance += fi.importance[j] / static_cast<double>(per_resample.size());
      row.node_count += fi.node_count[j];
    }
    rep.rows.push_back(row);
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const RankingRow& a, const RankingRow& b) { return a.average_rank < b.average_rank; });
  if (rep.cd && !rep.rows.empty())
    for (auto& r : rep.rows) r.differs_from_best = r.average_rank - rep.rows.front().average_rank > *rep.cd;
  return rep;
}

struct RelevanceOptions {
  ml::Algorithm algorithm = ml::Algorithm::random_forest;
  int resamples = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double alpha = 0.05;
  ImportanceWeighting weighting = ImportanceWeighting::node_mean;
  ml::ModelConfig model{};
};

// Trains one tree model per balanced resample on all of its instances and
// aggregates the importances.
inline RelevanceReport compute_relevance(const FeatureTable& table, const FeatureConfig& cfg,
                                         const RelevanceOptions& opt) {
  if (opt.algorithm != ml::Algorithm::random_forest && opt.algorithm != ml::Algorithm::dtree)
    throw ValidationError("feature importance is unsupported for model family '" + ml::to_string(opt.algorithm) +
                          "' (use dtrees or rforest)");
  if (opt.resamples < 1) throw ValidationError("--resamples must be at least 1");
  if (table.size() == 0) throw ValidationError("no eligible records");

  std::vector<std::string> names;
  std::optional<Vocabulary> vocab;
  if (cfg.family == FeatureFamily::complexity) {
    names = complexity_feature_names();
  } else {
    vocab = fit_global_vocabulary(table, cfg.top_x);
    names = vocab->words;
  }

  std::vector<FeatureImportance> per(static_cast<std::size_t>(opt.resamples));
  parallel_for(per.size(), opt.jobs, [&](std::size_t r) {
    const std::uint64_t rs = derive_seed(opt.seed, r);
    const auto ds = balanced_resample(table.labels, rs);
    std::vector<std::size_t> rows;
    for (const auto& inst : ds.instances) rows.push_back(inst.record);
    const auto transform = fit_fold_transform(table, rows, cfg, false, vocab ? &*vocab : nullptr);
    ml::Dataset train{transform.matrix(table, rows), {}};
    for (auto i : rows) train.y.push_back(table.labels[i]);
    const auto model = ml::train_model(opt.algorithm, train, opt.model, derive_seed(rs, kModelStream));
    per[r] = feature_importance(model, opt.weighting);
  });

  auto rep = build_relevance_report(per, names, opt.alpha);
  rep.config = cfg.to_json();
  rep.config["algo"] = ml::to_string(opt.algorithm);
  rep.config["resamples"] = opt.resamples;
  rep.config["seed"] = opt.seed;
  rep.config["importance"] = opt.weighting == ImportanceWeighting::node_mean ? "node-mean" : "weighted";
  return rep;
}

inline void write_ranking_csv(std::ostream& out, const RelevanceReport& rep) {
  out << "# " << rep.config.dump() << '\n';
  out << "# cd=" << (rep.cd ? format4(*rep.cd) : std::string("na")) << " alpha=" << format4(rep.alpha)
      << " resamples=" << rep.importance.size() << '\n';
  out << "feature,mean_importance,average_rank,nodes,cd_flag\n";
  for (const auto& r : rep.rows)
    out << r.feature << ',' << format4(r.mean_importance) << ',' << format4(r.average_rank) << ',' << r.node_count
        << ',' << (r.differs_from_best ? 1 : 0) << '\n';
}

namespace detail {
inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}
inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace detail

// Average-rank diagram: horizontal axis from rank 1 to k, one marker per
// feature, the best five labelled, and the CD as a bar above the axis.
// `timestamp` (when non-empty) goes into a leading comment.
inline void write_rank_svg(std::ostream& out, const RelevanceReport& rep, const std::string& timestamp = {}) {
  using detail::fmt2;
  const std::size_t k = rep.rows.size();
  const double width = 800.0, left = 60.0, right = 740.0, axis_y = 120.0;
  const std::size_t labelled = std::min<std::size_t>(5, k);
  const double height = axis_y + 40.0 + 22.0 * static_cast<double>(labelled);
  const double hi = std::max(2.0, static_cast<double>(k));
  auto x_of = [&](double rank) { return left + (rank - 1.0) / (hi - 1.0) * (right - left); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!timestamp.empty()) out << "<!-- generated " << detail::xml_escape(timestamp) << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(width) << "\" height=\"" << fmt2(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<desc>" << detail::xml_escape(rep.config.dump()) << "</desc>\n";
  out << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(axis_y) << "\" x2=\"" << fmt2(right) << "\" y2=\""
      << fmt2(axis_y) << "\" stroke=\"black\"/>\n";
  for (std::size_t t = 1; t <= static_cast<std::size_t>(hi); ++t) {
    const double x = x_of(static_cast<double>(t));
    out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(axis_y - 5) << "\" x2=\"" << fmt2(x) << "\" y2=\""
        << fmt2(axis_y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt2(x) << "\" y=\"" << fmt2(axis_y - 8) << "\" text-anchor=\"middle\">" << t
        << "</text>\n";
  }
  if (rep.cd) {
    const double x0 = x_of(1.0), x1 = x_of(1.0 + *rep.cd);
    out << "<line x1=\"" << fmt2(x0) << "\" y1=\"40.00\" x2=\"" << fmt2(std::min(x1, right))
        << "\" y2=\"40.00\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt2(x0) << "\" y=\"32.00\">CD = " << format4(*rep.cd) << "</text>\n";
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto& r = rep.rows[i];
    const double x = x_of(r.average_rank);
    out << "<circle cx=\"" << fmt2(x) << "\" cy=\"" << fmt2(axis_y) << "\" r=\"3\" fill=\""
        << (i < labelled ? "black" : "gray") << "\"><title>" << detail::xml_escape(r.feature) << " "
        << format4(r.average_rank) << "</title></circle>\n";
    if (i < labelled) {
      const double y = axis_y + 25.0 + 22.0 * static_cast<double>(i);
      out << "<polyline points=\"" << fmt2(x) << "," << fmt2(axis_y) << " " << fmt2(x) << "," << fmt2(y) << " "
          << fmt2(x + 10) << "," << fmt2(y) << "\" fill=\"none\" stroke=\"black\"/>\n";
      out << "<text x=\"" << fmt2(x + 14) << "\" y=\"" << fmt2(y + 4) << "\">" << detail::xml_escape(r.feature)
          << " (" << fmt2(r.average_rank) << ")</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace grantlex
