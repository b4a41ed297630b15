#pragma once

// Stacked ensemble: a logistic-regression meta-learner over base-classifier
// probabilities, plus F1-maximizing decision-threshold tuning.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "infotweet/corpus.hpp"
#include "infotweet/eval.hpp"
#include "infotweet/model.hpp"

namespace infotweet {

struct Stacker {
  std::vector<std::string> base_names;
  LogRegParams meta;
  double threshold = 0.5;
};

// Meta-LR trained on (probability vector -> label) rows via the shared SGD
// trainer; the training rows double as the checkpoint-selection split.
inline Stacker fit_stacker(const ProbabilityTable& table, const LabeledDataset& labels,
                           const TrainConfig& cfg) {
  if (labels.tweets.empty()) throw std::runtime_error("fit_stacker: empty label set");
  bool saw0 = false, saw1 = false;
  Dataset rows;
  rows.reserve(labels.tweets.size());
  for (const auto& t : labels.tweets) {
    auto it = table.rows.find(t.id);
    if (it == table.rows.end()) {
      throw std::runtime_error("fit_stacker: no probability row for id " + t.id);
    }
    if (!t.label) throw std::runtime_error("fit_stacker: unlabelled tweet " + t.id);
    Example ex;
    ex.id = t.id;
    ex.features = FeatureVector::dense(FeatureKind::Hcf, it->second);
    ex.label = *t.label;
    (*t.label == 1 ? saw1 : saw0) = true;
    rows.push_back(std::move(ex));
  }
  if (!saw0 || !saw1) {
    throw std::runtime_error("fit_stacker: degenerate labels, only one class present");
  }
  TrainResult result = train(ModelKind::LogReg, rows, rows, cfg);
  Stacker s;
  s.base_names = table.model_names;
  s.meta = std::get<LogRegParams>(result.best.params);
  s.threshold = 0.5;
  return s;
}

// F1 of "predict 1 iff p >= tau" — the rule the tuning grid is scanned with.
inline double f1_at_threshold(const std::vector<double>& probs, const std::vector<int>& labels,
                              double tau) {
  if (probs.size() != labels.size() || probs.empty()) {
    throw std::runtime_error("f1_at_threshold: bad input sizes");
  }
  std::vector<int> preds(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) preds[i] = probs[i] >= tau ? 1 : 0;
  return compute_metrics(preds, labels).f1;
}

// Scans thresholds k*grid_step for k = 1 .. ceil(1/step)-1 and returns the
// smallest one attaining the maximum F1.
inline double tune_threshold(const std::vector<double>& probs, const std::vector<int>& labels,
                             double grid_step = 1e-4) {
  if (probs.empty() || probs.size() != labels.size()) {
    throw std::runtime_error("tune_threshold: empty or mismatched input");
  }
  if (!(grid_step > 0.0 && grid_step < 1.0)) {
    throw std::runtime_error("tune_threshold: grid_step must be in (0,1)");
  }
  double best_tau = grid_step;
  double best_f1 = -1.0;
  const long steps = static_cast<long>(std::ceil(1.0 / grid_step));
  for (long k = 1; k < steps; ++k) {
    const double tau = static_cast<double>(k) * grid_step;
    if (tau >= 1.0) break;
    const double f1 = f1_at_threshold(probs, labels, tau);
    if (f1 > best_f1) {
      best_f1 = f1;
      best_tau = tau;
    }
  }
  return best_tau;
}

// Final decision rule: Informative iff p strictly above the threshold.
inline std::pair<double, int> predict_ensemble(const Stacker& s, const std::vector<double>& row) {
  if (row.size() != s.base_names.size()) {
    throw std::runtime_error("predict_ensemble: expected " +
                             std::to_string(s.base_names.size()) + " base probabilities, got " +
                             std::to_string(row.size()));
  }
  if (s.meta.w.size() != row.size()) {
    throw std::runtime_error("predict_ensemble: meta weight dim mismatch");
  }
  double z = s.meta.b;
  for (std::size_t i = 0; i < row.size(); ++i) z += s.meta.w[i] * row[i];
  const double p = detail::sigmoid(z);
  return {p, p > s.threshold ? 1 : 0};
}

inline nlohmann::json stacker_to_json(const Stacker& s) {
  nlohmann::json j;
  j["base_names"] = s.base_names;
  j["weights"] = s.meta.w;
  j["bias"] = s.meta.b;
  j["threshold"] = s.threshold;
  return j;
}

inline Stacker stacker_from_json(const nlohmann::json& j) {
  Stacker s;
  s.base_names = j.at("base_names").get<std::vector<std::string>>();
  s.meta.w = j.at("weights").get<std::vector<double>>();
  s.meta.b = j.at("bias").get<double>();
  s.threshold = j.at("threshold").get<double>();
  if (s.meta.w.size() != s.base_names.size()) {
    throw std::runtime_error("stacker: weight count != base classifier count");
  }
  return s;
}

inline void save_stacker(const Stacker& s, const std::string& path,
                         const nlohmann::json& meta = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write stacker: " + path);
  nlohmann::json j = stacker_to_json(s);
  if (!meta.is_null() && !meta.empty()) j["meta"] = meta;
  out << j.dump(2) << "\n";
}

inline Stacker load_stacker(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stacker: " + path);
  nlohmann::json j;
  in >> j;
  return stacker_from_json(j);
}

}  // namespace infotweet
