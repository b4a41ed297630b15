#pragma once

// Precision/recall/F1 for the Informative class, run averaging, and the
// adversarial token-substitution probe harness.

#include <cstddef>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace infotweet {

struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

inline ConfusionMatrix confusion(const std::vector<int>& preds,
                                 const std::vector<int>& labels) {
  if (preds.size() != labels.size()) {
    throw std::runtime_error("confusion: length mismatch (" + std::to_string(preds.size()) +
                             " vs " + std::to_string(labels.size()) + ")");
  }
  if (preds.empty()) throw std::runtime_error("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] == 1) {
      (preds[i] == 1 ? cm.tp : cm.fn)++;
    } else {
      (preds[i] == 1 ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

// Zero-denominator conventions: P = 0 when tp+fp = 0, R = 0 when tp+fn = 0,
// F1 = 0 when P+R = 0.
inline Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw std::runtime_error("metrics_from_confusion: empty confusion matrix");
  Metrics m;
  const double tp = static_cast<double>(cm.tp);
  m.precision = (cm.tp + cm.fp > 0) ? tp / static_cast<double>(cm.tp + cm.fp) : 0.0;
  m.recall = (cm.tp + cm.fn > 0) ? tp / static_cast<double>(cm.tp + cm.fn) : 0.0;
  m.f1 = (m.precision + m.recall > 0.0)
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  return m;
}

inline Metrics compute_metrics(const std::vector<int>& preds, const std::vector<int>& labels) {
  return metrics_from_confusion(confusion(preds, labels));
}

inline Metrics average_runs(const std::vector<Metrics>& runs) {
  if (runs.empty()) throw std::runtime_error("average_runs: empty run list");
  Metrics m;
  for (const auto& r : runs) {
    m.precision += r.precision;
    m.recall += r.recall;
    m.f1 += r.f1;
    m.accuracy += r.accuracy;
  }
  const double n = static_cast<double>(runs.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  m.accuracy /= n;
  return m;
}

inline nlohmann::json metrics_to_json(const Metrics& m, std::size_t n, std::size_t runs = 1) {
  nlohmann::json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["accuracy"] = m.accuracy;
  j["n"] = n;
  j["runs"] = runs;
  return j;
}

// ---------------------------------------------------------------------------
// Probe harness

struct ProbeTemplate {
  std::string name;
  std::string prefix;                 // may be empty: fillers are then full inputs
  std::vector<std::string> fillers;   // >= 1
  std::string note;
};

struct ProbeResult {
  std::string name;
  std::vector<std::string> inputs;  // the generated raw strings
  std::vector<int> predictions;
  int flips = 0;  // label changes between consecutive fillers
};

// The harness normalizes each generated string (Cleaned variant) and hands
// the token sequence to the predictor.
using ProbePredictor = std::function<int(const std::vector<std::string>& tokens)>;

inline ProbeTemplate probe_template_from_json(const nlohmann::json& j) {
  ProbeTemplate t;
  t.name = j.value("name", "");
  t.prefix = j.value("prefix", "");
  t.note = j.value("note", "");
  if (!j.contains("fillers") || !j["fillers"].is_array() || j["fillers"].empty()) {
    throw std::runtime_error("probe template must have a non-empty 'fillers' array");
  }
  for (const auto& f : j["fillers"]) t.fillers.push_back(f.get<std::string>());
  return t;
}

inline ProbeTemplate load_probe_template(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open probe template: " + path);
  nlohmann::json j;
  in >> j;
  return probe_template_from_json(j);
}

inline nlohmann::json probe_report_to_json(const std::vector<ProbeResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json j;
    j["name"] = r.name;
    j["inputs"] = r.inputs;
    j["predictions"] = r.predictions;
    j["flips"] = r.flips;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace infotweet

#include "infotweet/normalize.hpp"

namespace infotweet {

inline std::vector<ProbeResult> run_probes(const ProbePredictor& predict,
                                           const std::vector<ProbeTemplate>& templates,
                                           const NormalizationResources& res) {
  std::vector<ProbeResult> report;
  report.reserve(templates.size());
  for (const auto& t : templates) {
    if (t.fillers.empty()) throw std::runtime_error("probe template without fillers: " + t.name);
    ProbeResult r;
    r.name = t.name;
    for (const auto& filler : t.fillers) {
      std::string raw = t.prefix.empty() ? filler : t.prefix + " " + filler;
      Tweet probe{"probe", raw, std::nullopt};
      NormalizedTweet norm = normalize(probe, PipelineVariant::Cleaned, res);
      r.inputs.push_back(raw);
      r.predictions.push_back(predict(norm.tokens));
    }
    for (std::size_t i = 1; i < r.predictions.size(); ++i) {
      if (r.predictions[i] != r.predictions[i - 1]) ++r.flips;
    }
    report.push_back(std::move(r));
  }
  return report;
}

}  // namespace infotweet
