#pragma once

// Pseudo-labelling controller: interleaves supervised training rounds with
// high-confidence selection from an unlabelled pool. After each round the
// trainer is rewound to the best checkpoint seen so far and the selected
// tweets join the training set with their predicted labels.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "infotweet/model.hpp"
#include "infotweet/rng.hpp"

namespace infotweet {

struct PseudoLabelConfig {
  int max_epochs = 50;        // supervised epochs across all rounds
  int round_len = 10;         // epochs between promotion rounds
  double conf_threshold = 0.99;
  std::size_t batch_cap = 1000;  // promotions per round
  std::uint64_t seed = 0;        // selection stream, separate from training

  void validate() const {
    if (!(conf_threshold > 0.0 && conf_threshold < 1.0)) {
      throw std::runtime_error("pseudo-label: conf_threshold must be in (0,1)");
    }
    if (batch_cap < 1) throw std::runtime_error("pseudo-label: batch_cap must be >= 1");
    if (round_len < 1 || round_len > max_epochs) {
      throw std::runtime_error("pseudo-label: need 1 <= round_len <= max_epochs");
    }
  }
};

struct Promotion {
  std::string id;
  int round = 0;
  int pseudo_label = 0;
  double confidence = 0.0;
};

struct RoundResult {
  Dataset selected;   // promoted tweets, pseudo-labels applied
  Dataset remaining;  // pool minus selected, original order
  std::vector<Promotion> promotions;
};

// Confidence is the max of the two class probabilities. Candidates above the
// threshold are sampled uniformly without replacement up to the cap.
inline RoundResult pseudo_label_round(const Checkpoint& ckpt, Dataset pool, int round_index,
                                      const PseudoLabelConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<std::size_t> candidates;
  std::vector<double> probs(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    probs[i] = predict_proba(ckpt, pool[i]);
    const double conf = std::max(probs[i], 1.0 - probs[i]);
    if (conf > cfg.conf_threshold) candidates.push_back(i);
  }
  const std::size_t take = std::min(cfg.batch_cap, candidates.size());
  auto picks = rng.sample_indices(candidates.size(), take);
  std::sort(picks.begin(), picks.end());

  RoundResult out;
  std::set<std::size_t> chosen;
  for (std::size_t p : picks) chosen.insert(candidates[p]);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!chosen.count(i)) {
      out.remaining.push_back(std::move(pool[i]));
      continue;
    }
    Example ex = std::move(pool[i]);
    const int label = probs[i] > 0.5 ? 1 : 0;
    ex.label = label;
    out.promotions.push_back(
        Promotion{ex.id, round_index, label, std::max(probs[i], 1.0 - probs[i])});
    out.selected.push_back(std::move(ex));
  }
  return out;
}

struct PseudoLabelResult {
  Checkpoint best;
  std::vector<double> epoch_val_f1;   // every supervised epoch, across rounds
  std::vector<double> round_best_f1;  // best-so-far after each round
  std::vector<Promotion> promotions;
  std::size_t final_train_size = 0;
  std::size_t final_pool_size = 0;
};

// Runs max_epochs supervised epochs in round_len chunks; promotes after every
// round except the last (promotions feed future epochs only). Labels on pool
// examples are ignored.
inline PseudoLabelResult train_with_pseudo_labelling(const Dataset& labelled,
                                                     const Dataset& pool, ModelKind kind,
                                                     const PseudoLabelConfig& cfg,
                                                     const TrainConfig& train_cfg,
                                                     const Dataset& eval_data,
                                                     const ModelOptions& opts = {}) {
  cfg.validate();
  if (labelled.empty()) throw std::runtime_error("pseudo-label: empty labelled set");
  {
    std::set<std::string> ids;
    for (const auto& ex : labelled) ids.insert(ex.id);
    for (const auto& ex : pool) {
      if (ids.count(ex.id)) {
        throw std::runtime_error("pseudo-label: pool id also in labelled set: " + ex.id);
      }
    }
  }

  Trainer trainer(kind, train_cfg, opts);
  Rng select_rng(cfg.seed);
  Dataset current = labelled;
  Dataset pool_left = pool;
  PseudoLabelResult result;

  int epochs_left = cfg.max_epochs;
  int round = 0;
  while (epochs_left > 0) {
    ++round;
    const int n = std::min(cfg.round_len, epochs_left);
    if (round > 1) trainer.rewind(trainer.best());
    trainer.run(current, eval_data, n);
    epochs_left -= n;
    result.round_best_f1.push_back(trainer.best().val_f1);
    if (epochs_left > 0 && !pool_left.empty()) {
      RoundResult rr =
          pseudo_label_round(trainer.best(), std::move(pool_left), round, cfg, select_rng);
      pool_left = std::move(rr.remaining);
      for (auto& ex : rr.selected) current.push_back(std::move(ex));
      for (auto& p : rr.promotions) result.promotions.push_back(std::move(p));
    }
  }
  result.best = trainer.best();
  result.epoch_val_f1 = trainer.history();
  result.final_train_size = current.size();
  result.final_pool_size = pool_left.size();
  return result;
}

// ---------------------------------------------------------------------------
// Promotion log: JSON lines {id, round, pseudo_label, confidence}

inline void save_promotion_log(const std::vector<Promotion>& promotions, const std::string& path,
                               const std::vector<std::string>& header = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write promotion log: " + path);
  for (const auto& h : header) {
    nlohmann::json meta;
    meta["_meta"] = nlohmann::json::parse(h);
    out << meta.dump() << "\n";
  }
  for (const auto& p : promotions) {
    nlohmann::json rec;
    rec["id"] = p.id;
    rec["round"] = p.round;
    rec["pseudo_label"] = p.pseudo_label;
    rec["confidence"] = p.confidence;
    out << rec.dump() << "\n";
  }
}

inline std::vector<Promotion> load_promotion_log(const std::string& path) {
  std::vector<Promotion> promotions;
  for (const auto& line : detail::read_lines(path)) {
    if (detail::trim(line).empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    if (rec.contains("_meta")) continue;
    promotions.push_back(Promotion{rec.at("id").get<std::string>(), rec.at("round").get<int>(),
                                   rec.at("pseudo_label").get<int>(),
                                   rec.at("confidence").get<double>()});
  }
  return promotions;
}

struct ReplayResult {
  Dataset train;  // labelled + promotions, in promotion order
  Dataset pool;   // what should remain unlabelled
};

// Reapplies a promotion log to the original inputs; the result must match the
// live run exactly (used for audit and replay checks).
inline ReplayResult replay_promotions(const Dataset& labelled, const Dataset& pool,
                                      const std::vector<Promotion>& log) {
  ReplayResult out;
  out.train = labelled;
  std::map<std::string, std::size_t> pool_index;
  for (std::size_t i = 0; i < pool.size(); ++i) pool_index.emplace(pool[i].id, i);
  std::set<std::size_t> promoted;
  for (const auto& p : log) {
    auto it = pool_index.find(p.id);
    if (it == pool_index.end()) {
      throw std::runtime_error("replay: promoted id not in pool: " + p.id);
    }
    if (!promoted.insert(it->second).second) {
      throw std::runtime_error("replay: id promoted twice: " + p.id);
    }
    Example ex = pool[it->second];
    ex.label = p.pseudo_label;
    out.train.push_back(std::move(ex));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!promoted.count(i)) out.pool.push_back(pool[i]);
  }
  return out;
}

}  // namespace infotweet
