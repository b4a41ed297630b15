#pragma once

// From-scratch trainable classifiers: a two-hidden-layer feed-forward network,
// a fastText-style hashed bag-of-n-grams linear classifier, and binary
// logistic regression, all trained by deterministic mini-batch SGD with
// best-F1 checkpointing.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "infotweet/eval.hpp"
#include "infotweet/features.hpp"
#include "infotweet/rng.hpp"
#include "infotweet/textutil.hpp"

namespace infotweet {

enum class ModelKind { Mlp, BagLinear, LogReg };

inline std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Mlp: return "mlp";
    case ModelKind::BagLinear: return "bag-linear";
    case ModelKind::LogReg: return "logreg";
  }
  return "logreg";
}

inline ModelKind model_kind_from_name(const std::string& s) {
  if (s == "mlp") return ModelKind::Mlp;
  if (s == "bag-linear" || s == "bag_linear" || s == "fasttext") return ModelKind::BagLinear;
  if (s == "logreg" || s == "lr") return ModelKind::LogReg;
  throw std::runtime_error("unknown model kind: " + s);
}

// One training/evaluation row. Vector models read `features`; the bag-linear
// model reads `tokens`.
struct Example {
  std::string id;
  FeatureVector features;
  std::vector<std::string> tokens;
  int label = 0;
};

using Dataset = std::vector<Example>;

inline constexpr std::size_t kMlpHidden = 64;

struct MlpParams {
  std::size_t input_dim = 0;
  double dropout_p = 0.1;  // applied to feature inputs only
  // w1 is stored transposed (input_dim x 64) so sparse inputs touch
  // contiguous rows; w2 is 64x64 row-major, w3 is 2x64.
  std::vector<double> w1, b1, w2, b2, w3, b3;

  bool operator==(const MlpParams&) const = default;
};

struct BagLinearParams {
  std::size_t buckets = std::size_t(1) << 21;
  std::size_t embed_dim = 50;
  int max_order = 3;
  std::vector<double> embeddings;  // buckets x embed_dim
  std::vector<double> out_w;       // 2 x embed_dim
  std::array<double, 2> out_b{0.0, 0.0};

  bool operator==(const BagLinearParams&) const = default;
};

struct LogRegParams {
  std::vector<double> w;
  double b = 0.0;

  bool operator==(const LogRegParams&) const = default;
};

struct TrainConfig {
  int epochs = 10;
  double lr = 0.1;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

struct ModelOptions {
  double mlp_dropout = 0.1;
  std::size_t bag_buckets = std::size_t(1) << 21;
  std::size_t bag_embed_dim = 50;
  int bag_max_order = 3;
};

struct Checkpoint {
  std::variant<MlpParams, BagLinearParams, LogRegParams> params;
  int epoch = 0;
  double val_f1 = 0.0;
  std::string rng_state;
  std::uint64_t seed = 0;

  ModelKind kind() const {
    switch (params.index()) {
      case 0: return ModelKind::Mlp;
      case 1: return ModelKind::BagLinear;
      default: return ModelKind::LogReg;
    }
  }
};

// ---------------------------------------------------------------------------
// Forward passes

namespace detail {

inline std::array<double, 2> softmax2(double z0, double z1) {
  const double m = std::max(z0, z1);
  const double e0 = std::exp(z0 - m);
  const double e1 = std::exp(z1 - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

inline double logsumexp2(double z0, double z1) {
  const double m = std::max(z0, z1);
  return m + std::log(std::exp(z0 - m) + std::exp(z1 - m));
}

inline double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Scaled input after inverted dropout: (index, value) pairs. Zero entries of
// a binary vector are fixed points of dropout, so masks are drawn for stored
// entries only.
inline void dropped_input(const FeatureVector& x, double p, Rng* rng,
                          std::vector<std::pair<std::size_t, double>>& out) {
  out.clear();
  const double keep_scale = 1.0 / (1.0 - p);
  x.for_each_nonzero([&](std::size_t i, double v) {
    if (rng != nullptr && p > 0.0) {
      if (rng->uniform() < p) return;
      v *= keep_scale;
    }
    if (v != 0.0) out.emplace_back(i, v);
  });
}

// Hashed bucket ids of all 1..max_order-grams, duplicates retained.
inline void ngram_buckets(const std::vector<std::string>& tokens, int max_order,
                          std::size_t buckets, std::vector<std::size_t>& out) {
  out.clear();
  for (int order = 1; order <= max_order; ++order) {
    if (tokens.size() < static_cast<std::size_t>(order)) break;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int k = 1; k < order; ++k) {
        gram.push_back(' ');
        gram.append(tokens[i + k]);
      }
      out.push_back(static_cast<std::size_t>(fnv1a64(gram) % buckets));
    }
  }
}

struct MlpActivations {
  std::vector<std::pair<std::size_t, double>> x;  // post-dropout input
  std::array<double, kMlpHidden> h1pre, h1, h2pre, h2;
  std::array<double, 2> z, p;
};

inline void mlp_forward_into(const MlpParams& m, const FeatureVector& x, bool train_mode,
                             Rng* rng, MlpActivations& a) {
  if (x.dim() != m.input_dim) {
    throw std::runtime_error("mlp: input dim " + std::to_string(x.dim()) +
                             " != model dim " + std::to_string(m.input_dim));
  }
  dropped_input(x, train_mode ? m.dropout_p : 0.0, train_mode ? rng : nullptr, a.x);
  for (std::size_t j = 0; j < kMlpHidden; ++j) a.h1pre[j] = m.b1[j];
  for (const auto& [i, v] : a.x) {
    const double* row = &m.w1[i * kMlpHidden];
    for (std::size_t j = 0; j < kMlpHidden; ++j) a.h1pre[j] += v * row[j];
  }
  for (std::size_t j = 0; j < kMlpHidden; ++j) a.h1[j] = a.h1pre[j] > 0.0 ? a.h1pre[j] : 0.0;
  for (std::size_t j = 0; j < kMlpHidden; ++j) {
    double acc = m.b2[j];
    const double* row = &m.w2[j * kMlpHidden];
    for (std::size_t k = 0; k < kMlpHidden; ++k) acc += row[k] * a.h1[k];
    a.h2pre[j] = acc;
    a.h2[j] = acc > 0.0 ? acc : 0.0;
  }
  for (std::size_t c = 0; c < 2; ++c) {
    double acc = m.b3[c];
    const double* row = &m.w3[c * kMlpHidden];
    for (std::size_t k = 0; k < kMlpHidden; ++k) acc += row[k] * a.h2[k];
    a.z[c] = acc;
  }
  a.p = softmax2(a.z[0], a.z[1]);
}

}  // namespace detail

inline std::array<double, 2> forward_mlp(const MlpParams& m, const FeatureVector& x,
                                         bool train_mode = false, Rng* rng = nullptr) {
  detail::MlpActivations a;
  detail::mlp_forward_into(m, x, train_mode, rng, a);
  return a.p;
}

inline std::array<double, 2> forward_bag_linear(const BagLinearParams& m,
                                                const std::vector<std::string>& tokens) {
  std::vector<std::size_t> ids;
  detail::ngram_buckets(tokens, m.max_order, m.buckets, ids);
  std::vector<double> h(m.embed_dim, 0.0);
  if (!ids.empty()) {
    for (std::size_t id : ids) {
      const double* row = &m.embeddings[id * m.embed_dim];
      for (std::size_t k = 0; k < m.embed_dim; ++k) h[k] += row[k];
    }
    const double inv = 1.0 / static_cast<double>(ids.size());
    for (auto& v : h) v *= inv;
  }
  double z0 = m.out_b[0], z1 = m.out_b[1];
  for (std::size_t k = 0; k < m.embed_dim; ++k) {
    z0 += m.out_w[k] * h[k];
    z1 += m.out_w[m.embed_dim + k] * h[k];
  }
  return detail::softmax2(z0, z1);
}

inline double forward_logreg(const LogRegParams& m, const FeatureVector& x) {
  if (x.dim() != m.w.size()) {
    throw std::runtime_error("logreg: input dim " + std::to_string(x.dim()) +
                             " != weight dim " + std::to_string(m.w.size()));
  }
  double z = m.b;
  x.for_each_nonzero([&](std::size_t i, double v) { z += m.w[i] * v; });
  return detail::sigmoid(z);
}

inline double forward_logreg(const LogRegParams& m, const std::vector<double>& x) {
  return forward_logreg(m, FeatureVector::dense(FeatureKind::Hcf, x));
}

// P(Informative) under whichever parameter set the checkpoint holds.
inline double predict_proba(const Checkpoint& ckpt, const Example& ex) {
  switch (ckpt.kind()) {
    case ModelKind::Mlp:
      return forward_mlp(std::get<MlpParams>(ckpt.params), ex.features)[1];
    case ModelKind::BagLinear:
      return forward_bag_linear(std::get<BagLinearParams>(ckpt.params), ex.tokens)[1];
    case ModelKind::LogReg:
      return forward_logreg(std::get<LogRegParams>(ckpt.params), ex.features);
  }
  return 0.5;
}

// ---------------------------------------------------------------------------
// Losses and gradients (cross-entropy)

struct MlpGrads {
  std::vector<double> w1, b1, w2, b2, w3, b3;
};

struct BagLinearGrads {
  std::vector<double> embeddings, out_w;
  std::array<double, 2> out_b{0.0, 0.0};
};

struct LogRegGrads {
  std::vector<double> w;
  double b = 0.0;
};

inline double mlp_loss(const MlpParams& m, const FeatureVector& x, int label) {
  detail::MlpActivations a;
  detail::mlp_forward_into(m, x, false, nullptr, a);
  return detail::logsumexp2(a.z[0], a.z[1]) - a.z[label];
}

// Accumulates one example's gradients into g (buffers must be param-sized and
// caller-zeroed). `touched_w1` collects w1 rows written, so the training loop
// can reset only those. Returns the example loss.
inline double accumulate_mlp_gradients(const MlpParams& m, const FeatureVector& x, int label,
                                       Rng* dropout_rng, MlpGrads& g,
                                       std::vector<std::size_t>* touched_w1 = nullptr) {
  detail::MlpActivations a;
  detail::mlp_forward_into(m, x, dropout_rng != nullptr, dropout_rng, a);
  const double loss = detail::logsumexp2(a.z[0], a.z[1]) - a.z[label];

  std::array<double, 2> dz = a.p;
  dz[label] -= 1.0;
  std::array<double, kMlpHidden> dh2{};
  for (std::size_t c = 0; c < 2; ++c) {
    g.b3[c] += dz[c];
    double* grow = &g.w3[c * kMlpHidden];
    const double* wrow = &m.w3[c * kMlpHidden];
    for (std::size_t k = 0; k < kMlpHidden; ++k) {
      grow[k] += dz[c] * a.h2[k];
      dh2[k] += dz[c] * wrow[k];
    }
  }
  std::array<double, kMlpHidden> dh1{};
  for (std::size_t j = 0; j < kMlpHidden; ++j) {
    if (a.h2pre[j] <= 0.0) continue;
    const double d = dh2[j];
    g.b2[j] += d;
    double* grow = &g.w2[j * kMlpHidden];
    const double* wrow = &m.w2[j * kMlpHidden];
    for (std::size_t k = 0; k < kMlpHidden; ++k) {
      grow[k] += d * a.h1[k];
      dh1[k] += d * wrow[k];
    }
  }
  for (std::size_t j = 0; j < kMlpHidden; ++j) {
    if (a.h1pre[j] <= 0.0) dh1[j] = 0.0;
    g.b1[j] += dh1[j];
  }
  for (const auto& [i, v] : a.x) {
    double* grow = &g.w1[i * kMlpHidden];
    for (std::size_t j = 0; j < kMlpHidden; ++j) grow[j] += v * dh1[j];
    if (touched_w1) touched_w1->push_back(i);
  }
  return loss;
}

inline double bag_linear_loss(const BagLinearParams& m, const std::vector<std::string>& tokens,
                              int label) {
  std::vector<std::size_t> ids;
  detail::ngram_buckets(tokens, m.max_order, m.buckets, ids);
  std::vector<double> h(m.embed_dim, 0.0);
  if (!ids.empty()) {
    for (std::size_t id : ids) {
      const double* row = &m.embeddings[id * m.embed_dim];
      for (std::size_t k = 0; k < m.embed_dim; ++k) h[k] += row[k];
    }
    for (auto& v : h) v /= static_cast<double>(ids.size());
  }
  double z0 = m.out_b[0], z1 = m.out_b[1];
  for (std::size_t k = 0; k < m.embed_dim; ++k) {
    z0 += m.out_w[k] * h[k];
    z1 += m.out_w[m.embed_dim + k] * h[k];
  }
  return detail::logsumexp2(z0, z1) - (label == 0 ? z0 : z1);
}

inline double accumulate_bag_linear_gradients(const BagLinearParams& m,
                                              const std::vector<std::string>& tokens, int label,
                                              BagLinearGrads& g,
                                              std::vector<std::size_t>* touched_rows = nullptr) {
  std::vector<std::size_t> ids;
  detail::ngram_buckets(tokens, m.max_order, m.buckets, ids);
  std::vector<double> h(m.embed_dim, 0.0);
  if (!ids.empty()) {
    for (std::size_t id : ids) {
      const double* row = &m.embeddings[id * m.embed_dim];
      for (std::size_t k = 0; k < m.embed_dim; ++k) h[k] += row[k];
    }
    for (auto& v : h) v /= static_cast<double>(ids.size());
  }
  double z0 = m.out_b[0], z1 = m.out_b[1];
  for (std::size_t k = 0; k < m.embed_dim; ++k) {
    z0 += m.out_w[k] * h[k];
    z1 += m.out_w[m.embed_dim + k] * h[k];
  }
  const auto p = detail::softmax2(z0, z1);
  const double loss = detail::logsumexp2(z0, z1) - (label == 0 ? z0 : z1);

  std::array<double, 2> dz = p;
  dz[label] -= 1.0;
  std::vector<double> dh(m.embed_dim, 0.0);
  for (std::size_t c = 0; c < 2; ++c) {
    g.out_b[c] += dz[c];
    for (std::size_t k = 0; k < m.embed_dim; ++k) {
      g.out_w[c * m.embed_dim + k] += dz[c] * h[k];
      dh[k] += dz[c] * m.out_w[c * m.embed_dim + k];
    }
  }
  if (!ids.empty()) {
    const double inv = 1.0 / static_cast<double>(ids.size());
    for (std::size_t id : ids) {
      double* grow = &g.embeddings[id * m.embed_dim];
      for (std::size_t k = 0; k < m.embed_dim; ++k) grow[k] += dh[k] * inv;
      if (touched_rows) touched_rows->push_back(id);
    }
  }
  return loss;
}

inline double logreg_loss(const LogRegParams& m, const FeatureVector& x, int label) {
  double z = m.b;
  x.for_each_nonzero([&](std::size_t i, double v) { z += m.w[i] * v; });
  // softplus(z) - y*z, computed stably
  const double sp = (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
  return sp - (label == 1 ? z : 0.0);
}

inline double accumulate_logreg_gradients(const LogRegParams& m, const FeatureVector& x,
                                          int label, LogRegGrads& g,
                                          std::vector<std::size_t>* touched = nullptr) {
  double z = m.b;
  x.for_each_nonzero([&](std::size_t i, double v) { z += m.w[i] * v; });
  const double p = detail::sigmoid(z);
  const double d = p - static_cast<double>(label);
  x.for_each_nonzero([&](std::size_t i, double v) {
    g.w[i] += d * v;
    if (touched) touched->push_back(i);
  });
  g.b += d;
  const double sp = (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
  return sp - (label == 1 ? z : 0.0);
}

// ---------------------------------------------------------------------------
// Parameter initialization (uniform(-r, r), r = sqrt(6/(fan_in+fan_out)),
// biases zero)

namespace detail {

inline void init_uniform(std::vector<double>& v, std::size_t n, double fan_in, double fan_out,
                         Rng& rng) {
  const double r = std::sqrt(6.0 / (fan_in + fan_out));
  v.resize(n);
  for (auto& x : v) x = rng.uniform(-r, r);
}

}  // namespace detail

inline MlpParams init_mlp(std::size_t input_dim, double dropout_p, Rng& rng) {
  MlpParams m;
  m.input_dim = input_dim;
  m.dropout_p = dropout_p;
  const double d = static_cast<double>(input_dim);
  const double h = static_cast<double>(kMlpHidden);
  detail::init_uniform(m.w1, input_dim * kMlpHidden, d, h, rng);
  detail::init_uniform(m.w2, kMlpHidden * kMlpHidden, h, h, rng);
  detail::init_uniform(m.w3, 2 * kMlpHidden, h, 2.0, rng);
  m.b1.assign(kMlpHidden, 0.0);
  m.b2.assign(kMlpHidden, 0.0);
  m.b3.assign(2, 0.0);
  return m;
}

inline BagLinearParams init_bag_linear(std::size_t buckets, std::size_t embed_dim, int max_order,
                                       Rng& rng) {
  BagLinearParams m;
  m.buckets = buckets;
  m.embed_dim = embed_dim;
  m.max_order = max_order;
  detail::init_uniform(m.embeddings, buckets * embed_dim, static_cast<double>(buckets),
                       static_cast<double>(embed_dim), rng);
  detail::init_uniform(m.out_w, 2 * embed_dim, static_cast<double>(embed_dim), 2.0, rng);
  m.out_b = {0.0, 0.0};
  return m;
}

inline LogRegParams init_logreg(std::size_t input_dim, Rng& rng) {
  LogRegParams m;
  detail::init_uniform(m.w, input_dim, static_cast<double>(input_dim), 1.0, rng);
  m.b = 0.0;
  return m;
}

// ---------------------------------------------------------------------------
// Training loop

struct TrainResult {
  Checkpoint best;
  std::vector<double> epoch_val_f1;  // validation F1 after each epoch run
};

// Resumable SGD trainer: pseudo-labelling restarts it from the best
// checkpoint (parameters and RNG state) between rounds.
class Trainer {
 public:
  Trainer(ModelKind kind, const TrainConfig& cfg, const ModelOptions& opts = {})
      : kind_(kind), cfg_(cfg), opts_(opts), rng_(cfg.seed) {
    if (cfg.epochs < 1) throw std::runtime_error("train: epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::runtime_error("train: batch_size must be >= 1");
    if (!(cfg.lr > 0.0)) throw std::runtime_error("train: lr must be positive");
  }

  // Resumes from a checkpoint: parameters, RNG stream, and epoch counter.
  void restore(const Checkpoint& ckpt) {
    if (ckpt.kind() != kind_) throw std::runtime_error("restore: model kind mismatch");
    params_ = ckpt.params;
    rng_ = Rng::deserialize(ckpt.rng_state);
    epochs_done_ = ckpt.epoch;
    initialized_ = true;
  }

  // Rewinds parameters and RNG to a checkpoint without touching the epoch
  // counter; pseudo-labelling uses this to continue from the best checkpoint.
  void rewind(const Checkpoint& ckpt) {
    if (ckpt.kind() != kind_) throw std::runtime_error("rewind: model kind mismatch");
    params_ = ckpt.params;
    rng_ = Rng::deserialize(ckpt.rng_state);
    initialized_ = true;
  }

  // Trains n epochs, evaluating after each; keeps the best-F1 checkpoint seen
  // (ties: earliest epoch).
  void run(const Dataset& train_data, const Dataset& eval_data, int n_epochs) {
    if (train_data.empty()) throw std::runtime_error("train: empty training data");
    if (eval_data.empty()) throw std::runtime_error("train: empty eval split");
    if (!initialized_) initialize(train_data);
    validate_dims(train_data);
    for (int e = 0; e < n_epochs; ++e) {
      sgd_epoch(train_data);
      ++epochs_done_;
      const double f1 = eval_f1(eval_data);
      history_.push_back(f1);
      if (!has_best_ || f1 > best_.val_f1) {
        best_.params = params_;
        best_.epoch = epochs_done_;
        best_.val_f1 = f1;
        best_.rng_state = rng_.serialize();
        best_.seed = cfg_.seed;
        has_best_ = true;
      }
    }
  }

  const Checkpoint& best() const {
    if (!has_best_) throw std::runtime_error("train: no epochs run");
    return best_;
  }
  const std::vector<double>& history() const { return history_; }
  int epochs_done() const { return epochs_done_; }

 private:
  void initialize(const Dataset& train_data) {
    switch (kind_) {
      case ModelKind::Mlp:
        params_ = init_mlp(train_data.front().features.dim(), opts_.mlp_dropout, rng_);
        break;
      case ModelKind::BagLinear:
        params_ = init_bag_linear(opts_.bag_buckets, opts_.bag_embed_dim, opts_.bag_max_order,
                                  rng_);
        break;
      case ModelKind::LogReg:
        params_ = init_logreg(train_data.front().features.dim(), rng_);
        break;
    }
    initialized_ = true;
  }

  void validate_dims(const Dataset& data) const {
    if (kind_ == ModelKind::BagLinear) return;
    const std::size_t dim = kind_ == ModelKind::Mlp
                                ? std::get<MlpParams>(params_).input_dim
                                : std::get<LogRegParams>(params_).w.size();
    for (const auto& ex : data) {
      if (ex.features.dim() != dim) {
        throw std::runtime_error("train: inconsistent feature dim for id " + ex.id);
      }
    }
  }

  void sgd_epoch(const Dataset& data) {
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng_.shuffle(order);
    const std::size_t bs = static_cast<std::size_t>(cfg_.batch_size);
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t end = std::min(order.size(), start + bs);
      double batch_loss = 0.0;
      switch (kind_) {
        case ModelKind::Mlp:
          batch_loss = mlp_batch(data, order, start, end);
          break;
        case ModelKind::BagLinear:
          batch_loss = bag_batch(data, order, start, end);
          break;
        case ModelKind::LogReg:
          batch_loss = logreg_batch(data, order, start, end);
          break;
      }
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error("train: non-finite loss at epoch " +
                                 std::to_string(epochs_done_ + 1) + ", batch starting at " +
                                 std::to_string(start));
      }
    }
  }

  double mlp_batch(const Dataset& data, const std::vector<std::size_t>& order,
                   std::size_t start, std::size_t end) {
    auto& m = std::get<MlpParams>(params_);
    if (mlp_g_.w1.size() != m.w1.size()) {
      mlp_g_.w1.assign(m.w1.size(), 0.0);
      mlp_g_.b1.assign(kMlpHidden, 0.0);
      mlp_g_.w2.assign(kMlpHidden * kMlpHidden, 0.0);
      mlp_g_.b2.assign(kMlpHidden, 0.0);
      mlp_g_.w3.assign(2 * kMlpHidden, 0.0);
      mlp_g_.b3.assign(2, 0.0);
    }
    touched_.clear();
    double loss = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const auto& ex = data[order[i]];
      loss += accumulate_mlp_gradients(m, ex.features, ex.label, &rng_, mlp_g_, &touched_);
    }
    const double step = cfg_.lr / static_cast<double>(end - start);
    // Dense layers update fully; w1 updates and grad resets touch only the
    // rows active in this batch.
    for (std::size_t i = 0; i < touched_.size(); ++i) {
      const std::size_t row = touched_[i] * kMlpHidden;
      for (std::size_t j = 0; j < kMlpHidden; ++j) {
        m.w1[row + j] -= step * mlp_g_.w1[row + j];
        mlp_g_.w1[row + j] = 0.0;
      }
    }
    apply_dense(m.b1, mlp_g_.b1, step);
    apply_dense(m.w2, mlp_g_.w2, step);
    apply_dense(m.b2, mlp_g_.b2, step);
    apply_dense(m.w3, mlp_g_.w3, step);
    apply_dense(m.b3, mlp_g_.b3, step);
    return loss / static_cast<double>(end - start);
  }

  double bag_batch(const Dataset& data, const std::vector<std::size_t>& order,
                   std::size_t start, std::size_t end) {
    auto& m = std::get<BagLinearParams>(params_);
    if (bag_g_.embeddings.size() != m.embeddings.size()) {
      bag_g_.embeddings.assign(m.embeddings.size(), 0.0);
      bag_g_.out_w.assign(2 * m.embed_dim, 0.0);
    }
    bag_g_.out_b = {0.0, 0.0};
    touched_.clear();
    double loss = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const auto& ex = data[order[i]];
      loss += accumulate_bag_linear_gradients(m, ex.tokens, ex.label, bag_g_, &touched_);
    }
    const double step = cfg_.lr / static_cast<double>(end - start);
    for (std::size_t id : touched_) {
      const std::size_t row = id * m.embed_dim;
      for (std::size_t k = 0; k < m.embed_dim; ++k) {
        m.embeddings[row + k] -= step * bag_g_.embeddings[row + k];
        bag_g_.embeddings[row + k] = 0.0;
      }
    }
    apply_dense(m.out_w, bag_g_.out_w, step);
    m.out_b[0] -= step * bag_g_.out_b[0];
    m.out_b[1] -= step * bag_g_.out_b[1];
    return loss / static_cast<double>(end - start);
  }

  double logreg_batch(const Dataset& data, const std::vector<std::size_t>& order,
                      std::size_t start, std::size_t end) {
    auto& m = std::get<LogRegParams>(params_);
    if (lr_g_.w.size() != m.w.size()) lr_g_.w.assign(m.w.size(), 0.0);
    lr_g_.b = 0.0;
    touched_.clear();
    double loss = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const auto& ex = data[order[i]];
      loss += accumulate_logreg_gradients(m, ex.features, ex.label, lr_g_, &touched_);
    }
    const double step = cfg_.lr / static_cast<double>(end - start);
    for (std::size_t i : touched_) {
      m.w[i] -= step * lr_g_.w[i];
      lr_g_.w[i] = 0.0;
    }
    m.b -= step * lr_g_.b;
    return loss / static_cast<double>(end - start);
  }

  static void apply_dense(std::vector<double>& param, std::vector<double>& grad, double step) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      param[i] -= step * grad[i];
      grad[i] = 0.0;
    }
  }

  double eval_f1(const Dataset& eval_data) {
    std::vector<int> preds, labels;
    preds.reserve(eval_data.size());
    labels.reserve(eval_data.size());
    Checkpoint view;
    view.params = params_;
    for (const auto& ex : eval_data) {
      preds.push_back(predict_proba(view, ex) > 0.5 ? 1 : 0);
      labels.push_back(ex.label);
    }
    return compute_metrics(preds, labels).f1;
  }

  ModelKind kind_;
  TrainConfig cfg_;
  ModelOptions opts_;
  Rng rng_;
  std::variant<MlpParams, BagLinearParams, LogRegParams> params_;
  bool initialized_ = false;
  int epochs_done_ = 0;
  Checkpoint best_;
  bool has_best_ = false;
  std::vector<double> history_;
  MlpGrads mlp_g_;
  BagLinearGrads bag_g_;
  LogRegGrads lr_g_;
  std::vector<std::size_t> touched_;
};

// Mini-batch SGD on cross-entropy; returns the best-validation-F1 checkpoint
// (ties: earliest epoch). Deterministic given (data, config).
inline TrainResult train(ModelKind kind, const Dataset& train_data, const Dataset& eval_data,
                         const TrainConfig& cfg, const ModelOptions& opts = {}) {
  Trainer trainer(kind, cfg, opts);
  trainer.run(train_data, eval_data, cfg.epochs);
  return TrainResult{trainer.best(), trainer.history()};
}

// ---------------------------------------------------------------------------
// Checkpoint serialization: versioned little-endian binary container.

namespace detail {

inline void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline void write_str(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
inline void write_vec(std::ostream& out, const std::vector<double>& v) {
  write_u64(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}
inline std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
inline double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
inline std::string read_str(std::istream& in) {
  std::string s(read_u64(in), '\0');
  in.read(s.data(), static_cast<std::streamsize>(s.size()));
  return s;
}
inline std::vector<double> read_vec(std::istream& in) {
  std::vector<double> v(read_u64(in));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  return v;
}

}  // namespace detail

inline void save_checkpoint(const Checkpoint& ckpt, const std::string& path,
                            const std::string& meta = "") {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write("ITCP", 4);
  detail::write_u64(out, 1);  // format version
  detail::write_str(out, meta);
  detail::write_u64(out, static_cast<std::uint64_t>(ckpt.params.index()));
  switch (ckpt.kind()) {
    case ModelKind::Mlp: {
      const auto& m = std::get<MlpParams>(ckpt.params);
      detail::write_u64(out, m.input_dim);
      detail::write_f64(out, m.dropout_p);
      detail::write_vec(out, m.w1);
      detail::write_vec(out, m.b1);
      detail::write_vec(out, m.w2);
      detail::write_vec(out, m.b2);
      detail::write_vec(out, m.w3);
      detail::write_vec(out, m.b3);
      break;
    }
    case ModelKind::BagLinear: {
      const auto& m = std::get<BagLinearParams>(ckpt.params);
      detail::write_u64(out, m.buckets);
      detail::write_u64(out, m.embed_dim);
      detail::write_u64(out, static_cast<std::uint64_t>(m.max_order));
      detail::write_vec(out, m.embeddings);
      detail::write_vec(out, m.out_w);
      detail::write_f64(out, m.out_b[0]);
      detail::write_f64(out, m.out_b[1]);
      break;
    }
    case ModelKind::LogReg: {
      const auto& m = std::get<LogRegParams>(ckpt.params);
      detail::write_vec(out, m.w);
      detail::write_f64(out, m.b);
      break;
    }
  }
  detail::write_u64(out, static_cast<std::uint64_t>(ckpt.epoch));
  detail::write_f64(out, ckpt.val_f1);
  detail::write_u64(out, ckpt.seed);
  detail::write_str(out, ckpt.rng_state);
  if (!out) throw std::runtime_error("short write saving checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path, std::string* meta_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != "ITCP") {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  const auto version = detail::read_u64(in);
  if (version != 1) throw std::runtime_error("unsupported checkpoint version");
  const std::string meta = detail::read_str(in);
  if (meta_out) *meta_out = meta;
  Checkpoint ckpt;
  const auto kind_index = detail::read_u64(in);
  switch (kind_index) {
    case 0: {
      MlpParams m;
      m.input_dim = detail::read_u64(in);
      m.dropout_p = detail::read_f64(in);
      m.w1 = detail::read_vec(in);
      m.b1 = detail::read_vec(in);
      m.w2 = detail::read_vec(in);
      m.b2 = detail::read_vec(in);
      m.w3 = detail::read_vec(in);
      m.b3 = detail::read_vec(in);
      ckpt.params = std::move(m);
      break;
    }
    case 1: {
      BagLinearParams m;
      m.buckets = detail::read_u64(in);
      m.embed_dim = detail::read_u64(in);
      m.max_order = static_cast<int>(detail::read_u64(in));
      m.embeddings = detail::read_vec(in);
      m.out_w = detail::read_vec(in);
      m.out_b[0] = detail::read_f64(in);
      m.out_b[1] = detail::read_f64(in);
      ckpt.params = std::move(m);
      break;
    }
    case 2: {
      LogRegParams m;
      m.w = detail::read_vec(in);
      m.b = detail::read_f64(in);
      ckpt.params = std::move(m);
      break;
    }
    default:
      throw std::runtime_error("bad model kind in checkpoint");
  }
  ckpt.epoch = static_cast<int>(detail::read_u64(in));
  ckpt.val_f1 = detail::read_f64(in);
  ckpt.seed = detail::read_u64(in);
  ckpt.rng_state = detail::read_str(in);
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return ckpt;
}

}  // namespace infotweet
