#pragma once

// Single-binary command surface: normalize, build-vocab, featurize, train,
// pseudo-label, stack, tune-threshold, evaluate, probe, ablate.
//
// Every artifact file embeds {command, config hash, seed, tool version}, so
// re-running with an identical configuration reproduces identical artifacts.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infotweet/builtin_resources.hpp"
#include "infotweet/corpus.hpp"
#include "infotweet/ensemble.hpp"
#include "infotweet/eval.hpp"
#include "infotweet/features.hpp"
#include "infotweet/model.hpp"
#include "infotweet/normalize.hpp"
#include "infotweet/pipeline.hpp"
#include "infotweet/semisup.hpp"

namespace infotweet {
namespace cli {

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

using infotweet::detail::fnv1a64;
using infotweet::detail::join;
using infotweet::detail::read_lines;
using infotweet::detail::skip_meta_header;
using infotweet::detail::split;
using infotweet::detail::split_ws;
using infotweet::detail::to_hex;
using infotweet::detail::trim;

// Sorted key=value lines, hashed; flag order does not matter.
inline std::string config_hash(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::vector<std::string> lines;
  lines.reserve(kv.size());
  for (const auto& [k, v] : kv) lines.push_back(k + "=" + v);
  std::sort(lines.begin(), lines.end());
  std::string blob;
  for (const auto& l : lines) {
    blob += l;
    blob += '\n';
  }
  return to_hex(fnv1a64(blob));
}

inline nlohmann::json artifact_meta(const std::string& command,
                                    const std::vector<std::pair<std::string, std::string>>& kv,
                                    std::uint64_t seed) {
  nlohmann::json meta;
  meta["command"] = command;
  meta["config_hash"] = config_hash(kv);
  meta["seed"] = seed;
  meta["version"] = kToolVersion;
  return meta;
}

inline NormalizationResources resolve_resources(const std::string& dir) {
  if (!dir.empty()) return NormalizationResources::load_dir(dir);
  return NormalizationResources::builtin();
}

struct NormalizedFile {
  std::vector<NormalizedTweet> tweets;
  std::vector<int> labels;
  bool labeled = false;
};

// Normalized TSV: id<TAB>space-joined-tokens[<TAB>label].
inline NormalizedFile load_normalized(const std::string& path, bool expect_labels) {
  NormalizedFile out;
  const auto tweets = infotweet::detail::load_tweets(path, expect_labels);
  out.labeled = expect_labels;
  for (const auto& t : tweets) {
    out.tweets.push_back(NormalizedTweet{t.id, split_ws(t.text), PipelineVariant::Cleaned});
    out.labels.push_back(t.label.value_or(0));
  }
  return out;
}

// Feature file: JSON lines {"id", "label", "kind", "dim", "active" | "values"}.
inline void save_feature_file(const Dataset& examples, FeatureKind kind, std::size_t dim,
                              const std::string& path, const nlohmann::json& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write features: " + path);
  nlohmann::json head;
  head["_meta"] = meta;
  out << head.dump() << "\n";
  for (const auto& ex : examples) {
    nlohmann::json rec;
    rec["id"] = ex.id;
    rec["label"] = ex.label;
    rec["kind"] = kind == FeatureKind::NgramBinary ? "ngram"
                  : kind == FeatureKind::Hcf       ? "hcf"
                                                   : "embedding";
    rec["dim"] = dim;
    if (ex.features.is_binary()) {
      rec["active"] = ex.features.active();
    } else {
      rec["values"] = ex.features.to_dense();
    }
    out << rec.dump() << "\n";
  }
}

inline Dataset load_feature_file(const std::string& path) {
  Dataset out;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    if (rec.contains("_meta")) continue;
    Example ex;
    ex.id = rec.at("id").get<std::string>();
    ex.label = rec.value("label", 0);
    const std::size_t dim = rec.at("dim").get<std::size_t>();
    if (rec.contains("active")) {
      ex.features = FeatureVector::binary(dim, rec["active"].get<std::vector<std::uint32_t>>());
    } else {
      auto values = rec.at("values").get<std::vector<double>>();
      if (values.size() != dim) {
        throw std::runtime_error(path + ": values/dim mismatch for id " + ex.id);
      }
      const std::string kind = rec.value("kind", "hcf");
      ex.features = FeatureVector::dense(
          kind == "embedding" ? FeatureKind::Embedding : FeatureKind::Hcf, std::move(values));
    }
    out.push_back(std::move(ex));
  }
  if (out.empty()) throw std::runtime_error(path + ": no feature records");
  return out;
}

// Loads training inputs for a model kind: token examples from normalized TSV
// for bag-linear, feature JSONL otherwise.
inline Dataset load_model_input(ModelKind kind, const std::string& path) {
  if (kind == ModelKind::BagLinear) {
    auto nf = load_normalized(path, /*expect_labels=*/true);
    return make_token_examples(nf.tweets, nf.labels);
  }
  return load_feature_file(path);
}

inline void write_metrics_file(const Metrics& m, std::size_t n, const nlohmann::json& meta,
                               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write metrics: " + path);
  nlohmann::json j = metrics_to_json(m, n);
  j["meta"] = meta;
  out << j.dump(2) << "\n";
}

inline std::vector<Lexicon> load_lexicons(const std::vector<std::string>& paths) {
  std::vector<Lexicon> out;
  for (const auto& p : paths) out.push_back(load_lexicon(p));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int dispatch(std::vector<std::string> args, std::istream& in_stream = std::cin,
                    std::ostream& out_stream = std::cout, std::ostream& err_stream = std::cerr) {
  CLI::App app{"infotweet: informative-tweet classification toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI config file");
  app.set_version_flag("--version", std::string(kToolVersion));

  // --- normalize ---
  auto* norm_cmd = app.add_subcommand("normalize", "Normalize raw tweets to token sequences");
  std::string n_in = "-", n_out = "-", n_variant = "cleaned", n_resources;
  norm_cmd->add_option("--in", n_in, "Input TSV (id<TAB>text[<TAB>label]); '-' for stdin");
  norm_cmd->add_option("--out", n_out, "Output TSV; '-' for stdout");
  norm_cmd->add_option("--variant", n_variant, "cleaned | num | loc | num-loc");
  norm_cmd->add_option("--resources", n_resources, "Resource directory")
      ->envname("INFOTWEET_RESOURCES");

  // --- build-vocab ---
  auto* vocab_cmd = app.add_subcommand("build-vocab", "Build n-gram vocabulary from training data");
  std::string v_in, v_out;
  std::size_t v_cap = 5000;
  int v_maxn = 3;
  vocab_cmd->add_option("--in", v_in, "Normalized labeled TSV (training split)")->required();
  vocab_cmd->add_option("--out", v_out, "Vocabulary file")->required();
  vocab_cmd->add_option("--cap", v_cap, "Top n-grams per order per class");
  vocab_cmd->add_option("--max-n", v_maxn, "Maximum n-gram order");

  // --- featurize ---
  auto* feat_cmd = app.add_subcommand("featurize", "Turn tweets into feature vectors");
  std::string f_in, f_raw, f_kind = "ngram", f_vocab, f_embeddings, f_out, f_resources;
  std::vector<std::string> f_lexicons;
  std::size_t f_dim = 512;
  bool f_unlabeled = false;
  feat_cmd->add_option("--in", f_in, "Normalized TSV (ngram kind)");
  feat_cmd->add_option("--raw", f_raw, "Raw TSV (hcf/embedding kinds)");
  feat_cmd->add_option("--kind", f_kind, "ngram | hcf | embedding");
  feat_cmd->add_option("--vocab", f_vocab, "Vocabulary file (ngram)");
  feat_cmd->add_option("--lexicon", f_lexicons, "Lexicon file (hcf, repeatable)");
  feat_cmd->add_option("--embeddings", f_embeddings, "Embedding table (embedding)");
  feat_cmd->add_option("--dim", f_dim, "Expected embedding dimension");
  feat_cmd->add_option("--resources", f_resources, "Resource directory")
      ->envname("INFOTWEET_RESOURCES");
  feat_cmd->add_flag("--unlabeled", f_unlabeled, "Inputs carry no labels");
  feat_cmd->add_option("--out", f_out, "Output feature JSONL")->required();

  // --- train ---
  auto* train_cmd = app.add_subcommand("train", "Train a classifier with best-F1 checkpointing");
  std::string t_model = "mlp", t_train, t_eval, t_out;
  TrainConfig t_cfg;
  ModelOptions t_opts;
  train_cmd->add_option("--model", t_model, "mlp | bag-linear | logreg");
  train_cmd->add_option("--train", t_train, "Training features JSONL (or normalized TSV for bag-linear)")
      ->required();
  train_cmd->add_option("--eval", t_eval, "Validation input, same format")->required();
  train_cmd->add_option("--epochs", t_cfg.epochs, "Training epochs");
  train_cmd->add_option("--lr", t_cfg.lr, "Learning rate");
  train_cmd->add_option("--batch-size", t_cfg.batch_size, "Mini-batch size");
  train_cmd->add_option("--seed", t_cfg.seed, "RNG seed");
  train_cmd->add_option("--dropout", t_opts.mlp_dropout, "MLP input dropout");
  train_cmd->add_option("--buckets", t_opts.bag_buckets, "Bag-linear hash buckets");
  train_cmd->add_option("--embed-dim", t_opts.bag_embed_dim, "Bag-linear embedding dim");
  train_cmd->add_option("--out", t_out, "Checkpoint file")->required();

  // --- pseudo-label ---
  auto* pl_cmd = app.add_subcommand("pseudo-label", "Semi-supervised training on an unlabelled pool");
  std::string p_model = "mlp", p_train, p_eval, p_pool, p_out, p_log;
  TrainConfig p_cfg;
  ModelOptions p_opts;
  PseudoLabelConfig p_plc;
  pl_cmd->add_option("--model", p_model, "mlp | bag-linear | logreg");
  pl_cmd->add_option("--train", p_train, "Labelled training input")->required();
  pl_cmd->add_option("--eval", p_eval, "Validation input")->required();
  pl_cmd->add_option("--pool", p_pool, "Unlabelled pool input (same format, no labels)")
      ->required();
  pl_cmd->add_option("--max-epochs", p_plc.max_epochs, "Total supervised epochs");
  pl_cmd->add_option("--round-len", p_plc.round_len, "Epochs between promotion rounds");
  pl_cmd->add_option("--conf-threshold", p_plc.conf_threshold, "Promotion confidence threshold");
  pl_cmd->add_option("--cap", p_plc.batch_cap, "Max promotions per round");
  pl_cmd->add_option("--lr", p_cfg.lr, "Learning rate");
  pl_cmd->add_option("--batch-size", p_cfg.batch_size, "Mini-batch size");
  pl_cmd->add_option("--seed", p_cfg.seed, "RNG seed (training and selection)");
  pl_cmd->add_option("--dropout", p_opts.mlp_dropout, "MLP input dropout");
  pl_cmd->add_option("--buckets", p_opts.bag_buckets, "Bag-linear hash buckets");
  pl_cmd->add_option("--embed-dim", p_opts.bag_embed_dim, "Bag-linear embedding dim");
  pl_cmd->add_option("--out", p_out, "Checkpoint file")->required();
  pl_cmd->add_option("--log", p_log, "Promotion log JSONL");

  // --- stack ---
  auto* stack_cmd = app.add_subcommand("stack", "Fit the logistic-regression meta-learner");
  std::string s_probs, s_labels, s_out;
  TrainConfig s_cfg;
  s_cfg.epochs = 200;
  s_cfg.lr = 0.5;
  stack_cmd->add_option("--probs", s_probs, "Base-classifier probability JSONL")->required();
  stack_cmd->add_option("--labels", s_labels, "Labeled TSV")->required();
  stack_cmd->add_option("--epochs", s_cfg.epochs, "Meta-LR epochs");
  stack_cmd->add_option("--lr", s_cfg.lr, "Meta-LR learning rate");
  stack_cmd->add_option("--batch-size", s_cfg.batch_size, "Mini-batch size");
  stack_cmd->add_option("--seed", s_cfg.seed, "RNG seed");
  stack_cmd->add_option("--out", s_out, "Stacker JSON")->required();

  // --- tune-threshold ---
  auto* tune_cmd = app.add_subcommand("tune-threshold", "Pick the F1-maximizing decision threshold");
  std::string tt_probs, tt_labels, tt_stacker, tt_out;
  double tt_step = 1e-4;
  tune_cmd->add_option("--probs", tt_probs, "Probability JSONL (single column, or with --stacker)")
      ->required();
  tune_cmd->add_option("--labels", tt_labels, "Labeled TSV (tuning split)")->required();
  tune_cmd->add_option("--stacker", tt_stacker, "Apply this stacker to the probability rows");
  tune_cmd->add_option("--grid-step", tt_step, "Threshold grid step");
  tune_cmd->add_option("--out", tt_out, "Write updated stacker JSON here");

  // --- evaluate ---
  auto* eval_cmd = app.add_subcommand("evaluate", "Compute Informative-class P/R/F1 and accuracy");
  std::string e_probs, e_labels, e_stacker, e_checkpoint, e_in, e_column, e_out;
  double e_threshold = 0.5;
  eval_cmd->add_option("--probs", e_probs, "Probability JSONL");
  eval_cmd->add_option("--labels", e_labels, "Labeled TSV (required with --probs)");
  eval_cmd->add_option("--column", e_column, "Model column to evaluate (default: only column)");
  eval_cmd->add_option("--stacker", e_stacker, "Evaluate this stacker over the probability rows");
  eval_cmd->add_option("--checkpoint", e_checkpoint, "Evaluate a trained checkpoint");
  eval_cmd->add_option("--in", e_in, "Labelled input for --checkpoint (features JSONL or normalized TSV)");
  eval_cmd->add_option("--threshold", e_threshold, "Decision threshold (predict 1 iff p > t)");
  eval_cmd->add_option("--out", e_out, "Metrics JSON");

  // --- probe ---
  auto* probe_cmd = app.add_subcommand("probe", "Run token-substitution probe templates");
  std::vector<std::string> pr_templates;
  std::string pr_checkpoint, pr_vocab, pr_mock, pr_resources, pr_out;
  std::vector<std::string> pr_lexicons;
  probe_cmd->add_option("--template", pr_templates, "Probe template JSON (repeatable)")
      ->required();
  probe_cmd->add_option("--checkpoint", pr_checkpoint, "Model checkpoint to probe");
  probe_cmd->add_option("--vocab", pr_vocab, "Vocabulary (vector models over n-grams)");
  probe_cmd->add_option("--lexicon", pr_lexicons, "Lexicon file (vector models over HCF)");
  probe_cmd->add_option("--mock", pr_mock, "JSON map of joined tokens -> label (testing)");
  probe_cmd->add_option("--resources", pr_resources, "Resource directory")
      ->envname("INFOTWEET_RESOURCES");
  probe_cmd->add_option("--out", pr_out, "Report JSON");

  // --- ablate ---
  auto* abl_cmd = app.add_subcommand("ablate", "Train across all four preprocessing variants");
  std::string a_train, a_eval, a_model = "mlp", a_resources, a_out;
  TrainConfig a_cfg;
  ModelOptions a_opts;
  a_opts.bag_buckets = std::size_t(1) << 18;
  std::size_t a_cap = 5000;
  abl_cmd->add_option("--train", a_train, "Raw labeled training TSV")->required();
  abl_cmd->add_option("--eval", a_eval, "Raw labeled validation TSV")->required();
  abl_cmd->add_option("--model", a_model, "mlp | bag-linear | logreg");
  abl_cmd->add_option("--cap", a_cap, "Vocabulary cap per order per class");
  abl_cmd->add_option("--epochs", a_cfg.epochs, "Training epochs");
  abl_cmd->add_option("--lr", a_cfg.lr, "Learning rate");
  abl_cmd->add_option("--batch-size", a_cfg.batch_size, "Mini-batch size");
  abl_cmd->add_option("--seed", a_cfg.seed, "RNG seed");
  abl_cmd->add_option("--resources", a_resources, "Resource directory")
      ->envname("INFOTWEET_RESOURCES");
  abl_cmd->add_option("--out", a_out, "Comparison report JSON");

  std::vector<const char*> argv;
  argv.push_back("infotweet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out_stream << app.help() << std::flush;
    return 0;
  } catch (const CLI::CallForVersion&) {
    out_stream << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err_stream << "error: " << e.what() << "\n";
    err_stream << "run 'infotweet --help' for usage\n";
    return 2;
  }

  try {
    if (norm_cmd->parsed()) {
      const PipelineVariant variant = variant_from_name(n_variant);
      const auto res = detail::resolve_resources(n_resources);
      std::vector<std::pair<std::string, std::string>> kv = {
          {"in", n_in}, {"out", n_out}, {"variant", n_variant}, {"resources", n_resources}};
      const auto meta = detail::artifact_meta("normalize", kv, 0);

      std::ifstream file_in;
      std::istream* src = &in_stream;
      if (n_in != "-") {
        file_in.open(n_in, std::ios::binary);
        if (!file_in) throw std::runtime_error("cannot open input: " + n_in);
        src = &file_in;
      }
      std::ofstream file_out;
      std::ostream* dst = &out_stream;
      if (n_out != "-") {
        file_out.open(n_out, std::ios::binary);
        if (!file_out) throw std::runtime_error("cannot write output: " + n_out);
        dst = &file_out;
        *dst << "# " << meta.dump() << "\n";
      }
      std::string line;
      std::size_t lineno = 0;
      std::set<std::string> seen;
      while (std::getline(*src, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = detail::split(line, '\t');
        if (fields.size() != 2 && fields.size() != 3) {
          throw std::runtime_error("line " + std::to_string(lineno) +
                                   ": expected id<TAB>text[<TAB>label]");
        }
        Tweet t;
        t.id = fields[0];
        t.text = fields[1];
        if (!infotweet::detail::is_valid_utf8(t.text)) {
          throw std::runtime_error("line " + std::to_string(lineno) + ": invalid UTF-8");
        }
        if (!seen.insert(t.id).second) {
          throw std::runtime_error("line " + std::to_string(lineno) + ": duplicate id " + t.id);
        }
        auto norm = normalize(t, variant, res);
        *dst << t.id << '\t' << detail::join(norm.tokens, " ");
        if (fields.size() == 3) *dst << '\t' << fields[2];
        *dst << "\n";
      }
      return 0;
    }

    if (vocab_cmd->parsed()) {
      auto nf = detail::load_normalized(v_in, /*expect_labels=*/true);
      auto vocab = build_ngram_vocab(nf.tweets, nf.labels, v_cap, v_maxn);
      std::vector<std::pair<std::string, std::string>> kv = {{"in", v_in},
                                                             {"cap", std::to_string(v_cap)},
                                                             {"max_n", std::to_string(v_maxn)}};
      save_vocabulary(vocab, v_out, {detail::artifact_meta("build-vocab", kv, 0).dump()});
      out_stream << "vocabulary: " << vocab.size() << " n-grams -> " << v_out << "\n";
      return 0;
    }

    if (feat_cmd->parsed()) {
      std::vector<std::pair<std::string, std::string>> kv = {
          {"kind", f_kind}, {"in", f_in}, {"raw", f_raw}, {"vocab", f_vocab}};
      const auto meta = detail::artifact_meta("featurize", kv, 0);
      Dataset examples;
      FeatureKind kind;
      std::size_t dim = 0;
      if (f_kind == "ngram") {
        if (f_vocab.empty() || f_in.empty()) {
          throw std::runtime_error("featurize --kind ngram needs --in and --vocab");
        }
        auto nf = detail::load_normalized(f_in, !f_unlabeled);
        auto vocab = load_vocabulary(f_vocab);
        examples = make_ngram_examples(nf.tweets, nf.labels, vocab);
        kind = FeatureKind::NgramBinary;
        dim = vocab.size();
      } else if (f_kind == "hcf") {
        if (f_raw.empty()) throw std::runtime_error("featurize --kind hcf needs --raw");
        const auto res = detail::resolve_resources(f_resources);
        auto tweets = infotweet::detail::load_tweets(f_raw, !f_unlabeled);
        auto norm = normalize_tweets(tweets, PipelineVariant::Cleaned, res);
        examples = make_hcf_examples(tweets, norm, detail::load_lexicons(f_lexicons),
                                     res.gazetteer);
        kind = FeatureKind::Hcf;
        dim = examples.empty() ? 0 : examples.front().features.dim();
      } else if (f_kind == "embedding") {
        if (f_raw.empty() || f_embeddings.empty()) {
          throw std::runtime_error("featurize --kind embedding needs --raw and --embeddings");
        }
        auto tweets = infotweet::detail::load_tweets(f_raw, !f_unlabeled);
        auto table = load_embeddings(f_embeddings, f_dim);
        examples = make_embedding_examples(tweets, table);
        kind = FeatureKind::Embedding;
        dim = f_dim;
      } else {
        throw std::runtime_error("unknown feature kind: " + f_kind);
      }
      detail::save_feature_file(examples, kind, dim, f_out, meta);
      out_stream << "featurized " << examples.size() << " tweets (dim " << dim << ") -> "
                 << f_out << "\n";
      return 0;
    }

    if (train_cmd->parsed()) {
      const ModelKind kind = model_kind_from_name(t_model);
      Dataset train_data = detail::load_model_input(kind, t_train);
      Dataset eval_data = detail::load_model_input(kind, t_eval);
      TrainResult result = train(kind, train_data, eval_data, t_cfg, t_opts);
      std::vector<std::pair<std::string, std::string>> kv = {
          {"model", t_model},
          {"train", t_train},
          {"eval", t_eval},
          {"epochs", std::to_string(t_cfg.epochs)},
          {"lr", std::to_string(t_cfg.lr)},
          {"batch_size", std::to_string(t_cfg.batch_size)},
          {"seed", std::to_string(t_cfg.seed)}};
      save_checkpoint(result.best, t_out,
                      detail::artifact_meta("train", kv, t_cfg.seed).dump());
      out_stream << "best checkpoint: epoch " << result.best.epoch << ", val F1 "
                 << result.best.val_f1 << " -> " << t_out << "\n";
      return 0;
    }

    if (pl_cmd->parsed()) {
      const ModelKind kind = model_kind_from_name(p_model);
      Dataset labelled = detail::load_model_input(kind, p_train);
      Dataset eval_data = detail::load_model_input(kind, p_eval);
      Dataset pool;
      if (kind == ModelKind::BagLinear) {
        auto nf = detail::load_normalized(p_pool, /*expect_labels=*/false);
        pool = make_token_examples(nf.tweets, {});
      } else {
        pool = detail::load_feature_file(p_pool);
      }
      p_plc.seed = p_cfg.seed;
      auto result = train_with_pseudo_labelling(labelled, pool, kind, p_plc, p_cfg, eval_data,
                                                p_opts);
      std::vector<std::pair<std::string, std::string>> kv = {
          {"model", p_model},
          {"train", p_train},
          {"eval", p_eval},
          {"pool", p_pool},
          {"max_epochs", std::to_string(p_plc.max_epochs)},
          {"round_len", std::to_string(p_plc.round_len)},
          {"conf_threshold", std::to_string(p_plc.conf_threshold)},
          {"cap", std::to_string(p_plc.batch_cap)},
          {"seed", std::to_string(p_cfg.seed)}};
      const auto meta = detail::artifact_meta("pseudo-label", kv, p_cfg.seed);
      save_checkpoint(result.best, p_out, meta.dump());
      if (!p_log.empty()) save_promotion_log(result.promotions, p_log, {meta.dump()});
      out_stream << "pseudo-labelling: " << result.promotions.size() << " promotions, best F1 "
                 << result.best.val_f1 << " (epoch " << result.best.epoch << ") -> " << p_out
                 << "\n";
      return 0;
    }

    if (stack_cmd->parsed()) {
      auto table = load_probabilities(s_probs);
      auto labels = load_labeled_dataset(s_labels);
      Stacker stacker = fit_stacker(table, labels, s_cfg);
      std::vector<std::pair<std::string, std::string>> kv = {
          {"probs", s_probs},
          {"labels", s_labels},
          {"epochs", std::to_string(s_cfg.epochs)},
          {"lr", std::to_string(s_cfg.lr)},
          {"seed", std::to_string(s_cfg.seed)}};
      save_stacker(stacker, s_out, detail::artifact_meta("stack", kv, s_cfg.seed));
      out_stream << "stacker over " << stacker.base_names.size() << " base classifiers -> "
                 << s_out << "\n";
      return 0;
    }

    if (tune_cmd->parsed()) {
      auto table = load_probabilities(tt_probs);
      auto labels = load_labeled_dataset(tt_labels);
      std::vector<double> probs;
      std::vector<int> y;
      std::optional<Stacker> stacker;
      if (!tt_stacker.empty()) stacker = load_stacker(tt_stacker);
      for (const auto& t : labels.tweets) {
        auto it = table.rows.find(t.id);
        if (it == table.rows.end()) {
          throw std::runtime_error("no probability row for id " + t.id);
        }
        if (stacker) {
          probs.push_back(predict_ensemble(*stacker, it->second).first);
        } else {
          if (it->second.size() != 1) {
            throw std::runtime_error("tune-threshold without --stacker expects a single-column "
                                     "probability file");
          }
          probs.push_back(it->second[0]);
        }
        y.push_back(t.label.value_or(0));
      }
      const double tau = tune_threshold(probs, y, tt_step);
      const double f1_tuned = f1_at_threshold(probs, y, tau);
      const double f1_default = f1_at_threshold(probs, y, 0.5);
      out_stream << "tuned threshold: " << tau << "\n";
      out_stream << "F1 at tuned threshold: " << f1_tuned << "\n";
      out_stream << "F1 at 0.5: " << f1_default << "\n";
      if (!tt_out.empty()) {
        Stacker s = stacker.value_or(Stacker{table.model_names, LogRegParams{{1.0}, 0.0}, 0.5});
        s.threshold = tau;
        std::vector<std::pair<std::string, std::string>> kv = {
            {"probs", tt_probs}, {"labels", tt_labels}, {"grid_step", std::to_string(tt_step)}};
        save_stacker(s, tt_out, detail::artifact_meta("tune-threshold", kv, 0));
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      std::vector<int> preds, y;
      std::size_t n = 0;
      if (!e_checkpoint.empty()) {
        if (e_in.empty()) throw std::runtime_error("evaluate --checkpoint needs --in");
        Checkpoint ckpt = load_checkpoint(e_checkpoint);
        Dataset data = detail::load_model_input(ckpt.kind(), e_in);
        for (const auto& ex : data) {
          preds.push_back(predict_proba(ckpt, ex) > e_threshold ? 1 : 0);
          y.push_back(ex.label);
        }
        n = data.size();
      } else if (!e_probs.empty()) {
        if (e_labels.empty()) throw std::runtime_error("evaluate --probs needs --labels");
        auto table = load_probabilities(e_probs);
        auto labels = load_labeled_dataset(e_labels);
        std::optional<Stacker> stacker;
        if (!e_stacker.empty()) stacker = load_stacker(e_stacker);
        std::size_t column = 0;
        if (!e_column.empty()) {
          auto it = std::find(table.model_names.begin(), table.model_names.end(), e_column);
          if (it == table.model_names.end()) {
            throw std::runtime_error("no such model column: " + e_column);
          }
          column = static_cast<std::size_t>(it - table.model_names.begin());
        } else if (!stacker && table.model_names.size() != 1) {
          throw std::runtime_error("probability file has several columns; pick one with "
                                   "--column or supply --stacker");
        }
        for (const auto& t : labels.tweets) {
          auto it = table.rows.find(t.id);
          if (it == table.rows.end()) {
            throw std::runtime_error("no probability row for id " + t.id);
          }
          if (stacker) {
            preds.push_back(predict_ensemble(*stacker, it->second).second);
          } else {
            preds.push_back(it->second[column] > e_threshold ? 1 : 0);
          }
          y.push_back(t.label.value_or(0));
        }
        n = labels.tweets.size();
      } else {
        throw std::runtime_error("evaluate needs --checkpoint or --probs");
      }
      const Metrics m = compute_metrics(preds, y);
      out_stream << "n=" << n << " accuracy=" << m.accuracy << " precision=" << m.precision
                 << " recall=" << m.recall << " f1=" << m.f1 << "\n";
      if (!e_out.empty()) {
        std::vector<std::pair<std::string, std::string>> kv = {
            {"probs", e_probs},
            {"labels", e_labels},
            {"checkpoint", e_checkpoint},
            {"in", e_in},
            {"threshold", std::to_string(e_threshold)}};
        detail::write_metrics_file(m, n, detail::artifact_meta("evaluate", kv, 0), e_out);
      }
      return 0;
    }

    if (probe_cmd->parsed()) {
      const auto res = detail::resolve_resources(pr_resources);
      std::vector<ProbeTemplate> templates;
      for (const auto& path : pr_templates) templates.push_back(load_probe_template(path));

      ProbePredictor predictor;
      if (!pr_mock.empty()) {
        std::ifstream in(pr_mock);
        if (!in) throw std::runtime_error("cannot open mock file: " + pr_mock);
        nlohmann::json j;
        in >> j;
        auto table = std::make_shared<std::map<std::string, int>>();
        for (auto it = j.begin(); it != j.end(); ++it) (*table)[it.key()] = it.value().get<int>();
        predictor = [table](const std::vector<std::string>& tokens) {
          auto key = infotweet::detail::join(tokens, " ");
          auto found = table->find(key);
          if (found == table->end()) {
            throw std::runtime_error("mock predictor has no entry for: " + key);
          }
          return found->second;
        };
      } else if (!pr_checkpoint.empty()) {
        auto ckpt = std::make_shared<Checkpoint>(load_checkpoint(pr_checkpoint));
        if (ckpt->kind() == ModelKind::BagLinear) {
          predictor = [ckpt](const std::vector<std::string>& tokens) {
            Example ex;
            ex.tokens = tokens;
            return predict_proba(*ckpt, ex) > 0.5 ? 1 : 0;
          };
        } else if (!pr_vocab.empty()) {
          auto vocab = std::make_shared<Vocabulary>(load_vocabulary(pr_vocab));
          predictor = [ckpt, vocab](const std::vector<std::string>& tokens) {
            Example ex;
            ex.features = featurize_ngram(tokens, *vocab);
            return predict_proba(*ckpt, ex) > 0.5 ? 1 : 0;
          };
        } else if (!pr_lexicons.empty()) {
          auto lex = std::make_shared<std::vector<Lexicon>>(detail::load_lexicons(pr_lexicons));
          auto gaz = std::make_shared<std::set<std::string>>(res.gazetteer);
          predictor = [ckpt, lex, gaz](const std::vector<std::string>& tokens) {
            Example ex;
            ex.features =
                featurize_hcf(tokens, infotweet::detail::join(tokens, " "), *lex, *gaz);
            return predict_proba(*ckpt, ex) > 0.5 ? 1 : 0;
          };
        } else {
          throw std::runtime_error("probe with a vector-model checkpoint needs --vocab or "
                                   "--lexicon");
        }
      } else {
        throw std::runtime_error("probe needs --checkpoint or --mock");
      }

      auto report = run_probes(predictor, templates, res);
      nlohmann::json j;
      std::vector<std::pair<std::string, std::string>> kv = {
          {"templates", detail::join(pr_templates, ",")},
          {"checkpoint", pr_checkpoint},
          {"mock", pr_mock}};
      j["meta"] = detail::artifact_meta("probe", kv, 0);
      j["results"] = probe_report_to_json(report);
      if (!pr_out.empty()) {
        std::ofstream out(pr_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report: " + pr_out);
        out << j.dump(2) << "\n";
      }
      for (const auto& r : report) {
        out_stream << r.name << ": predictions [";
        for (std::size_t i = 0; i < r.predictions.size(); ++i) {
          if (i) out_stream << ", ";
          out_stream << r.predictions[i];
        }
        out_stream << "], flips " << r.flips << "\n";
      }
      return 0;
    }

    if (abl_cmd->parsed()) {
      const ModelKind kind = model_kind_from_name(a_model);
      const auto res = detail::resolve_resources(a_resources);
      auto train_raw = load_labeled_dataset(a_train, "train");
      auto eval_raw = load_labeled_dataset(a_eval, "validation");
      const auto train_labels = dataset_labels(train_raw.tweets);
      const auto eval_labels = dataset_labels(eval_raw.tweets);

      nlohmann::json rows = nlohmann::json::array();
      out_stream << "variant      n-grams   val-F1    val-acc\n";
      for (PipelineVariant variant :
           {PipelineVariant::Cleaned, PipelineVariant::NumReplaced, PipelineVariant::LocReplaced,
            PipelineVariant::NumLocReplaced}) {
        auto train_norm = normalize_tweets(train_raw.tweets, variant, res);
        auto eval_norm = normalize_tweets(eval_raw.tweets, variant, res);
        Dataset train_data, eval_data;
        if (kind == ModelKind::BagLinear) {
          train_data = make_token_examples(train_norm, train_labels);
          eval_data = make_token_examples(eval_norm, eval_labels);
        } else {
          auto vocab = build_ngram_vocab(train_norm, train_labels, a_cap);
          train_data = make_ngram_examples(train_norm, train_labels, vocab);
          eval_data = make_ngram_examples(eval_norm, eval_labels, vocab);
        }
        TrainResult result = train(kind, train_data, eval_data, a_cfg, a_opts);
        std::vector<int> preds, y;
        for (const auto& ex : eval_data) {
          preds.push_back(predict_proba(result.best, ex) > 0.5 ? 1 : 0);
          y.push_back(ex.label);
        }
        const Metrics m = compute_metrics(preds, y);
        char line[128];
        std::snprintf(line, sizeof(line), "%-12s %8zu   %.4f    %.4f\n",
                      variant_name(variant).c_str(),
                      kind == ModelKind::BagLinear ? std::size_t(0)
                                                   : train_data.front().features.dim(),
                      m.f1, m.accuracy);
        out_stream << line;
        nlohmann::json row;
        row["variant"] = variant_name(variant);
        row["f1"] = m.f1;
        row["accuracy"] = m.accuracy;
        row["precision"] = m.precision;
        row["recall"] = m.recall;
        rows.push_back(row);
      }
      if (!a_out.empty()) {
        std::vector<std::pair<std::string, std::string>> kv = {
            {"train", a_train},
            {"eval", a_eval},
            {"model", a_model},
            {"epochs", std::to_string(a_cfg.epochs)},
            {"seed", std::to_string(a_cfg.seed)}};
        nlohmann::json j;
        j["meta"] = detail::artifact_meta("ablate", kv, a_cfg.seed);
        j["rows"] = rows;
        std::ofstream out(a_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report: " + a_out);
        out << j.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err_stream << "error: " << e.what() << "\n";
    return 1;
  }
  err_stream << "error: no command\n";
  return 2;
}

}  // namespace cli
}  // namespace infotweet
