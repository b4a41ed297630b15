#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "infotweet/ensemble.hpp"
#include "infotweet/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace infotweet;

namespace {

// Base table whose single column nearly equals the label.
std::pair<ProbabilityTable, LabeledDataset> near_perfect_base(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ProbabilityTable table;
  table.model_names = {"base"};
  LabeledDataset labels;
  labels.name = "validation";
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(rng.below(2));
    const double p = y == 1 ? 0.99 : 0.01;
    const std::string id = "t" + std::to_string(i);
    table.rows[id] = {p + rng.uniform(-0.01, 0.01)};
    labels.tweets.push_back(Tweet{id, "text", y});
  }
  return {table, labels};
}

}  // namespace

TEST_CASE("fit_stacker reaches F1 1.0 on a near-separable single base") {
  auto [table, labels] = near_perfect_base(80, 3);
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.lr = 0.5;
  cfg.seed = 1;
  Stacker s = fit_stacker(table, labels, cfg);
  CHECK(s.threshold == 0.5);
  REQUIRE(s.base_names == std::vector<std::string>{"base"});
  std::vector<int> preds, y;
  for (const auto& t : labels.tweets) {
    preds.push_back(predict_ensemble(s, table.rows.at(t.id)).second);
    y.push_back(*t.label);
  }
  CHECK(compute_metrics(preds, y).f1 == 1.0);
}

TEST_CASE("duplicated base column leaves predictions unchanged") {
  auto [single, labels] = near_perfect_base(60, 7);
  ProbabilityTable doubled;
  doubled.model_names = {"a", "b"};
  for (const auto& [id, row] : single.rows) doubled.rows[id] = {row[0], row[0]};

  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.lr = 0.5;
  cfg.seed = 2;
  Stacker s1 = fit_stacker(single, labels, cfg);
  Stacker s2 = fit_stacker(doubled, labels, cfg);
  for (const auto& t : labels.tweets) {
    const double p = single.rows.at(t.id)[0];
    CHECK(predict_ensemble(s1, {p}).second == predict_ensemble(s2, {p, p}).second);
  }
}

TEST_CASE("fit_stacker rejects degenerate and mismatched inputs") {
  auto [table, labels] = near_perfect_base(20, 9);
  TrainConfig cfg;

  SECTION("single-class labels") {
    for (auto& t : labels.tweets) t.label = 1;
    REQUIRE_THROWS_WITH(fit_stacker(table, labels, cfg),
                        Catch::Matchers::ContainsSubstring("degenerate"));
  }
  SECTION("missing probability row") {
    labels.tweets.push_back(Tweet{"unknown", "text", 0});
    REQUIRE_THROWS_WITH(fit_stacker(table, labels, cfg),
                        Catch::Matchers::ContainsSubstring("unknown"));
  }
}

TEST_CASE("tune_threshold returns the smallest grid maximizer") {
  SECTION("spec example: plateau starts just above 0.2") {
    const double tau = tune_threshold({0.1, 0.2, 0.9}, {0, 0, 1});
    CHECK_THAT(tau, Catch::Matchers::WithinAbs(0.2001, 1e-12));
    CHECK(f1_at_threshold({0.1, 0.2, 0.9}, {0, 0, 1}, tau) == 1.0);
  }
  SECTION("perfectly calibrated probabilities give F1 1.0") {
    std::vector<double> probs = {0.0, 1.0, 1.0, 0.0, 1.0};
    std::vector<int> labels = {0, 1, 1, 0, 1};
    const double tau = tune_threshold(probs, labels);
    CHECK(f1_at_threshold(probs, labels, tau) == 1.0);
  }
  SECTION("empty input is an error") {
    REQUIRE_THROWS(tune_threshold({}, {}));
  }
}

TEST_CASE("tune_threshold matches the independent exhaustive-scan oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    std::vector<double> probs(n);
    std::vector<int> labels(n);
    bool has_pos = false;
    for (std::size_t i = 0; i < n; ++i) {
      probs[i] = rng.uniform();
      labels[i] = static_cast<int>(rng.below(2));
      has_pos |= labels[i] == 1;
    }
    if (!has_pos) labels[0] = 1;
    const double step = 1e-3;  // coarser grid keeps the oracle loop honest and fast
    const double got = tune_threshold(probs, labels, step);
    const double want = oracles::scan_threshold(probs, labels, step);
    INFO("trial " << trial);
    CHECK_THAT(got, Catch::Matchers::WithinAbs(want, 1e-12));
  }
}

TEST_CASE("tuned threshold never loses to 0.5 on the tuning set") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> probs(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      probs[i] = rng.uniform();
      labels[i] = static_cast<int>(rng.below(2));
    }
    labels[0] = 1;
    const double tau = tune_threshold(probs, labels);
    CHECK(f1_at_threshold(probs, labels, tau) >= f1_at_threshold(probs, labels, 0.5));
  }
}

TEST_CASE("predict_ensemble decision rule") {
  Stacker s;
  s.base_names = {"m"};
  s.meta.w = {1.0};
  s.meta.b = 0.0;
  s.threshold = 0.5;

  SECTION("probability exactly at the threshold gives label 0") {
    // w=0, b=0 -> p = 0.5 exactly
    Stacker zero;
    zero.base_names = {"m"};
    zero.meta.w = {0.0};
    zero.meta.b = 0.0;
    zero.threshold = 0.5;
    auto [p, label] = predict_ensemble(zero, {0.9});
    CHECK(p == 0.5);
    CHECK(label == 0);
  }
  SECTION("paper threshold semantics: p=0.52 vs threshold 0.5168") {
    Stacker tuned;
    tuned.base_names = {"m"};
    tuned.meta.w = {1.0};
    tuned.meta.b = std::log(0.52 / 0.48);  // sigmoid(b) = 0.52 at row {0}
    tuned.threshold = 0.5168;
    auto [p, label] = predict_ensemble(tuned, {0.0});
    CHECK_THAT(p, Catch::Matchers::WithinAbs(0.52, 1e-12));
    CHECK(label == 1);
  }
  SECTION("dimension mismatch throws") {
    REQUIRE_THROWS(predict_ensemble(s, {0.1, 0.2}));
  }
  SECTION("prediction is monotone in a positively weighted base") {
    double prev = -1.0;
    for (double v = 0.0; v <= 1.0; v += 0.05) {
      auto [p, label] = predict_ensemble(s, {v});
      CHECK(p > prev);
      prev = p;
    }
  }
}

TEST_CASE("stacker serialization round-trips") {
  Stacker s;
  s.base_names = {"bert", "ngram", "use"};
  s.meta.w = {0.5, -0.25, 1.5};
  s.meta.b = 0.125;
  s.threshold = 0.5168;
  testutil::TempDir dir;
  save_stacker(s, dir.file("s.json"), {{"command", "stack"}});
  Stacker back = load_stacker(dir.file("s.json"));
  CHECK(back.base_names == s.base_names);
  CHECK(back.meta.w == s.meta.w);
  CHECK(back.meta.b == s.meta.b);
  CHECK(back.threshold == s.threshold);
}
