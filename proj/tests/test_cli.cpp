#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "infotweet/cli.hpp"
#include "infotweet/synthetic.hpp"
#include "test_util.hpp"

using namespace infotweet;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args, const std::string& stdin_data = "") {
  std::istringstream in(stdin_data);
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::dispatch(std::move(args), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void write_corpus(const std::string& path, std::size_t n, std::uint64_t seed,
                  const std::string& prefix) {
  SyntheticOptions opt;
  opt.count = n;
  opt.seed = seed;
  opt.id_prefix = prefix;
  save_tweets(generate_synthetic_tweets(opt), path);
}

}  // namespace

TEST_CASE("unknown commands and bad flags exit 2") {
  auto bad = run_cli({"frobnicate", "--in", "x"});
  CHECK(bad.code == 2);
  CHECK_THAT(bad.err, Catch::Matchers::ContainsSubstring("usage"));

  auto missing = run_cli({"build-vocab"});  // --in/--out required
  CHECK(missing.code == 2);

  auto none = run_cli({});
  CHECK(none.code == 2);
}

TEST_CASE("module errors exit 1 with a diagnostic") {
  auto r = run_cli({"build-vocab", "--in", "/nonexistent.tsv", "--out", "/tmp/x"});
  CHECK(r.code == 1);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("error"));
}

TEST_CASE("normalize streams stdin to stdout") {
  auto r = run_cli({"normalize", "--variant", "cleaned"},
                   "t1\tCheck https://t.co/x from @sam!!!\n"
                   "t2\tthere'll be rain\tINFORMATIVE\n");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("t1\tcheck httpurl from @user !\n"));
  CHECK_THAT(r.out,
             Catch::Matchers::ContainsSubstring("t2\tthere will be rain\tINFORMATIVE\n"));
}

TEST_CASE("pipeline commands compose end to end on the synthetic corpus") {
  testutil::TempDir dir;
  write_corpus(dir.file("train.tsv"), 300, 11, "tr");
  write_corpus(dir.file("val.tsv"), 150, 22, "va");

  REQUIRE(run_cli({"normalize", "--in", dir.file("train.tsv"), "--variant", "num-loc", "--out",
                   dir.file("train_norm.tsv")})
              .code == 0);
  REQUIRE(run_cli({"normalize", "--in", dir.file("val.tsv"), "--variant", "num-loc", "--out",
                   dir.file("val_norm.tsv")})
              .code == 0);

  // artifact files embed command, config hash, seed, and version
  const std::string head = testutil::read_file(dir.file("train_norm.tsv")).substr(0, 200);
  CHECK_THAT(head, Catch::Matchers::ContainsSubstring("# {"));
  CHECK_THAT(head, Catch::Matchers::ContainsSubstring("\"command\":\"normalize\""));
  CHECK_THAT(head, Catch::Matchers::ContainsSubstring("config_hash"));
  CHECK_THAT(head, Catch::Matchers::ContainsSubstring(cli::kToolVersion));

  REQUIRE(run_cli({"build-vocab", "--in", dir.file("train_norm.tsv"), "--cap", "400", "--out",
                   dir.file("vocab.tsv")})
              .code == 0);
  REQUIRE(run_cli({"featurize", "--kind", "ngram", "--in", dir.file("train_norm.tsv"),
                   "--vocab", dir.file("vocab.tsv"), "--out", dir.file("train.feats")})
              .code == 0);
  REQUIRE(run_cli({"featurize", "--kind", "ngram", "--in", dir.file("val_norm.tsv"), "--vocab",
                   dir.file("vocab.tsv"), "--out", dir.file("val.feats")})
              .code == 0);

  auto train1 = run_cli({"train", "--model", "mlp", "--train", dir.file("train.feats"),
                         "--eval", dir.file("val.feats"), "--epochs", "8", "--seed", "5",
                         "--out", dir.file("model.ckpt")});
  REQUIRE(train1.code == 0);
  CHECK_THAT(train1.out, Catch::Matchers::ContainsSubstring("best checkpoint"));

  auto eval = run_cli({"evaluate", "--checkpoint", dir.file("model.ckpt"), "--in",
                       dir.file("val.feats"), "--out", dir.file("metrics.json")});
  REQUIRE(eval.code == 0);
  auto metrics = nlohmann::json::parse(testutil::read_file(dir.file("metrics.json")));
  CHECK(metrics["f1"].get<double>() >= 0.8);
  CHECK(metrics["meta"]["command"] == "evaluate");

  SECTION("re-running the same training config is byte-identical") {
    auto first = testutil::read_file(dir.file("model.ckpt"));
    REQUIRE(run_cli({"train", "--model", "mlp", "--train", dir.file("train.feats"), "--eval",
                     dir.file("val.feats"), "--epochs", "8", "--seed", "5", "--out",
                     dir.file("model2.ckpt")})
                .code == 0);
    CHECK(first == testutil::read_file(dir.file("model2.ckpt")));
  }

  SECTION("bag-linear trains straight from normalized TSVs") {
    auto r = run_cli({"train", "--model", "bag-linear", "--train", dir.file("train_norm.tsv"),
                      "--eval", dir.file("val_norm.tsv"), "--epochs", "4", "--buckets", "4096",
                      "--embed-dim", "16", "--seed", "2", "--out", dir.file("bag.ckpt")});
    REQUIRE(r.code == 0);
    auto e = run_cli({"evaluate", "--checkpoint", dir.file("bag.ckpt"), "--in",
                      dir.file("val_norm.tsv")});
    REQUIRE(e.code == 0);
  }

  SECTION("pseudo-label command produces a checkpoint and a promotion log") {
    write_corpus(dir.file("pool_raw.tsv"), 200, 33, "po");
    // the pool file must be unlabelled
    {
      auto pool = load_labeled_dataset(dir.file("pool_raw.tsv"));
      for (auto& t : pool.tweets) t.label.reset();
      save_tweets(pool.tweets, dir.file("pool.tsv"));
    }
    REQUIRE(run_cli({"normalize", "--in", dir.file("pool.tsv"), "--variant", "num-loc", "--out",
                     dir.file("pool_norm.tsv")})
                .code == 0);
    REQUIRE(run_cli({"featurize", "--kind", "ngram", "--in", dir.file("pool_norm.tsv"),
                     "--unlabeled", "--vocab", dir.file("vocab.tsv"), "--out",
                     dir.file("pool.feats")})
                .code == 0);
    auto r = run_cli({"pseudo-label", "--model", "logreg", "--train", dir.file("train.feats"),
                      "--eval", dir.file("val.feats"), "--pool", dir.file("pool.feats"),
                      "--max-epochs", "20", "--round-len", "10", "--seed", "3", "--out",
                      dir.file("pl.ckpt"), "--log", dir.file("promotions.jsonl")});
    REQUIRE(r.code == 0);
    CHECK(testutil::read_file(dir.file("promotions.jsonl")).size() > 0);
  }
}

TEST_CASE("stack, tune-threshold, and evaluate work over probability files") {
  testutil::TempDir dir;
  // two base classifiers: one strong, one noisy
  Rng rng(17);
  std::ostringstream probs, tsv;
  for (int i = 0; i < 120; ++i) {
    const int y = static_cast<int>(rng.below(2));
    const double strong = y == 1 ? 0.9 + 0.05 * rng.uniform() : 0.1 + 0.05 * rng.uniform();
    const double noisy = rng.uniform();
    probs << "{\"id\":\"t" << i << "\",\"probs\":{\"strong\":" << strong
          << ",\"noisy\":" << noisy << "}}\n";
    tsv << "t" << i << "\ttext " << i << "\t" << y << "\n";
  }
  testutil::write_file(dir.file("probs.jsonl"), probs.str());
  testutil::write_file(dir.file("labels.tsv"), tsv.str());

  auto stack = run_cli({"stack", "--probs", dir.file("probs.jsonl"), "--labels",
                        dir.file("labels.tsv"), "--seed", "4", "--out", dir.file("stacker.json")});
  REQUIRE(stack.code == 0);

  auto tune = run_cli({"tune-threshold", "--probs", dir.file("probs.jsonl"), "--labels",
                       dir.file("labels.tsv"), "--stacker", dir.file("stacker.json"), "--out",
                       dir.file("tuned.json")});
  REQUIRE(tune.code == 0);
  CHECK_THAT(tune.out, Catch::Matchers::ContainsSubstring("tuned threshold"));

  auto eval = run_cli({"evaluate", "--probs", dir.file("probs.jsonl"), "--labels",
                       dir.file("labels.tsv"), "--stacker", dir.file("tuned.json")});
  REQUIRE(eval.code == 0);
  CHECK_THAT(eval.out, Catch::Matchers::ContainsSubstring("f1="));

  // single-column evaluation needs --column when several exist
  auto ambiguous = run_cli({"evaluate", "--probs", dir.file("probs.jsonl"), "--labels",
                            dir.file("labels.tsv")});
  CHECK(ambiguous.code == 1);
  auto by_column = run_cli({"evaluate", "--probs", dir.file("probs.jsonl"), "--labels",
                            dir.file("labels.tsv"), "--column", "strong"});
  CHECK(by_column.code == 0);
}

TEST_CASE("probe command with a mock predictor reproduces the published vectors") {
  testutil::TempDir dir;
  const auto res = NormalizationResources::builtin();
  const std::string t3_path = testutil::source_dir() + "/resources/probes/disease_case.json";
  const std::string t4_path = testutil::source_dir() + "/resources/probes/num_loc_bias.json";
  const auto t3 = load_probe_template(t3_path);
  const auto t4 = load_probe_template(t4_path);
  const std::vector<int> expect3 = {0, 1, 1, 0, 1, 1, 0, 1, 1};
  const std::vector<int> expect4 = {1, 0, 1, 1};

  nlohmann::json mock = nlohmann::json::object();
  auto fill = [&](const ProbeTemplate& t, const std::vector<int>& expect) {
    for (std::size_t i = 0; i < t.fillers.size(); ++i) {
      const std::string raw = t.prefix.empty() ? t.fillers[i] : t.prefix + " " + t.fillers[i];
      auto norm = normalize(Tweet{"p", raw, std::nullopt}, PipelineVariant::Cleaned, res);
      mock[infotweet::detail::join(norm.tokens, " ")] = expect[i];
    }
  };
  fill(t3, expect3);
  fill(t4, expect4);
  testutil::write_file(dir.file("mock.json"), mock.dump());

  auto r = run_cli({"probe", "--template", t3_path, "--template", t4_path, "--mock",
                    dir.file("mock.json"), "--out", dir.file("report.json")});
  REQUIRE(r.code == 0);
  auto report = nlohmann::json::parse(testutil::read_file(dir.file("report.json")));
  REQUIRE(report["results"].size() == 2);
  CHECK(report["results"][0]["predictions"].get<std::vector<int>>() == expect3);
  CHECK(report["results"][1]["predictions"].get<std::vector<int>>() == expect4);
  CHECK(report["results"][0]["flips"] == 5);
  CHECK(report["results"][1]["flips"] == 2);
}

TEST_CASE("ablate runs all four variants") {
  testutil::TempDir dir;
  write_corpus(dir.file("train.tsv"), 160, 51, "tr");
  write_corpus(dir.file("val.tsv"), 80, 52, "va");
  auto r = run_cli({"ablate", "--train", dir.file("train.tsv"), "--eval", dir.file("val.tsv"),
                    "--model", "logreg", "--cap", "150", "--epochs", "3", "--seed", "6",
                    "--out", dir.file("ablation.json")});
  REQUIRE(r.code == 0);
  for (const char* variant : {"cleaned", "num", "loc", "num-loc"}) {
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring(variant));
  }
  auto report = nlohmann::json::parse(testutil::read_file(dir.file("ablation.json")));
  CHECK(report["rows"].size() == 4);
}

TEST_CASE("normalize rejects malformed stream input") {
  auto r = run_cli({"normalize"}, "only-one-field\n");
  CHECK(r.code == 1);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("line 1"));
}
