#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "golden_cases.hpp"
#include "infotweet/normalize.hpp"
#include "infotweet/rng.hpp"
#include "infotweet/synthetic.hpp"
#include "test_util.hpp"

using namespace infotweet;

namespace {
const NormalizationResources& res() {
  static const NormalizationResources r = NormalizationResources::builtin();
  return r;
}
}  // namespace

TEST_CASE("golden corpus is bit-exact") {
  for (const auto& c : golden::cases()) {
    INFO(c.name << ": " << c.raw);
    auto out = normalize(Tweet{"t", c.raw, std::nullopt}, c.variant, res());
    CHECK(out.tokens == c.tokens);
  }
}

TEST_CASE("normalize is idempotent on the golden corpus") {
  for (const auto& c : golden::cases()) {
    INFO(c.name);
    auto once = normalize(Tweet{"t", c.raw, std::nullopt}, c.variant, res());
    auto rejoined = detail::join(once.tokens, " ");
    auto twice = normalize(Tweet{"t", rejoined, std::nullopt}, c.variant, res());
    CHECK(twice.tokens == once.tokens);
  }
}

TEST_CASE("normalize is deterministic") {
  for (const auto& c : golden::cases()) {
    auto a = normalize(Tweet{"t", c.raw, std::nullopt}, c.variant, res());
    auto b = normalize(Tweet{"t", c.raw, std::nullopt}, c.variant, res());
    CHECK(a.tokens == b.tokens);
  }
}

TEST_CASE("mask_numerals replaces digit tokens by digit count") {
  CHECK(mask_numerals({"2020", "deaths"}) == std::vector<std::string>{"NUM4", "deaths"});
  CHECK(mask_numerals({"covid19", "is", "here"}) ==
        std::vector<std::string>{"covid19", "is", "here"});
  CHECK(mask_numerals({"NUM4"}) == std::vector<std::string>{"NUM4"});
  CHECK(mask_numerals({"1,000", "3.5"}) == std::vector<std::string>{"NUM4", "NUM2"});
}

TEST_CASE("mask_locations uses longest match first") {
  CHECK(mask_locations({"cases", "in", "wuhan"}, {"wuhan"}) ==
        std::vector<std::string>{"cases", "in", "LOC"});
  CHECK(mask_locations({"new", "york", "reports"}, {"new york"}) ==
        std::vector<std::string>{"LOC", "reports"});
  CHECK(mask_locations({"LOC", "reports"}, {"wuhan"}) ==
        std::vector<std::string>{"LOC", "reports"});
  CHECK(mask_locations({"new", "york", "city"}, {"new york city", "new york", "york"}) ==
        std::vector<std::string>{"LOC"});
}

TEST_CASE("no information survives the masks under NumLocReplaced") {
  SyntheticOptions opt;
  opt.count = 300;
  opt.seed = 42;
  for (const auto& t : generate_synthetic_tweets(opt)) {
    auto out = normalize(t, PipelineVariant::NumLocReplaced, res());
    for (const auto& tok : out.tokens) {
      INFO(t.text << " -> " << tok);
      CHECK_FALSE(detail::is_maskable_number(tok));
      CHECK_FALSE(res().gazetteer.count(tok));
    }
    // multi-word gazetteer entries must not survive as spans either
    auto remasked = mask_locations(out.tokens, res().gazetteer);
    CHECK(remasked == out.tokens);
  }
}

TEST_CASE("vocabulary never grows when masking more") {
  SyntheticOptions opt;
  opt.count = 400;
  opt.seed = 9;
  auto tweets = generate_synthetic_tweets(opt);
  std::set<std::string> cleaned_vocab, masked_vocab;
  for (const auto& t : tweets) {
    for (auto& tok : normalize(t, PipelineVariant::Cleaned, res()).tokens) {
      cleaned_vocab.insert(tok);
    }
    for (auto& tok : normalize(t, PipelineVariant::NumLocReplaced, res()).tokens) {
      masked_vocab.insert(tok);
    }
  }
  CHECK(masked_vocab.size() <= cleaned_vocab.size());
}

TEST_CASE("resource files on disk match the builtin tables") {
  const auto from_files = NormalizationResources::load_dir(testutil::source_dir() + "/resources");
  const auto& builtin = res();
  CHECK(from_files.contraction_map == builtin.contraction_map);
  CHECK(from_files.leet_map == builtin.leet_map);
  CHECK(from_files.emoji_map == builtin.emoji_map);
  CHECK(from_files.gazetteer == builtin.gazetteer);
}

TEST_CASE("resource lookup misses leave tokens unchanged") {
  auto out = normalize(Tweet{"t", "zxqv plorp", std::nullopt}, PipelineVariant::Cleaned, res());
  CHECK(out.tokens == std::vector<std::string>{"zxqv", "plorp"});
}
