#pragma once

// Seeded synthetic tweet generator for end-to-end tests and demos: separable
// informative/uninformative templates with noisy decorations (urls, mentions,
// hashtags, emoji, shouting, stretched punctuation) that exercise the
// normalization pipeline.

#include <cstdint>
#include <string>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/rng.hpp"

namespace infotweet {

struct SyntheticOptions {
  std::size_t count = 1000;
  double informative_ratio = 0.5;
  std::uint64_t seed = 0;
  std::string id_prefix = "syn";
  double decoration_rate = 0.55;
};

namespace detail {

inline const std::vector<std::string>& synth_cities() {
  static const std::vector<std::string> v = {
      "wuhan", "london", "delhi", "mumbai", "seattle", "chicago", "madrid",
      "rome", "paris", "berlin", "tokyo", "seoul", "lagos", "nairobi",
      "toronto", "boston", "houston", "miami", "denver", "phoenix",
      "new york", "los angeles", "san francisco", "hong kong", "new delhi",
      "santa clara", "abuja", "karachi", "moscow", "dallas",
  };
  return v;
}

inline const std::vector<std::string>& synth_case_nouns() {
  static const std::vector<std::string> v = {
      "cases", "infections", "positive tests", "deaths", "recoveries",
      "hospitalisations", "suspected cases", "confirmed cases",
  };
  return v;
}

inline const std::vector<std::string>& synth_report_verbs() {
  static const std::vector<std::string> v = {
      "confirmed", "reported", "recorded", "announced", "registered", "logged",
  };
  return v;
}

inline const std::vector<std::string>& synth_info_templates() {
  // {c} city, {n} number, {o} case noun, {v} report verb
  static const std::vector<std::string> v = {
      "{c} health officials {v} {n} new {o}",
      "breaking: {n} {o} {v} in {c}",
      "update the total number of {o} in {c} rises to {n}",
      "{n} more {o} {v} across {c} today",
      "officials in {c} say {o} climbed to {n}",
      "{c} {v} {n} {o} linked to the outbreak",
      "travel history of {n} patients from {c} under review",
      "hospital in {c} admits {n} patients with suspected covid-19",
      "death toll in {c} reaches {n}",
      "{n} recoveries announced in {c} this week",
      "per the health ministry {c} logged {n} fresh {o}",
      "confirmed case count in {c} now stands at {n}",
      "{c} quarantines {n} travellers after positive tests",
      "lab in {c} processed {n} samples and {v} {n2} {o}",
  };
  return v;
}

inline const std::vector<std::string>& synth_chatter_templates() {
  static const std::vector<std::string> v = {
      "i miss hanging out with my friends so much",
      "day {n} of lockdown and i baked banana bread again",
      "cant wait to rewatch my favourite show tonight",
      "my dog keeps barking at the neighbours lol",
      "anyone else sleeping at weird hours these days",
      "sending love to everyone stuck at home",
      "home workouts are way too hard for me",
      "i really want to visit {c} when all this is over",
      "the weather today made me so happy",
      "just had the best coffee in ages",
      "quarantine has me talking to my plants",
      "zoom meetings all day and now my eyes hurt",
      "finally finished that puzzle i started forever ago",
      "my sourdough starter has a name now",
      "missing {c} and the little cafe near the station",
      "watched the sunset from my balcony tonight",
  };
  return v;
}

inline std::string synth_fill(std::string tpl, Rng& rng) {
  auto replace_all = [&](const std::string& slot, auto make) {
    std::size_t pos;
    while ((pos = tpl.find(slot)) != std::string::npos) {
      tpl = tpl.substr(0, pos) + make() + tpl.substr(pos + slot.size());
    }
  };
  replace_all("{c}", [&] { return synth_cities()[rng.below(synth_cities().size())]; });
  replace_all("{n2}", [&] { return std::to_string(1 + rng.below(99999)); });
  replace_all("{n}", [&] { return std::to_string(1 + rng.below(99999)); });
  replace_all("{o}", [&] { return synth_case_nouns()[rng.below(synth_case_nouns().size())]; });
  replace_all("{v}", [&] { return synth_report_verbs()[rng.below(synth_report_verbs().size())]; });
  return tpl;
}

inline std::string synth_decorate(std::string text, Rng& rng, double rate) {
  if (rng.uniform() < rate * 0.5) {
    static const char* tags[] = {"#covid19", "#COVID2019", "#stayhome", "#lockdown", "#news"};
    text += " ";
    text += tags[rng.below(5)];
  }
  if (rng.uniform() < rate * 0.35) {
    static const char* handles[] = {"@newsdesk", "@whoupdates", "@jane_doe", "@citydesk"};
    text = std::string(handles[rng.below(4)]) + " " + text;
  }
  if (rng.uniform() < rate * 0.3) text += " https://t.co/" + detail::to_hex(rng.below(1 << 30)).substr(8);
  if (rng.uniform() < rate * 0.3) {
    static const char* emo[] = {"\U0001F637", "\U0001F64F", "\U0001F602", "\U0001F525",
                                "⚠️"};
    text += " ";
    text += emo[rng.below(5)];
  }
  if (rng.uniform() < rate * 0.3) text += "!!!";
  if (rng.uniform() < rate * 0.25) {
    // shout a word
    auto words = split_ws(text);
    if (!words.empty()) {
      std::size_t i = rng.below(words.size());
      for (auto& ch : words[i]) ch = static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 32 : ch);
      text = join(words, " ");
    }
  }
  return text;
}

}  // namespace detail

inline std::vector<Tweet> generate_synthetic_tweets(const SyntheticOptions& opt) {
  Rng rng(opt.seed);
  std::vector<Tweet> tweets;
  tweets.reserve(opt.count);
  for (std::size_t i = 0; i < opt.count; ++i) {
    const int label = rng.uniform() < opt.informative_ratio ? 1 : 0;
    const auto& pool =
        label == 1 ? detail::synth_info_templates() : detail::synth_chatter_templates();
    std::string text = detail::synth_fill(pool[rng.below(pool.size())], rng);
    text = detail::synth_decorate(std::move(text), rng, opt.decoration_rate);
    Tweet t;
    t.id = opt.id_prefix + std::to_string(i);
    t.text = std::move(text);
    t.label = label;
    tweets.push_back(std::move(t));
  }
  return tweets;
}

}  // namespace infotweet
