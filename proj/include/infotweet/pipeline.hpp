#pragma once

// Glue between corpus, normalize, features, and model: batch normalization
// and Example construction for each feature kind.

#include <string>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/features.hpp"
#include "infotweet/model.hpp"
#include "infotweet/normalize.hpp"

namespace infotweet {

inline std::vector<NormalizedTweet> normalize_tweets(const std::vector<Tweet>& tweets,
                                                     PipelineVariant variant,
                                                     const NormalizationResources& res) {
  std::vector<NormalizedTweet> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) out.push_back(normalize(t, variant, res));
  return out;
}

inline std::vector<int> dataset_labels(const std::vector<Tweet>& tweets) {
  std::vector<int> labels;
  labels.reserve(tweets.size());
  for (const auto& t : tweets) labels.push_back(t.label.value_or(0));
  return labels;
}

inline Dataset make_ngram_examples(const std::vector<NormalizedTweet>& norm,
                                   const std::vector<int>& labels, const Vocabulary& vocab) {
  Dataset out;
  out.reserve(norm.size());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    Example ex;
    ex.id = norm[i].id;
    ex.features = featurize_ngram(norm[i].tokens, vocab);
    ex.label = labels.empty() ? 0 : labels[i];
    out.push_back(std::move(ex));
  }
  return out;
}

inline Dataset make_hcf_examples(const std::vector<Tweet>& raw,
                                 const std::vector<NormalizedTweet>& norm,
                                 const std::vector<Lexicon>& lexicons,
                                 const std::set<std::string>& gazetteer) {
  Dataset out;
  out.reserve(norm.size());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    Example ex;
    ex.id = norm[i].id;
    ex.features = featurize_hcf(norm[i].tokens, raw[i].text, lexicons, gazetteer);
    ex.label = raw[i].label.value_or(0);
    out.push_back(std::move(ex));
  }
  return out;
}

inline Dataset make_token_examples(const std::vector<NormalizedTweet>& norm,
                                   const std::vector<int>& labels) {
  Dataset out;
  out.reserve(norm.size());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    Example ex;
    ex.id = norm[i].id;
    ex.tokens = norm[i].tokens;
    ex.label = labels.empty() ? 0 : labels[i];
    out.push_back(std::move(ex));
  }
  return out;
}

inline Dataset make_embedding_examples(const std::vector<Tweet>& tweets,
                                       const EmbeddingTable& table) {
  Dataset out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    Example ex;
    ex.id = t.id;
    ex.features = embedding_features(t.id, table);
    ex.label = t.label.value_or(0);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace infotweet
