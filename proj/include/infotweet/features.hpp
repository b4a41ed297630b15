#pragma once

// Feature extraction: most-frequent n-gram presence vectors, hand-crafted
// syntactic/readability/lexicon features, and external-embedding pass-through.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/normalize.hpp"
#include "infotweet/textutil.hpp"

namespace infotweet {

enum class FeatureKind { NgramBinary, Hcf, Embedding };

// Dense double vector, with a compact index-list representation for the 0/1
// n-gram case (feature dims run into the tens of thousands and tweets touch
// only a few dozen of them).
class FeatureVector {
 public:
  FeatureVector() = default;

  static FeatureVector dense(FeatureKind kind, std::vector<double> values) {
    FeatureVector f;
    f.kind_ = kind;
    f.dim_ = values.size();
    f.values_ = std::move(values);
    return f;
  }

  // `active` must be sorted and unique; implied values are 1.0.
  static FeatureVector binary(std::size_t dim, std::vector<std::uint32_t> active) {
    FeatureVector f;
    f.kind_ = FeatureKind::NgramBinary;
    f.dim_ = dim;
    f.binary_ = true;
    f.active_ = std::move(active);
    return f;
  }

  FeatureKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool is_binary() const { return binary_; }
  const std::vector<std::uint32_t>& active() const { return active_; }

  double at(std::size_t i) const {
    if (i >= dim_) throw std::out_of_range("FeatureVector::at");
    if (!binary_) return values_[i];
    return std::binary_search(active_.begin(), active_.end(), static_cast<std::uint32_t>(i))
               ? 1.0
               : 0.0;
  }

  std::vector<double> to_dense() const {
    if (!binary_) return values_;
    std::vector<double> out(dim_, 0.0);
    for (auto i : active_) out[i] = 1.0;
    return out;
  }

  // Calls f(index, value) for every structurally stored entry.
  template <typename F>
  void for_each_nonzero(F&& f) const {
    if (binary_) {
      for (auto i : active_) f(static_cast<std::size_t>(i), 1.0);
    } else {
      for (std::size_t i = 0; i < values_.size(); ++i) f(i, values_[i]);
    }
  }

  bool operator==(const FeatureVector&) const = default;

 private:
  FeatureKind kind_ = FeatureKind::Hcf;
  std::size_t dim_ = 0;
  bool binary_ = false;
  std::vector<double> values_;
  std::vector<std::uint32_t> active_;
};

// ---------------------------------------------------------------------------
// N-gram vocabulary

struct Vocabulary {
  // n-gram (tokens joined with single spaces) -> dense index, ordered
  // lexicographically by the map itself.
  std::map<std::string, std::uint32_t> entries;
  // Audit trail: bit 1 << c set when the class-c top lists contributed.
  std::map<std::string, std::uint8_t> per_class_origin;
  int max_n = 3;

  std::size_t size() const { return entries.size(); }
};

namespace detail {

inline void count_ngrams(const std::vector<std::string>& tokens, int order,
                         std::map<std::string, long>& counts) {
  if (order <= 0 || tokens.size() < static_cast<std::size_t>(order)) return;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (int k = 1; k < order; ++k) {
      gram.push_back(' ');
      gram.append(tokens[i + k]);
    }
    ++counts[gram];
  }
}

// Top-k by count, ties broken lexicographically ascending.
inline std::vector<std::string> top_k_ngrams(const std::map<std::string, long>& counts,
                                             std::size_t k) {
  std::vector<std::pair<std::string, long>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (items.size() > k) items.resize(k);
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [gram, c] : items) out.push_back(std::move(gram));
  return out;
}

}  // namespace detail

// Builds the vocabulary from the *training* split only: for each class and
// each n-gram order up to max_n, the k most frequent n-grams; the union gets
// dense indices in lexicographic order.
inline Vocabulary build_ngram_vocab(const std::vector<NormalizedTweet>& tweets,
                                    const std::vector<int>& labels, std::size_t k = 5000,
                                    int max_n = 3) {
  if (tweets.empty()) throw std::runtime_error("build_ngram_vocab: empty training set");
  if (tweets.size() != labels.size()) {
    throw std::runtime_error("build_ngram_vocab: tweets/labels size mismatch");
  }
  Vocabulary vocab;
  vocab.max_n = max_n;
  if (k == 0) return vocab;
  for (int cls = 0; cls <= 1; ++cls) {
    for (int order = 1; order <= max_n; ++order) {
      std::map<std::string, long> counts;
      for (std::size_t i = 0; i < tweets.size(); ++i) {
        if (labels[i] == cls) detail::count_ngrams(tweets[i].tokens, order, counts);
      }
      for (auto& gram : detail::top_k_ngrams(counts, k)) {
        vocab.per_class_origin[gram] |= static_cast<std::uint8_t>(1u << cls);
      }
    }
  }
  std::uint32_t index = 0;
  for (const auto& [gram, origin] : vocab.per_class_origin) {
    (void)origin;
    vocab.entries.emplace(gram, index++);
  }
  return vocab;
}

// Presence/absence vector over the vocabulary: 1 iff the n-gram occurs in the
// token sequence.
inline FeatureVector featurize_ngram(const std::vector<std::string>& tokens,
                                     const Vocabulary& vocab) {
  std::set<std::uint32_t> active;
  for (int order = 1; order <= vocab.max_n; ++order) {
    if (tokens.size() < static_cast<std::size_t>(order)) break;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int s = 1; s < order; ++s) {
        gram.push_back(' ');
        gram.append(tokens[i + s]);
      }
      auto it = vocab.entries.find(gram);
      if (it != vocab.entries.end()) active.insert(it->second);
    }
  }
  return FeatureVector::binary(vocab.size(),
                               std::vector<std::uint32_t>(active.begin(), active.end()));
}

inline void save_vocabulary(const Vocabulary& vocab, const std::string& path,
                            const std::vector<std::string>& header = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary: " + path);
  for (const auto& h : header) out << "# " << h << "\n";
  for (const auto& [gram, idx] : vocab.entries) out << gram << '\t' << idx << '\n';
}

inline Vocabulary load_vocabulary(const std::string& path, int max_n = 3) {
  Vocabulary vocab;
  vocab.max_n = max_n;
  const auto lines = detail::read_lines(path);
  for (std::size_t i = detail::skip_meta_header(lines); i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = detail::split(lines[i], '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": malformed vocab line");
    }
    vocab.entries[fields[0]] = static_cast<std::uint32_t>(std::stoul(fields[1]));
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Lexicons

struct Lexicon {
  std::string name;
  std::vector<std::string> dims;
  std::map<std::string, std::vector<double>> scores;
};

// File format: first non-comment line holds TAB-separated dimension names,
// then `word<TAB>v1<TAB>...<TAB>vd`.
inline Lexicon load_lexicon(const std::string& path, const std::string& name = "") {
  Lexicon lex;
  lex.name = name.empty() ? path : name;
  const auto lines = detail::read_lines(path);
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = detail::split(line, '\t');
    if (!have_header) {
      if (fields.empty()) throw std::runtime_error(path + ": empty lexicon header");
      lex.dims = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != lex.dims.size() + 1) {
      throw std::runtime_error(path + ":" + std::to_string(i + 1) +
                               ": expected word + " + std::to_string(lex.dims.size()) +
                               " scores");
    }
    std::vector<double> v;
    v.reserve(lex.dims.size());
    for (std::size_t d = 1; d < fields.size(); ++d) {
      try {
        v.push_back(std::stod(fields[d]));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": bad score '" +
                                 fields[d] + "'");
      }
    }
    lex.scores[fields[0]] = std::move(v);
  }
  if (!have_header) throw std::runtime_error(path + ": lexicon has no header line");
  return lex;
}

// ---------------------------------------------------------------------------
// Hand-crafted features

namespace detail {

// Coarse rule-based POS buckets; adequate for count features.
enum class PosBucket { Noun, Verb, Adj, Function, Other };

inline PosBucket pos_bucket(const std::string& tok) {
  static const std::set<std::string> function_words = {
      "a","an","the","and","or","but","if","then","else","of","in","on","at","by",
      "to","from","with","for","as","is","are","was","were","be","been","being",
      "am","do","does","did","have","has","had","will","would","can","could",
      "shall","should","may","might","must","not","no","nor","so","than","that",
      "this","these","those","it","its","he","she","they","we","you","i","me",
      "him","her","them","us","my","your","his","their","our","who","whom",
      "which","what","when","where","why","how","there","here","up","down","out",
      "about","into","over","under","again","once","per","via",
  };
  bool has_letter = false;
  for (char c : tok) {
    if (is_ascii_alpha(c)) {
      has_letter = true;
      break;
    }
  }
  if (!has_letter) return PosBucket::Other;
  if (function_words.count(tok)) return PosBucket::Function;
  auto ends_with = [&](std::string_view suf) {
    return tok.size() > suf.size() + 1 &&
           tok.compare(tok.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with("ing") || ends_with("ed") || ends_with("ize") || ends_with("ise") ||
      ends_with("ify") || ends_with("ate")) {
    return PosBucket::Verb;
  }
  if (ends_with("ous") || ends_with("ful") || ends_with("ive") || ends_with("able") ||
      ends_with("ible") || ends_with("less") || ends_with("ish") || ends_with("al") ||
      ends_with("ic")) {
    return PosBucket::Adj;
  }
  return PosBucket::Noun;
}

// Maximal [aeiouy] groups, minimum one per word.
inline int syllable_estimate(const std::string& word) {
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    if (is_vowel(ascii_lower(c))) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  return groups > 0 ? groups : 1;
}

inline bool is_word_token(const std::string& tok) {
  for (char c : tok) {
    if (is_ascii_alnum(c)) return true;
  }
  return false;
}

}  // namespace detail

// Fixed built-in block: 7 punctuation counts, 5 surface statistics, 5 POS
// bucket counts, 2 readability scores; then per lexicon, per dimension, the
// sum and mean of scores over matched tokens. Tokens should come from the
// Cleaned variant so the counts see real numerals and locations.
inline FeatureVector featurize_hcf(const std::vector<std::string>& tokens,
                                   const std::string& raw_text,
                                   const std::vector<Lexicon>& lexicons,
                                   const std::set<std::string>& gazetteer = {}) {
  std::vector<double> v;
  static const char punct[] = {'.', ',', '!', '?', '#', '@', '"'};
  for (char p : punct) {
    long c = 0;
    for (const auto& tok : tokens) {
      if (tok.size() == 1 && tok[0] == p) ++c;
      if (p == '@' && tok == "@user") ++c;
    }
    v.push_back(static_cast<double>(c));
  }

  const double n_tokens = static_cast<double>(tokens.size());
  v.push_back(n_tokens);
  double len_sum = 0.0;
  for (const auto& t : tokens) len_sum += static_cast<double>(t.size());
  v.push_back(tokens.empty() ? 0.0 : len_sum / n_tokens);

  long caps = 0;
  for (const auto& word : detail::split_ws(raw_text)) {
    std::string letters;
    for (char c : word) {
      if (detail::is_ascii_alpha(c)) letters.push_back(c);
    }
    if (letters.size() >= 2 &&
        std::all_of(letters.begin(), letters.end(), detail::is_ascii_upper)) {
      ++caps;
    }
  }
  v.push_back(static_cast<double>(caps));

  long digit_tokens = 0;
  for (const auto& t : tokens) {
    if (detail::is_maskable_number(t)) ++digit_tokens;
  }
  v.push_back(static_cast<double>(digit_tokens));

  long gaz_hits = 0;
  if (!gazetteer.empty()) {
    auto masked = mask_locations(tokens, gazetteer);
    for (const auto& t : masked) {
      if (t == "LOC") ++gaz_hits;
    }
  }
  v.push_back(static_cast<double>(gaz_hits));

  std::array<long, 5> pos_counts{};
  for (const auto& t : tokens) {
    pos_counts[static_cast<std::size_t>(detail::pos_bucket(t))]++;
  }
  for (long c : pos_counts) v.push_back(static_cast<double>(c));

  // Flesch reading ease and Flesch-Kincaid grade; 0 on empty input.
  long words = 0, syllables = 0, sentence_marks = 0;
  for (const auto& t : tokens) {
    if (detail::is_word_token(t)) {
      ++words;
      syllables += detail::syllable_estimate(t);
    } else if (t == "." || t == "!" || t == "?") {
      ++sentence_marks;
    }
  }
  if (words > 0) {
    const double w = static_cast<double>(words);
    const double s = static_cast<double>(std::max(sentence_marks, 1L));
    const double syl = static_cast<double>(syllables);
    v.push_back(206.835 - 1.015 * (w / s) - 84.6 * (syl / w));
    v.push_back(0.39 * (w / s) + 11.8 * (syl / w) - 15.59);
  } else {
    v.push_back(0.0);
    v.push_back(0.0);
  }

  for (const auto& lex : lexicons) {
    std::vector<double> sums(lex.dims.size(), 0.0);
    long matched = 0;
    for (const auto& t : tokens) {
      auto it = lex.scores.find(t);
      if (it == lex.scores.end()) continue;
      ++matched;
      for (std::size_t d = 0; d < sums.size(); ++d) sums[d] += it->second[d];
    }
    for (std::size_t d = 0; d < sums.size(); ++d) {
      v.push_back(sums[d]);
      v.push_back(matched > 0 ? sums[d] / static_cast<double>(matched) : 0.0);
    }
  }
  return FeatureVector::dense(FeatureKind::Hcf, std::move(v));
}

inline FeatureVector embedding_features(const std::string& tweet_id,
                                        const EmbeddingTable& table) {
  auto it = table.rows.find(tweet_id);
  if (it == table.rows.end()) {
    throw std::runtime_error("no embedding for tweet id " + tweet_id);
  }
  return FeatureVector::dense(FeatureKind::Embedding, it->second);
}

}  // namespace infotweet
