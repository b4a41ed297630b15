#pragma once

// Noisy-tweet normalization pipeline and its four variants.
//
// Fixed step order (chosen so masking always sees clean tokens):
//   1. lowercase                       8. expand contractions
//   2. URL -> httpurl                  9. decode leet tokens
//   3. @mention -> @user              10. emoji -> :name: text
//   4. compatibility fold             11. covid spellings -> covid19
//   5. HTML tags / bad symbols out    12. isolate punctuation
//   6. collapse repeated symbols      13. tokenize on whitespace
//   7. strip underscores              14. NUM / LOC masking per variant
//
// `httpurl`, `@user`, `NUM<k>`, `LOC`, `covid19` and `:name:` emoji tokens are
// fixed points of the whole pipeline, which makes normalize idempotent.

#include <map>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/textutil.hpp"

namespace infotweet {

enum class PipelineVariant { Cleaned, NumReplaced, LocReplaced, NumLocReplaced };

inline std::string variant_name(PipelineVariant v) {
  switch (v) {
    case PipelineVariant::Cleaned: return "cleaned";
    case PipelineVariant::NumReplaced: return "num";
    case PipelineVariant::LocReplaced: return "loc";
    case PipelineVariant::NumLocReplaced: return "num-loc";
  }
  return "cleaned";
}

inline PipelineVariant variant_from_name(const std::string& s) {
  if (s == "cleaned") return PipelineVariant::Cleaned;
  if (s == "num" || s == "num-replaced") return PipelineVariant::NumReplaced;
  if (s == "loc" || s == "loc-replaced") return PipelineVariant::LocReplaced;
  if (s == "num-loc" || s == "num-loc-replaced") return PipelineVariant::NumLocReplaced;
  throw std::runtime_error("unknown pipeline variant: " + s);
}

struct NormalizationResources {
  std::map<std::string, std::string> contraction_map;  // lowercase key -> expansion
  std::map<std::string, std::string> leet_map;         // lowercase key -> plain English
  std::map<std::string, std::string> emoji_map;        // UTF-8 codepoint sequence -> :name:
  std::set<std::string> gazetteer;  // lowercase location names, multi-word allowed

  static NormalizationResources builtin();
  static NormalizationResources load_dir(const std::string& dir);
};

struct NormalizedTweet {
  std::string id;
  std::vector<std::string> tokens;
  PipelineVariant variant = PipelineVariant::Cleaned;
};

namespace detail {

// Reserved mask tokens survive lowercasing so the pipeline is re-entrant.
inline bool is_mask_token(std::string_view s) {
  if (s == "LOC") return true;
  if (s.size() > 3 && s.substr(0, 3) == "NUM") {
    for (std::size_t i = 3; i < s.size(); ++i) {
      if (!is_ascii_digit(s[i])) return false;
    }
    return true;
  }
  return false;
}

inline std::string lowercase_step(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_ascii_space(text[i])) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    std::string_view chunk(text.data() + start, i - start);
    if (is_mask_token(chunk)) {
      out.append(chunk);
    } else {
      for (char c : chunk) out.push_back(ascii_lower(c));
    }
  }
  return out;
}

inline std::string replace_urls(const std::string& text) {
  static const std::regex re(R"((https?://\S+)|(\bt\.co/\S+))");
  return std::regex_replace(text, re, "httpurl");
}

inline std::string replace_mentions(const std::string& text) {
  static const std::regex re(R"((^|[^a-z0-9_])@[a-z0-9_]+)");
  return std::regex_replace(text, re, "$1@user");
}

// NFKC-style compatibility fold for the character families that actually show
// up in tweets: fullwidth forms, typographic quotes/dashes, ligatures, exotic
// spaces, and zero-width/variation selectors.
inline std::string compat_fold(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::uint32_t cp = utf8_next(text, i);
    if (cp == 0xFFFFFFFFu) continue;  // malformed byte: drop
    if (cp >= 0xFF01 && cp <= 0xFF5E) {  // fullwidth ASCII
      char c = static_cast<char>(cp - 0xFEE0);
      out.push_back(ascii_lower(c));
      continue;
    }
    switch (cp) {
      case 0x2018: case 0x2019: case 0x201A: case 0x201B:
      case 0x2032: case 0x00B4: case 0x02B9: case 0x02BC:
        out.push_back('\'');
        break;
      case 0x201C: case 0x201D: case 0x201E: case 0x201F: case 0x2033:
        out.push_back('"');
        break;
      case 0x2010: case 0x2011: case 0x2012: case 0x2013:
      case 0x2014: case 0x2015: case 0x2212:
        out.push_back('-');
        break;
      case 0x2026:
        out.append("...");
        break;
      case 0x00A0: case 0x2000: case 0x2001: case 0x2002: case 0x2003:
      case 0x2004: case 0x2005: case 0x2006: case 0x2007: case 0x2008:
      case 0x2009: case 0x200A: case 0x202F: case 0x205F: case 0x3000:
        out.push_back(' ');
        break;
      case 0x200B: case 0x200C: case 0x200D: case 0x200E: case 0x200F:
      case 0xFE0E: case 0xFE0F:
        break;  // zero-width / variation selectors: delete
      case 0xFB01:
        out.append("fi");
        break;
      case 0xFB02:
        out.append("fl");
        break;
      case 0x2044:
        out.push_back('/');
        break;
      default:
        utf8_append(out, cp);
    }
  }
  return out;
}

inline std::string strip_html(const std::string& text) {
  static const std::regex tag_re(R"(<[^>]*>)");
  std::string out = std::regex_replace(text, tag_re, " ");
  static const std::pair<const char*, const char*> entities[] = {
      {"&amp;", "&"},  {"&lt;", "<"},    {"&gt;", ">"},  {"&quot;", "\""},
      {"&#34;", "\""}, {"&#039;", "'"},  {"&#39;", "'"}, {"&apos;", "'"},
      {"&nbsp;", " "},
  };
  for (const auto& [from, to] : entities) {
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, std::string_view(from).size(), to);
      pos += std::string_view(to).size();
    }
  }
  return out;
}

// Keeps printable ASCII plus any codepoint that appears in an emoji_map key;
// everything else (foreign scripts, unknown pictograms) is dropped.
inline std::string remove_bad_symbols(const std::string& text,
                                      const std::set<std::uint32_t>& emoji_keep) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::uint32_t cp = utf8_next(text, i);
    if (cp == 0xFFFFFFFFu) continue;
    if (cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v') {
      out.push_back(' ');
    } else if (cp >= 0x20 && cp <= 0x7E) {
      out.push_back(static_cast<char>(cp));
    } else if (emoji_keep.count(cp)) {
      utf8_append(out, cp);
    }
  }
  return out;
}

// Collapses runs of the same punctuation/symbol codepoint ("!!!" -> "!").
// Letters and digits are exempt, so "coool" and "2000" are untouched.
inline std::string collapse_repeats(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::uint32_t prev = 0xFFFFFFFFu;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::uint32_t cp = utf8_next(text, i);
    const bool collapsible = !(cp < 0x80 && (is_ascii_alnum(static_cast<char>(cp)) ||
                                             is_ascii_space(static_cast<char>(cp))));
    if (collapsible && cp == prev) continue;
    utf8_append(out, cp);
    prev = cp;
  }
  return out;
}

inline std::string strip_underscores(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '_') out.push_back(c);
  }
  return out;
}

// Looks a chunk up in `table`, tolerating attached leading/trailing ASCII
// punctuation (so "don't!" still expands).
inline bool apply_token_map(std::string& chunk, const std::map<std::string, std::string>& table) {
  auto it = table.find(chunk);
  if (it != table.end()) {
    chunk = it->second;
    return true;
  }
  std::size_t b = 0, e = chunk.size();
  while (b < e && is_ascii_punct(chunk[b])) ++b;
  while (e > b && is_ascii_punct(chunk[e - 1])) --e;
  if (b == 0 && e == chunk.size()) return false;
  if (b >= e) return false;
  it = table.find(chunk.substr(b, e - b));
  if (it == table.end()) return false;
  chunk = chunk.substr(0, b) + it->second + chunk.substr(e);
  return true;
}

inline std::string map_chunks(const std::string& text,
                              const std::map<std::string, std::string>& table) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_ascii_space(text[i])) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    std::string chunk = text.substr(start, i - start);
    apply_token_map(chunk, table);
    out.append(chunk);
  }
  return out;
}

// Longest-match emoji-to-text conversion; names come out space-padded so they
// tokenize as standalone `:name:` tokens.
inline std::string convert_emoji(const std::string& text,
                                 const std::map<std::string, std::string>& emoji_map) {
  if (emoji_map.empty()) return text;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::string* best_name = nullptr;
    std::size_t best_len = 0;
    for (const auto& [seq, name] : emoji_map) {
      if (seq.size() > best_len && text.compare(i, seq.size(), seq) == 0) {
        best_len = seq.size();
        best_name = &name;
      }
    }
    if (best_name) {
      out.push_back(' ');
      out.append(*best_name);
      out.push_back(' ');
      i += best_len;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

inline std::string canonicalize_covid(const std::string& text) {
  static const std::regex re(R"(\bcovid[ -]?(?:2019|19)\b)");
  return std::regex_replace(text, re, "covid19");
}

inline bool is_emoji_name_at(const std::string& s, std::size_t i, std::size_t& len) {
  if (s[i] != ':') return false;
  std::size_t j = i + 1;
  while (j < s.size() && (is_ascii_lower(s[j]) || is_ascii_digit(s[j]))) ++j;
  if (j == i + 1 || j >= s.size() || s[j] != ':') return false;
  len = j - i + 1;
  return true;
}

// Splits punctuation into standalone tokens. `@user` and `:name:` stay atomic;
// ',' and '.' between two digits stay attached so "1,000" and "3.5" survive.
inline std::string isolate_punctuation(const std::string& text) {
  std::string out;
  out.reserve(text.size() * 2);
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == '@' && text.compare(i, 5, "@user") == 0 &&
        (i + 5 == n || !(is_ascii_alnum(text[i + 5]) || text[i + 5] == '_'))) {
      out.append(" @user ");
      i += 5;
      continue;
    }
    std::size_t name_len = 0;
    if (c == ':' && is_emoji_name_at(text, i, name_len)) {
      out.push_back(' ');
      out.append(text, i, name_len);
      out.push_back(' ');
      i += name_len;
      continue;
    }
    if (is_ascii_punct(c)) {
      if ((c == ',' || c == '.') && i > 0 && is_ascii_digit(text[i - 1]) && i + 1 < n &&
          is_ascii_digit(text[i + 1])) {
        out.push_back(c);
        ++i;
        continue;
      }
      out.push_back(' ');
      out.push_back(c);
      out.push_back(' ');
      ++i;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

// All-digit token, allowing internal ',' and '.' separators.
inline bool is_maskable_number(std::string_view tok) {
  if (tok.empty() || !is_ascii_digit(tok.front()) || !is_ascii_digit(tok.back())) return false;
  for (char c : tok) {
    if (!is_ascii_digit(c) && c != ',' && c != '.') return false;
  }
  return true;
}

inline std::set<std::uint32_t> emoji_keep_set(const std::map<std::string, std::string>& emoji_map) {
  std::set<std::uint32_t> keep;
  for (const auto& [seq, name] : emoji_map) {
    (void)name;
    std::size_t i = 0;
    while (i < seq.size()) {
      const std::uint32_t cp = utf8_next(seq, i);
      if (cp != 0xFFFFFFFFu) keep.insert(cp);
    }
  }
  return keep;
}

}  // namespace detail

// Replaces each all-digit token by NUM<k>, k = number of digits. Internal
// ','/'.' separators are ignored for the count. `covid19` contains letters,
// so it is structurally exempt.
inline std::vector<std::string> mask_numerals(std::vector<std::string> tokens) {
  for (auto& tok : tokens) {
    if (detail::is_maskable_number(tok)) {
      std::size_t digits = 0;
      for (char c : tok) {
        if (detail::is_ascii_digit(c)) ++digits;
      }
      tok = "NUM" + std::to_string(digits);
    }
  }
  return tokens;
}

// Longest-match-first replacement of gazetteer entries (multi-word entries
// match contiguous token spans) by the single token LOC.
inline std::vector<std::string> mask_locations(std::vector<std::string> tokens,
                                               const std::set<std::string>& gazetteer) {
  if (gazetteer.empty()) return tokens;
  std::size_t max_words = 1;
  for (const auto& entry : gazetteer) {
    max_words = std::max(max_words, detail::split_ws(entry).size());
  }
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    const std::size_t limit = std::min(max_words, tokens.size() - i);
    std::string span;
    for (std::size_t len = limit; len >= 1; --len) {
      span.clear();
      for (std::size_t k = 0; k < len; ++k) {
        if (k) span.push_back(' ');
        span.append(tokens[i + k]);
      }
      if (gazetteer.count(span)) {
        matched = len;
        break;
      }
    }
    if (matched) {
      out.emplace_back("LOC");
      i += matched;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

inline NormalizedTweet normalize(const Tweet& tweet, PipelineVariant variant,
                                 const NormalizationResources& res) {
  using namespace detail;
  std::string s = lowercase_step(tweet.text);
  s = replace_urls(s);
  s = replace_mentions(s);
  s = compat_fold(s);
  s = strip_html(s);
  s = remove_bad_symbols(s, emoji_keep_set(res.emoji_map));
  s = collapse_repeats(s);
  s = strip_underscores(s);
  s = map_chunks(s, res.contraction_map);
  s = map_chunks(s, res.leet_map);
  s = convert_emoji(s, res.emoji_map);
  s = canonicalize_covid(s);
  s = isolate_punctuation(s);
  std::vector<std::string> tokens = split_ws(s);
  if (variant == PipelineVariant::NumReplaced || variant == PipelineVariant::NumLocReplaced) {
    tokens = mask_numerals(std::move(tokens));
  }
  if (variant == PipelineVariant::LocReplaced || variant == PipelineVariant::NumLocReplaced) {
    tokens = mask_locations(std::move(tokens), res.gazetteer);
  }
  return NormalizedTweet{tweet.id, std::move(tokens), variant};
}

// ---------------------------------------------------------------------------
// Resource loading

namespace detail {

inline std::map<std::string, std::string> load_pair_file(const std::string& path) {
  std::map<std::string, std::string> table;
  for (const auto& line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw std::runtime_error(path + ": malformed resource line: " + line);
    }
    table[fields[0]] = fields[1];
  }
  return table;
}

inline std::string hex_seq_to_utf8(const std::string& spec, const std::string& path) {
  std::string seq;
  for (const auto& part : split_ws(spec)) {
    std::uint32_t cp = 0;
    for (char c : part) {
      cp <<= 4;
      if (is_ascii_digit(c)) {
        cp |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else {
        throw std::runtime_error(path + ": bad hex codepoint: " + part);
      }
    }
    utf8_append(seq, cp);
  }
  return seq;
}

}  // namespace detail

inline NormalizationResources NormalizationResources::load_dir(const std::string& dir) {
  NormalizationResources res;
  res.contraction_map = detail::load_pair_file(dir + "/contractions.tsv");
  res.leet_map = detail::load_pair_file(dir + "/leet.tsv");
  for (const auto& [hex, name] : detail::load_pair_file(dir + "/emoji.tsv")) {
    res.emoji_map[detail::hex_seq_to_utf8(hex, dir + "/emoji.tsv")] = name;
  }
  for (const auto& line : detail::read_lines(dir + "/gazetteer.txt")) {
    const std::string entry = detail::trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    res.gazetteer.insert(entry);
  }
  for (const auto& [k, v] : res.contraction_map) {
    (void)v;
    for (char c : k) {
      if (detail::is_ascii_upper(c)) {
        throw std::runtime_error("contraction keys must be lowercase: " + k);
      }
    }
  }
  return res;
}

}  // namespace infotweet

#include "infotweet/builtin_resources.hpp"
