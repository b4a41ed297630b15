#pragma once

// Dataset, pool, probability-table and embedding-table loading.
//
// File formats (all UTF-8, LF line endings; a leading block of lines that
// start with '#' is treated as a metadata header and skipped):
//   dataset:       id<TAB>text[<TAB>label]     label in {INFORMATIVE, UNINFORMATIVE, 0, 1}
//   probabilities: JSON lines, {"id": "...", "probs": {"<model>": <float>, ...}}
//   embeddings:    id<TAB>v1 v2 ... vd

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "infotweet/textutil.hpp"

namespace infotweet {

struct Tweet {
  std::string id;
  std::string text;
  std::optional<int> label;  // 1 = Informative, 0 = Uninformative

  bool operator==(const Tweet&) const = default;
};

struct LabeledDataset {
  std::vector<Tweet> tweets;
  std::string name;  // split tag: train / validation / test
};

struct TweetPool {
  std::vector<Tweet> tweets;
};

struct ProbabilityTable {
  std::vector<std::string> model_names;             // sorted lexicographically
  std::map<std::string, std::vector<double>> rows;  // tweet id -> probs, one per model

  bool operator==(const ProbabilityTable&) const = default;
};

struct EmbeddingTable {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> rows;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Leading '#' lines form the metadata header written by the CLI.
inline std::size_t skip_meta_header(const std::vector<std::string>& lines) {
  std::size_t i = 0;
  while (i < lines.size() && !lines[i].empty() && lines[i][0] == '#') ++i;
  return i;
}

inline std::optional<int> parse_label(std::string_view raw) {
  std::string s;
  for (char c : raw) s.push_back(ascii_lower(c));
  if (s == "1" || s == "informative") return 1;
  if (s == "0" || s == "uninformative") return 0;
  return std::nullopt;
}

inline std::vector<Tweet> load_tweets(const std::string& path, bool expect_labels) {
  const auto lines = read_lines(path);
  std::vector<Tweet> tweets;
  std::set<std::string> seen;
  for (std::size_t i = skip_meta_header(lines); i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const std::size_t lineno = i + 1;
    auto fields = split(line, '\t');
    if (fields.size() != 2 && fields.size() != 3) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed line, expected id<TAB>text[<TAB>label]");
    }
    Tweet t;
    t.id = fields[0];
    t.text = fields[1];
    if (t.id.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty id");
    }
    if (!is_valid_utf8(t.text)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": invalid UTF-8 in text");
    }
    if (trim(t.text).empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty text for id " + t.id);
    }
    if (!seen.insert(t.id).second) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate id " + t.id);
    }
    if (fields.size() == 3) {
      if (!expect_labels) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": unexpected label in unlabelled file");
      }
      auto lab = parse_label(fields[2]);
      if (!lab) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown label '" +
                                 fields[2] + "'");
      }
      t.label = lab;
    } else if (expect_labels) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing label for id " +
                               t.id);
    }
    tweets.push_back(std::move(t));
  }
  return tweets;
}

}  // namespace detail

inline LabeledDataset load_labeled_dataset(const std::string& path,
                                           const std::string& name = "") {
  LabeledDataset ds;
  ds.tweets = detail::load_tweets(path, /*expect_labels=*/true);
  ds.name = name;
  return ds;
}

inline TweetPool load_tweet_pool(const std::string& path) {
  TweetPool pool;
  pool.tweets = detail::load_tweets(path, /*expect_labels=*/false);
  return pool;
}

// Writes `id<TAB>text[<TAB>label]` lines. `header` lines, if any, are written
// first, each prefixed with "# ".
inline void save_tweets(const std::vector<Tweet>& tweets, const std::string& path,
                        const std::vector<std::string>& header = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& h : header) out << "# " << h << "\n";
  for (const auto& t : tweets) {
    if (t.text.find('\t') != std::string::npos || t.text.find('\n') != std::string::npos) {
      throw std::runtime_error("text of tweet " + t.id + " contains tab or newline");
    }
    out << t.id << '\t' << t.text;
    if (t.label) out << '\t' << (*t.label == 1 ? "INFORMATIVE" : "UNINFORMATIVE");
    out << '\n';
  }
}

inline ProbabilityTable load_probabilities(const std::string& path) {
  const auto lines = detail::read_lines(path);
  ProbabilityTable table;
  std::set<std::string> names;
  bool names_fixed = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (detail::trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(where + ": bad JSON record: " + e.what());
    }
    if (rec.contains("_meta")) continue;
    if (!rec.contains("id") || !rec.contains("probs") || !rec["probs"].is_object()) {
      throw std::runtime_error(where + ": record must have 'id' and object 'probs'");
    }
    const std::string id = rec["id"].get<std::string>();
    std::set<std::string> rec_names;
    for (auto it = rec["probs"].begin(); it != rec["probs"].end(); ++it) {
      rec_names.insert(it.key());
    }
    if (!names_fixed) {
      names = rec_names;
      names_fixed = true;
      table.model_names.assign(names.begin(), names.end());
    } else if (rec_names != names) {
      throw std::runtime_error(where + ": inconsistent model names for id " + id);
    }
    std::vector<double> row;
    row.reserve(table.model_names.size());
    for (const auto& name : table.model_names) {
      double p = rec["probs"][name].get<double>();
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::runtime_error(where + ": probability for model '" + name +
                                 "' out of [0,1]: " + std::to_string(p));
      }
      row.push_back(p);
    }
    if (!table.rows.emplace(id, std::move(row)).second) {
      throw std::runtime_error(where + ": duplicate id " + id);
    }
  }
  return table;
}

inline void save_probabilities(const ProbabilityTable& table, const std::string& path,
                               const std::vector<std::string>& header = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& h : header) {
    nlohmann::json meta;
    meta["_meta"] = nlohmann::json::parse(h);
    out << meta.dump() << "\n";
  }
  for (const auto& [id, row] : table.rows) {
    nlohmann::json rec;
    rec["id"] = id;
    nlohmann::json probs = nlohmann::json::object();
    for (std::size_t k = 0; k < table.model_names.size(); ++k) {
      probs[table.model_names[k]] = row[k];
    }
    rec["probs"] = probs;
    out << rec.dump() << "\n";
  }
}

inline EmbeddingTable load_embeddings(const std::string& path, std::size_t expected_dim) {
  if (expected_dim == 0) throw std::runtime_error("expected_dim must be positive");
  const auto lines = detail::read_lines(path);
  EmbeddingTable table;
  table.dim = expected_dim;
  for (std::size_t i = detail::skip_meta_header(lines); i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    auto fields = detail::split(line, '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(where + ": malformed line, expected id<TAB>values");
    }
    auto parts = detail::split_ws(fields[1]);
    if (parts.size() != expected_dim) {
      throw std::runtime_error(where + ": dimension mismatch, expected " +
                               std::to_string(expected_dim) + " got " +
                               std::to_string(parts.size()));
    }
    std::vector<double> vec;
    vec.reserve(parts.size());
    for (const auto& p : parts) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
      if (ec != std::errc() || ptr != p.data() + p.size()) {
        throw std::runtime_error(where + ": non-numeric component '" + p + "'");
      }
      vec.push_back(v);
    }
    if (!table.rows.emplace(fields[0], std::move(vec)).second) {
      throw std::runtime_error(where + ": duplicate id " + fields[0]);
    }
  }
  return table;
}

}  // namespace infotweet
