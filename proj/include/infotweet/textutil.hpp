#pragma once

// Small string helpers shared across the library: ASCII predicates,
// UTF-8 decoding, splitting/joining, and FNV-1a hashing.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace infotweet {
namespace detail {

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_alpha(char c) { return is_ascii_lower(c) || is_ascii_upper(c); }
inline bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }
inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline char ascii_lower(char c) { return is_ascii_upper(c) ? char(c - 'A' + 'a') : c; }

// Printable ASCII punctuation/symbols (everything printable that is not
// alphanumeric and not space).
inline bool is_ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u > 0x20 && u < 0x7f && !is_ascii_alnum(c);
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_ascii_space(s[b])) ++b;
  while (e > b && is_ascii_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// Splits on runs of ASCII whitespace; never yields empty pieces.
inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_ascii_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_ascii_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

// Decodes one UTF-8 code point starting at s[i]. Returns the code point and
// advances i past it. Returns 0xFFFFFFFF on malformed input (i advanced by 1).
inline std::uint32_t utf8_next(std::string_view s, std::size_t& i) {
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xC0u) == 0x80u;
  };
  if (b0 < 0x80u) {
    i += 1;
    return b0;
  }
  if ((b0 & 0xE0u) == 0xC0u && cont(1)) {
    std::uint32_t cp = (b0 & 0x1Fu) << 6 |
                       (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
    i += 2;
    return cp < 0x80u ? 0xFFFFFFFFu : cp;
  }
  if ((b0 & 0xF0u) == 0xE0u && cont(1) && cont(2)) {
    std::uint32_t cp = (b0 & 0x0Fu) << 12 |
                       (static_cast<std::uint32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3Fu)) << 6 |
                       (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
    i += 3;
    if (cp < 0x800u || (cp >= 0xD800u && cp <= 0xDFFFu)) return 0xFFFFFFFFu;
    return cp;
  }
  if ((b0 & 0xF8u) == 0xF0u && cont(1) && cont(2) && cont(3)) {
    std::uint32_t cp = (b0 & 0x07u) << 18 |
                       (std::uint32_t(static_cast<unsigned char>(s[i + 1]) & 0x3Fu)) << 12 |
                       (std::uint32_t(static_cast<unsigned char>(s[i + 2]) & 0x3Fu)) << 6 |
                       (static_cast<unsigned char>(s[i + 3]) & 0x3Fu);
    i += 4;
    if (cp < 0x10000u || cp > 0x10FFFFu) return 0xFFFFFFFFu;
    return cp;
  }
  i += 1;
  return 0xFFFFFFFFu;
}

inline bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (utf8_next(s, i) == 0xFFFFFFFFu) return false;
  }
  return true;
}

inline void utf8_append(std::string& out, std::uint32_t cp) {
  if (cp < 0x80u) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800u) {
    out.push_back(static_cast<char>(0xC0u | (cp >> 6)));
    out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
  } else if (cp < 0x10000u) {
    out.push_back(static_cast<char>(0xE0u | (cp >> 12)));
    out.push_back(static_cast<char>(0x80u | ((cp >> 6) & 0x3Fu)));
    out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
  } else {
    out.push_back(static_cast<char>(0xF0u | (cp >> 18)));
    out.push_back(static_cast<char>(0x80u | ((cp >> 12) & 0x3Fu)));
    out.push_back(static_cast<char>(0x80u | ((cp >> 6) & 0x3Fu)));
    out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
  }
}

inline std::vector<std::uint32_t> utf8_decode(std::string_view s) {
  std::vector<std::uint32_t> cps;
  std::size_t i = 0;
  while (i < s.size()) cps.push_back(utf8_next(s, i));
  return cps;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace detail
}  // namespace infotweet
