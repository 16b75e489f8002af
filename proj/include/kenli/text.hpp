#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kenli {

// A tokenized text. `text` is the ASCII-lowercased input, so token surfaces
// always equal the spanned slice of `text`.
struct Token {
  std::string surface;
  std::size_t char_start = 0;  // byte offset into TokenizedText::text
  std::size_t char_end = 0;    // exclusive
};

struct TokenizedText {
  std::string text;
  std::vector<Token> tokens;

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
  }
};

namespace detail {

inline bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f';
}

inline bool is_unicode_space(char32_t c) {
  if (is_ascii_space(c)) return true;
  switch (c) {
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

inline bool is_strip_punct(char32_t c) {
  if (c < 0x80) {
    char ch = static_cast<char>(c);
    return (ch >= '!' && ch <= '/') || (ch >= ':' && ch <= '@') ||
           (ch >= '[' && ch <= '`') || (ch >= '{' && ch <= '~');
  }
  switch (c) {  // common typographic punctuation
    case 0x2018: case 0x2019: case 0x201C: case 0x201D:
    case 0x2013: case 0x2014: case 0x2026:
      return true;
    default:
      return false;
  }
}

// Decodes one UTF-8 codepoint at byte i; advances i. Invalid bytes are
// consumed one at a time and returned verbatim so offsets stay consistent.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char c0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 1;
  char32_t cp = c0;
  if (c0 >= 0xF0) len = 4;
  else if (c0 >= 0xE0) len = 3;
  else if (c0 >= 0xC0) len = 2;
  if (len > 1) {
    if (i + len > s.size()) { ++i; return c0; }
    cp = c0 & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char ck = static_cast<unsigned char>(s[i + k]);
      if ((ck & 0xC0) != 0x80) { ++i; return c0; }
      cp = (cp << 6) | (ck & 0x3F);
    }
  }
  i += len;
  return cp;
}

}  // namespace detail

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Lowercases and collapses runs of whitespace to single spaces; trims ends.
// Canonical form for entity names and lexicon keys.
inline std::string normalize_name(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t start = i;
    char32_t cp = detail::decode_utf8(s, i);
    if (detail::is_unicode_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    for (std::size_t k = start; k < i; ++k) {
      char c = s[k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      out += c;
    }
  }
  return out;
}

// Lowercase, split on Unicode whitespace, strip leading/trailing punctuation
// per token. A token that is all punctuation is kept as-is.
inline TokenizedText tokenize(std::string_view input) {
  TokenizedText tt;
  tt.text = ascii_lower(input);
  std::string_view text = tt.text;

  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = detail::decode_utf8(text, i);
    if (detail::is_unicode_space(cp)) continue;

    // Extend to the end of the whitespace-delimited chunk.
    std::size_t end = i;
    while (end < text.size()) {
      std::size_t probe = end;
      char32_t c = detail::decode_utf8(text, probe);
      if (detail::is_unicode_space(c)) break;
      end = probe;
    }

    // Strip punctuation from both ends.
    std::size_t s = start, e = end;
    while (s < e) {
      std::size_t probe = s;
      char32_t c = detail::decode_utf8(text, probe);
      if (!detail::is_strip_punct(c)) break;
      s = probe;
    }
    while (e > s) {
      // Walk back one codepoint: find the last codepoint start in [s, e).
      std::size_t last = e - 1;
      while (last > s && (static_cast<unsigned char>(text[last]) & 0xC0) == 0x80)
        --last;
      std::size_t probe = last;
      char32_t c = detail::decode_utf8(text, probe);
      if (!detail::is_strip_punct(c)) break;
      e = last;
    }
    if (s == e) {  // punctuation-only token: keep the raw chunk
      s = start;
      e = end;
    }
    tt.tokens.push_back(Token{std::string(text.substr(s, e - s)), s, e});
    i = end;
  }
  return tt;
}

// Sentence splitting: a sentence ends at . ? or ! followed by whitespace and
// an uppercase letter or digit, unless the terminator closes a known
// abbreviation. Returned spans are trimmed byte ranges into the input.
struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
};

namespace detail {

inline const std::array<std::string_view, 14>& abbreviations() {
  static const std::array<std::string_view, 14> kAbbrev = {
      "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "no.", "fig.",
      "e.g.", "i.e.", "etc.", "vs.", "u.s.", "approx."};
  return kAbbrev;
}

inline bool ends_with_abbreviation(std::string_view text, std::size_t dot_pos) {
  for (std::string_view ab : abbreviations()) {
    if (dot_pos + 1 < ab.size()) continue;
    std::size_t begin = dot_pos + 1 - ab.size();
    if (begin > 0) {
      char prev = text[begin - 1];
      bool boundary = prev == ' ' || prev == '\t' || prev == '\n' ||
                      prev == '(' || prev == '"';
      if (!boundary) continue;
    }
    std::string_view cand = text.substr(begin, ab.size());
    bool match = true;
    for (std::size_t k = 0; k < ab.size(); ++k) {
      char c = cand[k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c != ab[k]) { match = false; break; }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace detail

inline std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  auto trim = [&](std::size_t a, std::size_t b) {
    while (a < b && detail::is_ascii_space(static_cast<unsigned char>(text[a]))) ++a;
    while (b > a && detail::is_ascii_space(static_cast<unsigned char>(text[b - 1]))) --b;
    if (a < b) spans.push_back(SentenceSpan{a, b});
  };

  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    if (c == '.' && detail::ends_with_abbreviation(text, i)) continue;
    std::size_t j = i + 1;
    while (j < text.size() &&
           detail::is_ascii_space(static_cast<unsigned char>(text[j])))
      ++j;
    if (j == i + 1) continue;  // no whitespace after terminator
    if (j >= text.size()) break;
    char n = text[j];
    if ((n >= 'A' && n <= 'Z') || (n >= '0' && n <= '9')) {
      trim(begin, i + 1);
      begin = j;
      i = j - 1;
    }
  }
  trim(begin, text.size());
  return spans;
}

// Maximal runs of capitalized words, used as named-entity-ish search queries.
inline std::vector<std::string> capitalized_runs(std::string_view text) {
  std::vector<std::string> runs;
  std::string current;
  std::size_t i = 0;
  auto flush = [&] {
    if (!current.empty() && current.find(' ') != std::string::npos)
      runs.push_back(current);
    else if (!current.empty())
      runs.push_back(current);
    current.clear();
  };
  while (i < text.size()) {
    while (i < text.size() &&
           detail::is_ascii_space(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t start = i;
    while (i < text.size() &&
           !detail::is_ascii_space(static_cast<unsigned char>(text[i])))
      ++i;
    if (start == i) break;
    std::string_view word = text.substr(start, i - start);
    while (!word.empty() && detail::is_strip_punct(
                                static_cast<unsigned char>(word.front())))
      word.remove_prefix(1);
    bool had_trailing_punct = false;
    while (!word.empty() &&
           detail::is_strip_punct(static_cast<unsigned char>(word.back()))) {
      word.remove_suffix(1);
      had_trailing_punct = true;
    }
    if (!word.empty() && word.front() >= 'A' && word.front() <= 'Z') {
      if (!current.empty()) current += ' ';
      current += std::string(word);
      if (had_trailing_punct) flush();
    } else {
      flush();
    }
  }
  flush();
  return runs;
}

}  // namespace kenli
