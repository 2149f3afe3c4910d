#include "streetlex/tokenize.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "streetlex/util.hpp"

namespace streetlex {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t byte;
  std::size_t bytes;
  bool valid;
};

// Decodes UTF-8. Invalid or truncated sequences yield one invalid code point
// per offending byte.
std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(text[k]);
  };
  while (i < text.size()) {
    const unsigned char b0 = byte(i);
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if (b0 < 0x80) {
      out.push_back({b0, i, 1, true});
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    }
    bool ok = len != 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const unsigned char b = byte(i + k);
      ok = (b & 0xC0) == 0x80;
      cp = (cp << 6) | (b & 0x3F);
    }
    ok = ok && cp >= min && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    if (ok) {
      out.push_back({cp, i, len, true});
      i += len;
    } else {
      out.push_back({b0, i, 1, false});
      ++i;
    }
  }
  return out;
}

bool in(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

bool is_space(const CodePoint& c) {
  if (!c.valid) return false;
  const char32_t v = c.value;
  return v == ' ' || in(v, 0x09, 0x0D) || v == 0x85 || v == 0xA0 ||
         v == 0x1680 || in(v, 0x2000, 0x200A) || v == 0x2028 ||
         v == 0x2029 || v == 0x202F || v == 0x205F || v == 0x3000;
}

bool is_emoji(const CodePoint& c) {
  if (!c.valid) return false;
  const char32_t v = c.value;
  return in(v, 0x1F000, 0x1FAFF) || in(v, 0x2600, 0x27BF) ||
         in(v, 0x2B05, 0x2B07) || v == 0x2B1B || v == 0x2B1C ||
         v == 0x2B50 || v == 0x2B55 || in(v, 0x231A, 0x231B) ||
         in(v, 0x23E9, 0x23F3) || in(v, 0x23F8, 0x23FA) || v == 0x3030 ||
         v == 0x303D || v == 0x3297 || v == 0x3299;
}

// Code points glued onto a preceding emoji.
bool is_emoji_modifier(char32_t v) {
  return v == 0xFE0F || v == 0xFE0E || in(v, 0x1F3FB, 0x1F3FF) ||
         v == 0x20E3 || in(v, 0xE0020, 0xE007F);
}

bool is_regional_indicator(char32_t v) { return in(v, 0x1F1E6, 0x1F1FF); }

bool is_unicode_punct(char32_t v) {
  return in(v, 0x80, 0xBF) || v == 0xD7 || v == 0xF7 ||
         in(v, 0x200B, 0x205E) || in(v, 0x2060, 0x206F) ||
         in(v, 0x2190, 0x22FF) || in(v, 0x3001, 0x303F) ||
         in(v, 0xFE10, 0xFE1F) || in(v, 0xFE30, 0xFE6F) ||
         in(v, 0xFF01, 0xFF0F) || in(v, 0xFF1A, 0xFF20) ||
         in(v, 0xFF3B, 0xFF40) || in(v, 0xFF5B, 0xFF65);
}

bool is_ascii_alnum(char32_t v) {
  return in(v, '0', '9') || in(v, 'a', 'z') || in(v, 'A', 'Z');
}

bool is_digit(const CodePoint& c) { return c.valid && in(c.value, '0', '9'); }

bool is_word_char(const CodePoint& c) {
  if (!c.valid || is_space(c)) return false;
  const char32_t v = c.value;
  if (v < 0x80) return is_ascii_alnum(v) || v == '_';
  return !is_emoji(c) && !is_unicode_punct(v);
}

bool is_handle_char(const CodePoint& c) {
  return c.valid && (is_ascii_alnum(c.value) || c.value == '_');
}

bool is_word_joiner(char32_t v) { return v == '\'' || v == 0x2019 || v == '-'; }

bool is_numeral_separator(char32_t v) { return v == '.' || v == ',' || v == ':'; }

constexpr std::array<std::string_view, 42> kEmoticons = [] {
  std::array<std::string_view, 42> list = {
      ":-)", ":-(", ":-/", ":-\\", ":-p", ":-P", ":-D", ":-o", ":-O", ":-|",
      ";-)", ";-p", ";-P", ":'(", ":')", "</3", ">:(", ">:)",
      ":)",  ":(",  ":/",  ":\\",  ":p",  ":P",  ":D",  ":o",  ":O",  ":|",
      ":*",  ":@",  ":$",  ";)",  ";p",  ";P",  ";D",  "=)",  "=(",  "(:",
      "):",  "<3",  "xD",  "XD"};
  std::sort(list.begin(), list.end(),
                   [](std::string_view a, std::string_view b) {
                     return a.size() > b.size();
                   });
  return list;
}();

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text), cps_(decode(text)) {}

  std::vector<Token> run() {
    std::size_t i = 0;
    while (i < cps_.size()) {
      if (is_space(cps_[i])) {
        ++i;
        continue;
      }
      std::size_t end = i;
      while (end < cps_.size() && !is_space(cps_[end])) ++end;
      scan_chunk(i, end);
      i = end;
    }
    return std::move(tokens_);
  }

 private:
  void scan_chunk(std::size_t i, std::size_t end) {
    while (i < end) {
      std::size_t j;
      if ((j = match_url(i, end)) > i) {
        emit(i, j, TokenKind::url);
      } else if ((j = match_prefixed(i, end, '@', is_handle_char)) > i) {
        emit(i, j, TokenKind::mention);
      } else if ((j = match_prefixed(i, end, '#', is_word_char)) > i) {
        emit(i, j, TokenKind::hashtag);
      } else if ((j = match_emoticon(i, end)) > i) {
        emit(i, j, TokenKind::emoticon);
      } else if ((j = match_emoji(i, end)) > i) {
        emit(i, j, TokenKind::emoji);
      } else if (is_word_char(cps_[i])) {
        bool numeral = true;
        j = match_word(i, end, numeral);
        emit(i, j, numeral ? TokenKind::numeral : TokenKind::word);
      } else {
        j = i + 1;
        while (j < end && cps_[j].valid && cps_[i].valid &&
               cps_[j].value == cps_[i].value) {
          ++j;
        }
        emit(i, j, TokenKind::punctuation);
      }
      i = j;
    }
  }

  bool ascii_at(std::size_t k, char c, bool fold = false) const {
    if (k >= cps_.size() || !cps_[k].valid) return false;
    char32_t v = cps_[k].value;
    if (fold && in(v, 'A', 'Z')) v = v - 'A' + 'a';
    return v == char32_t(static_cast<unsigned char>(c));
  }

  bool literal_at(std::size_t i, std::size_t end, std::string_view lit,
                  bool fold) const {
    if (i + lit.size() > end) return false;
    for (std::size_t k = 0; k < lit.size(); ++k) {
      if (!ascii_at(i + k, lit[k], fold)) return false;
    }
    return true;
  }

  std::size_t match_url(std::size_t i, std::size_t end) const {
    std::size_t scheme = 0;
    if (literal_at(i, end, "https://", true)) {
      scheme = 8;
    } else if (literal_at(i, end, "http://", true)) {
      scheme = 7;
    } else {
      return i;
    }
    std::size_t j = end;
    constexpr std::string_view trailing = ".,;:!?)\"'";
    while (j > i + scheme && cps_[j - 1].valid && cps_[j - 1].value < 0x80 &&
           trailing.find(char(cps_[j - 1].value)) != std::string_view::npos) {
      --j;
    }
    return j;
  }

  template <typename Pred>
  std::size_t match_prefixed(std::size_t i, std::size_t end, char lead,
                             Pred body) const {
    if (!ascii_at(i, lead) || i + 1 >= end || !body(cps_[i + 1])) return i;
    std::size_t j = i + 1;
    while (j < end && body(cps_[j])) ++j;
    return j;
  }

  std::size_t match_emoticon(std::size_t i, std::size_t end) const {
    for (std::string_view e : kEmoticons) {
      if (!literal_at(i, end, e, false)) continue;
      const std::size_t j = i + e.size();
      const bool ends_alnum = is_ascii_alnum(char32_t(e.back()));
      if (ends_alnum && j < end && cps_[j].valid &&
          is_ascii_alnum(cps_[j].value)) {
        continue;
      }
      return j;
    }
    return i;
  }

  std::size_t match_emoji(std::size_t i, std::size_t end) const {
    if (!is_emoji(cps_[i])) return i;
    std::size_t j = i + 1;
    if (is_regional_indicator(cps_[i].value) && j < end &&
        cps_[j].valid && is_regional_indicator(cps_[j].value)) {
      return j + 1;
    }
    while (j < end && cps_[j].valid) {
      if (is_emoji_modifier(cps_[j].value)) {
        ++j;
      } else if (cps_[j].value == 0x200D && j + 1 < end &&
                 is_emoji(cps_[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    return j;
  }

  // Word-character run with internal apostrophes/hyphens; digit runs may
  // contain . , : between digits. `numeral` reports an all-digit result.
  std::size_t match_word(std::size_t i, std::size_t end, bool& numeral) const {
    numeral = is_digit(cps_[i]);
    std::size_t j = i + 1;
    while (j < end) {
      const CodePoint& c = cps_[j];
      const bool next_word = j + 1 < end && is_word_char(cps_[j + 1]);
      if (is_word_char(c)) {
        numeral = numeral && is_digit(c);
        ++j;
      } else if (c.valid && numeral && is_numeral_separator(c.value) &&
                 j + 1 < end && is_digit(cps_[j + 1])) {
        ++j;
      } else if (c.valid && is_word_joiner(c.value) && next_word) {
        numeral = false;
        ++j;
      } else {
        break;
      }
    }
    return j;
  }

  void emit(std::size_t b, std::size_t e, TokenKind kind) {
    const std::size_t bb = cps_[b].byte;
    const std::size_t be = cps_[e - 1].byte + cps_[e - 1].bytes;
    tokens_.push_back(
        Token{std::string(text_.substr(bb, be - bb)), {b, e}, {bb, be}, kind});
  }

  std::string_view text_;
  std::vector<CodePoint> cps_;
  std::vector<Token> tokens_;
};

constexpr std::array<std::string_view, 8> kKindNames = {
    "word", "hashtag", "mention", "url",
    "emoticon", "emoji", "numeral", "punctuation"};

}  // namespace

std::string_view to_string(TokenKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

TokenKind token_kind_from_string(std::string_view name) {
  for (std::size_t k = 0; k < kKindNames.size(); ++k) {
    if (kKindNames[k] == name) return static_cast<TokenKind>(k);
  }
  throw ArgumentError("unknown token kind: " + std::string(name));
}

std::span<const std::string_view> emoticon_inventory() { return kEmoticons; }

std::vector<Token> tokenize(std::string_view text) {
  return Scanner(text).run();
}

std::vector<std::string> surfaces(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

Token make_token(std::string surface) {
  const std::size_t len = code_point_length(surface);
  TokenKind kind = TokenKind::word;
  auto toks = tokenize(surface);
  if (toks.size() == 1 && toks.front().surface.size() == surface.size()) {
    kind = toks.front().kind;
  }
  const std::size_t bytes = surface.size();
  return Token{std::move(surface), {0, len}, {0, bytes}, kind};
}

std::size_t code_point_length(std::string_view text) {
  return decode(text).size();
}

}  // namespace streetlex
