// Independent oracles and fixture builders shared by the unit tests and the
// acceptance binary. Nothing here calls the library code it is used to check.
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streetlex/classify.hpp"
#include "streetlex/postag.hpp"
#include "streetlex/tokenize.hpp"
#include "streetlex/util.hpp"

namespace support {

using streetlex::Rng;

// Textbook kappa over integer labels in [0, k).
inline double brute_kappa(const std::vector<int>& a, const std::vector<int>& b,
                          int k) {
  const double n = double(a.size());
  double po = 0;
  for (std::size_t i = 0; i < a.size(); ++i) po += (a[i] == b[i]) ? 1.0 : 0.0;
  po /= n;
  double pe = 0;
  for (int label = 0; label < k; ++label) {
    double ca = 0, cb = 0;
    for (int x : a) ca += (x == label);
    for (int x : b) cb += (x == label);
    pe += (ca / n) * (cb / n);
  }
  return (po - pe) / (1.0 - pe);
}

inline bool degenerate(const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  return sa.size() == 1 && sa == sb;
}

struct Pair {
  std::vector<std::string> source, gloss;
};

struct Model1Result {
  std::map<std::pair<std::string, std::string>, double> t;
  std::vector<double> log_likelihood;  // after each iteration
};

// Straightforward EM on string-keyed maps, one iteration at a time.
inline Model1Result model1_oracle(const std::vector<Pair>& pairs,
                                  int iterations, bool use_null) {
  const std::string null = "<NULL>";
  auto sources = [&](const Pair& p) {
    std::vector<std::string> s = p.source;
    if (use_null) s.push_back(null);
    return s;
  };
  std::map<std::string, std::set<std::string>> cooc;
  for (const auto& p : pairs) {
    for (const auto& s : sources(p)) cooc[s].insert(p.gloss.begin(), p.gloss.end());
  }
  Model1Result r;
  for (const auto& [s, gs] : cooc) {
    for (const auto& g : gs) r.t[{s, g}] = 1.0 / double(gs.size());
  }
  for (int it = 0; it < iterations; ++it) {
    std::map<std::pair<std::string, std::string>, double> count;
    std::map<std::string, double> total;
    for (const auto& p : pairs) {
      const auto src = sources(p);
      for (const auto& g : p.gloss) {
        double z = 0;
        for (const auto& s : src) z += r.t[{s, g}];
        for (const auto& s : src) {
          const double c = r.t[{s, g}] / z;
          count[{s, g}] += c;
          total[s] += c;
        }
      }
    }
    for (auto& [key, v] : r.t) v = count[key] / total[key.first];
    double ll = 0;
    for (const auto& p : pairs) {
      const auto src = sources(p);
      for (const auto& g : p.gloss) {
        double z = 0;
        for (const auto& s : src) z += r.t[{s, g}];
        ll += std::log(z / double(src.size()));
      }
    }
    r.log_likelihood.push_back(ll);
  }
  return r;
}

// Random parallel corpus over small vocabularies.
inline std::vector<Pair> random_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Pair> out;
  for (std::size_t i = 0; i < n; ++i) {
    Pair p;
    const auto ls = 1 + rng.below(5), lg = 1 + rng.below(5);
    for (std::uint64_t k = 0; k < ls; ++k) p.source.push_back("s" + std::to_string(rng.below(12)));
    for (std::uint64_t k = 0; k < lg; ++k) p.gloss.push_back("g" + std::to_string(rng.below(10)));
    out.push_back(std::move(p));
  }
  return out;
}

// Appends one UTF-8 encoded code point.
inline void put_utf8(std::string& s, char32_t c) {
  if (c < 0x80) {
    s += char(c);
  } else if (c < 0x800) {
    s += char(0xC0 | (c >> 6));
    s += char(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    s += char(0xE0 | (c >> 12));
    s += char(0x80 | ((c >> 6) & 0x3F));
    s += char(0x80 | (c & 0x3F));
  } else {
    s += char(0xF0 | (c >> 18));
    s += char(0x80 | ((c >> 12) & 0x3F));
    s += char(0x80 | ((c >> 6) & 0x3F));
    s += char(0x80 | (c & 0x3F));
  }
}

// Tweet-flavoured random text: ASCII, markup fragments, emoji sequences,
// assorted scripts, odd whitespace and the occasional invalid byte.
inline std::string fuzz_text(Rng& rng) {
  static const std::vector<std::string> kFragments = {
      "http://t.co/", "https://", "@", "#", ":)", ":(", ":-)", ";)", ":p",
      ":/", "<3", ":'(", "lol", "rip", "opp", "'", "-", "...", "!!", "?",
      "12", "3.5", "1,000", "don't", "’", "é", " ",
      "‍", "️", "\U0001F602", "\U0001F44D\U0001F3FD",
      "\U0001F1FA\U0001F1F8", "\U0001F468‍\U0001F469", "❤",
      "中文", "مرحبا", "\t", "\n", "  ",
      "\xff", "\xc3", "\x80"};
  std::string s;
  const auto parts = rng.below(12);
  for (std::uint64_t i = 0; i < parts; ++i) {
    switch (rng.below(4)) {
      case 0:
        s += kFragments[rng.below(kFragments.size())];
        break;
      case 1:
        s += char(0x20 + rng.below(0x5F));
        break;
      case 2:
        put_utf8(s, char32_t(0xA0 + rng.below(0x2F00)));
        break;
      default:
        s += ' ';
        break;
    }
  }
  return s;
}

inline bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

// Unicode White_Space code points, UTF-8 encoded.
inline bool all_white_space(std::string_view gap) {
  static const std::vector<std::string> kSpaces = [] {
    std::vector<std::string> v;
    for (char32_t c : {0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20, 0x85, 0xA0, 0x1680,
                       0x2028, 0x2029, 0x202F, 0x205F, 0x3000}) {
      v.emplace_back();
      put_utf8(v.back(), c);
    }
    for (char32_t c = 0x2000; c <= 0x200A; ++c) {
      v.emplace_back();
      put_utf8(v.back(), c);
    }
    return v;
  }();
  while (!gap.empty()) {
    bool matched = false;
    for (const auto& sp : kSpaces) {
      if (gap.substr(0, sp.size()) == sp) {
        gap.remove_prefix(sp.size());
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// Decodes UTF-8 leniently: every invalid byte is one code point.
inline std::vector<std::size_t> code_point_starts(const std::string& s) {
  std::vector<std::size_t> starts;
  std::size_t i = 0;
  while (i < s.size()) {
    starts.push_back(i);
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3
                                : (c >> 3) == 30 ? 4 : 1;
    bool ok = len > 1 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    }
    if (ok && len == 2) ok = c >= 0xC2;
    if (ok && len == 3) {
      const unsigned char c1 = static_cast<unsigned char>(s[i + 1]);
      const char32_t cp = char32_t(c & 0x0F) << 12 | char32_t(c1 & 0x3F) << 6 |
                          char32_t(static_cast<unsigned char>(s[i + 2]) & 0x3F);
      ok = cp >= 0x800 && (cp < 0xD800 || cp > 0xDFFF);
    }
    if (ok && len == 4) {
      const unsigned char c1 = static_cast<unsigned char>(s[i + 1]);
      const char32_t cp = char32_t(c & 0x07) << 18 | char32_t(c1 & 0x3F) << 12;
      ok = cp >= 0x10000 && cp <= 0x10FFFF;
    }
    i += ok ? len : 1;
  }
  return starts;
}

// Empty string when every Token invariant and the round-trip hold.
inline std::string check_tokens(const std::string& text,
                                const std::vector<streetlex::Token>& tokens) {
  using streetlex::TokenKind;
  const auto starts = code_point_starts(text);
  auto byte_of = [&](std::size_t cp) {
    return cp < starts.size() ? starts[cp] : text.size();
  };
  std::string rebuilt;
  std::size_t prev_end = 0;
  for (const auto& t : tokens) {
    if (t.surface.empty()) return "empty token";
    if (t.byte_span.begin < prev_end) return "overlapping or unordered spans";
    if (t.byte_span.end > text.size()) return "span outside text";
    if (t.span.begin >= t.span.end || t.span.end > starts.size()) {
      return "bad code-point span";
    }
    if (byte_of(t.span.begin) != t.byte_span.begin ||
        byte_of(t.span.end) != t.byte_span.end) {
      return "code-point and byte spans disagree for '" + t.surface + "'";
    }
    const std::string gap = text.substr(prev_end, t.byte_span.begin - prev_end);
    if (!all_white_space(gap)) return "non-space text between tokens";
    const std::string slice =
        text.substr(t.byte_span.begin, t.byte_span.end - t.byte_span.begin);
    if (slice != t.surface) return "surface differs from slice";
    for (char c : t.surface) {
      if (is_space_byte(c)) return "whitespace inside token '" + t.surface + "'";
    }
    if (t.kind == TokenKind::hashtag && t.surface.front() != '#') {
      return "hashtag without '#'";
    }
    if (t.kind == TokenKind::mention && t.surface.front() != '@') {
      return "mention without '@'";
    }
    rebuilt += gap + t.surface;
    prev_end = t.byte_span.end;
  }
  rebuilt += text.substr(prev_end);
  if (rebuilt != text) return "reconstruction differs";
  return "";
}

inline streetlex::TaggedSentence sentence(
    const std::vector<std::pair<std::string, std::string>>& words,
    streetlex::Domain domain) {
  std::string text;
  std::vector<std::string> tags;
  for (const auto& [w, t] : words) {
    text += (text.empty() ? "" : " ") + w;
    tags.push_back(t);
  }
  streetlex::TaggedSentence s;
  s.tokens = streetlex::tokenize(text);
  s.tags = std::move(tags);
  s.domain = domain;
  return s;
}

// "blow" is a verb in edited text and a noun in tweets, in identical
// contexts, so only domain-specific features can separate the two uses.
struct DomainShift {
  std::vector<streetlex::TaggedSentence> source, target_train, target_test;
};

inline DomainShift blow_corpus() {
  using streetlex::Domain;
  DomainShift d;
  const std::vector<std::string> subjects = {"they", "we", "i"};
  const std::vector<std::string> objects = {"it", "that", "this"};
  for (int rep = 0; rep < 3; ++rep) {
    for (const auto& s : subjects) {
      for (const auto& o : objects) {
        d.source.push_back(sentence({{s, "O"}, {"blow", "V"}, {o, "O"}, {".", ","}},
                                    Domain::source));
      }
    }
  }
  for (const auto& s : subjects) {
    for (const auto& o : objects) {
      d.target_train.push_back(
          sentence({{s, "O"}, {"blow", "N"}, {o, "O"}, {".", ","}}, Domain::target));
    }
  }
  d.target_test = d.target_train;
  for (const auto& s : subjects) {
    d.target_test.push_back(
        sentence({{s, "O"}, {"blow", "N"}, {"!", ","}}, Domain::target));
  }
  return d;
}

// Every word type has exactly one tag.
inline std::vector<streetlex::TaggedSentence> memorizable_corpus() {
  using streetlex::Domain;
  return {
      sentence({{"the", "D"}, {"dog", "N"}, {"runs", "V"}, {"fast", "R"}},
               Domain::source),
      sentence({{"a", "D"}, {"big", "A"}, {"cat", "N"}, {"sleeps", "V"}},
               Domain::source),
      sentence({{"@bro", "@"}, {"lol", "!"}, {"u", "O"}, {"finna", "V"},
                {"#GBE", "#"}},
               Domain::target),
      sentence({{"rip", "!"}, {"lil", "A"}, {"homie", "N"}, {":(", "E"}},
               Domain::target),
      sentence({{"we", "O"}, {"in", "P"}, {"chiraq", "^"}, {"2day", "N"}},
               Domain::target),
  };
}

// Each class owns a disjoint block of indicator features, one of them on
// every example of the class; shared noise
// features carry no signal.
inline std::vector<streetlex::Example> separable_examples(std::size_t per_class,
                                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<streetlex::Example> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (auto c : streetlex::kCategories) {
      streetlex::Example e;
      e.id = "x" + std::to_string(out.size());
      e.label = c;
      const std::string cls(streetlex::to_string(c));
      e.features.add(cls, 1.0);
      e.features.add(cls + ":" + std::to_string(rng.below(4)), 1.0);
      e.features.add("noise:" + std::to_string(rng.below(6)), 1.0);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace support
