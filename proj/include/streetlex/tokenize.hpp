// Twitter-aware tokenization.
//
// Input is UTF-8. Spans are measured in code points; a byte that is not part
// of a valid UTF-8 sequence counts as one code point on its own, so every
// input (valid or not) reconstructs exactly from its tokens and gaps.
//
// Within each whitespace-delimited chunk the scanner tries, at every token
// boundary and in this order: url, mention, hashtag, emoticon, emoji,
// numeral, punctuation, word.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streetlex/util.hpp"

namespace streetlex {

enum class TokenKind {
  word,
  hashtag,
  mention,
  url,
  emoticon,
  emoji,
  numeral,
  punctuation,
};

std::string_view to_string(TokenKind kind);
TokenKind token_kind_from_string(std::string_view name);

/// Half-open interval [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string surface;
  Span span;        ///< code-point offsets into the source text
  Span byte_span;   ///< byte offsets into the source text
  TokenKind kind = TokenKind::word;
  friend bool operator==(const Token&, const Token&) = default;
};

/// The closed emoticon inventory, longest entries first.
std::span<const std::string_view> emoticon_inventory();

std::vector<Token> tokenize(std::string_view text);

/// Surface strings only.
std::vector<std::string> surfaces(std::span<const Token> tokens);

/// Build a word token for text that did not come from tokenize (e.g. a
/// pre-tokenized corpus column). Kind is inferred from the surface alone.
Token make_token(std::string surface);

/// Number of code points under the tokenizer's decoding rules.
std::size_t code_point_length(std::string_view text);

}  // namespace streetlex
