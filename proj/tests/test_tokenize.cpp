#include <doctest.h>

#include "streetlex/tokenize.hpp"
#include "support.hpp"

using namespace streetlex;

namespace {

std::vector<TokenKind> kinds(const std::vector<Token>& ts) {
  std::vector<TokenKind> out;
  for (const auto& t : ts) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST_CASE("hashtag, mention and url") {
  const auto ts = tokenize("#GBE @TyquanAssassin http://t.co/x");
  REQUIRE(ts.size() == 3);
  CHECK(kinds(ts) == std::vector<TokenKind>{TokenKind::hashtag, TokenKind::mention,
                                            TokenKind::url});
  CHECK(ts[2].surface == "http://t.co/x");
}

TEST_CASE("empty and whitespace-only text") {
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n ").empty());
}

TEST_CASE("emoticons from the fixed inventory") {
  const auto ts = tokenize("smh :(");
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].surface == "smh");
  CHECK(ts[0].kind == TokenKind::word);
  CHECK(ts[1].surface == ":(");
  CHECK(ts[1].kind == TokenKind::emoticon);

  for (auto e : emoticon_inventory()) {
    const auto one = tokenize(std::string(e));
    REQUIRE(one.size() == 1);
    CHECK(one[0].kind == TokenKind::emoticon);
  }
}

TEST_CASE("url trailing punctuation is split off") {
  const auto ts = tokenize("see http://t.co/abc).");
  REQUIRE(ts.size() >= 2);
  CHECK(ts[1].surface == "http://t.co/abc");
  CHECK(ts[1].kind == TokenKind::url);
}

TEST_CASE("emoji sequences stay whole") {
  const std::string thumbs = "\U0001F44D\U0001F3FD";
  const std::string family = "\U0001F468‍\U0001F469";
  const std::string flag = "\U0001F1FA\U0001F1F8";
  const auto ts = tokenize("lol" + thumbs + " " + family + flag);
  REQUIRE(ts.size() == 4);
  CHECK(ts[0].surface == "lol");
  CHECK(ts[1].surface == thumbs);
  CHECK(ts[2].surface == family);
  CHECK(ts[3].surface == flag);
  for (std::size_t i = 1; i < 4; ++i) CHECK(ts[i].kind == TokenKind::emoji);
}

TEST_CASE("numerals, contractions and punctuation") {
  const auto ts = tokenize("don't pay 1,000.50 !!! lil-bro");
  REQUIRE(ts.size() == 5);
  CHECK(ts[0].surface == "don't");
  CHECK(ts[0].kind == TokenKind::word);
  CHECK(ts[2].surface == "1,000.50");
  CHECK(ts[2].kind == TokenKind::numeral);
  CHECK(ts[3].surface == "!!!");
  CHECK(ts[3].kind == TokenKind::punctuation);
  CHECK(ts[4].surface == "lil-bro");
}

TEST_CASE("spans count code points") {
  const auto ts = tokenize("é opp");
  REQUIRE(ts.size() == 2);
  CHECK(ts[1].span.begin == 2);
  CHECK(ts[1].span.end == 5);
  CHECK(ts[1].byte_span.begin == 3);
  CHECK(support::check_tokens("é opp", ts).empty());
}

TEST_CASE("kind names round-trip") {
  for (auto k : {TokenKind::word, TokenKind::hashtag, TokenKind::mention,
                 TokenKind::url, TokenKind::emoticon, TokenKind::emoji,
                 TokenKind::numeral, TokenKind::punctuation}) {
    CHECK(token_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(token_kind_from_string("sticker"), ArgumentError);
}

TEST_CASE("fuzzed inputs round-trip and keep invariants") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = support::fuzz_text(rng);
    const auto ts = tokenize(text);
    const auto problem = support::check_tokens(text, ts);
    INFO("input: ", text);
    REQUIRE(problem.empty());
    CHECK(tokenize(text) == ts);
  }
}

TEST_CASE("make_token infers the kind") {
  CHECK(make_token("#opps").kind == TokenKind::hashtag);
  CHECK(make_token(":)").kind == TokenKind::emoticon);
  CHECK(make_token("opp").kind == TokenKind::word);
}
