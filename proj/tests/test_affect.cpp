#include <doctest.h>

#include <sstream>

#include "streetlex/affect.hpp"
#include "streetlex/synth.hpp"
#include "support.hpp"

using namespace streetlex;

namespace {

AffectLexicon lexicon(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  return load_lexicon(in, warnings);
}

Glossary glossary(std::initializer_list<std::pair<const char*, const char*>> entries) {
  std::map<std::string, GlossEntry, std::less<>> m;
  for (const auto& [s, g] : entries) m[s] = GlossEntry{g, 0.9};
  return Glossary(std::move(m));
}

const char* kLex = "sad\t1.0\t1.5\t2.0\nhappy\t3.0\t2.0\t2.0\nenemy\t1.2\t2.6\t2.0\n";

}  // namespace

TEST_CASE("loading") {
  const auto lex = lexicon("# header\nsad\t1.0\t1.5\t2.0\n\n");
  REQUIRE(lex.find("sad"));
  CHECK(*lex.find("sad") == AffectTriple{1.0, 1.5, 2.0});
  CHECK(lexicon("").empty());
  CHECK_THROWS_AS(lexicon("sad\t5.0\t1.5\t2.0\n"), ParseError);
  CHECK_THROWS_AS(lexicon("sad\t1.0\t1.5\n"), ParseError);

  std::vector<std::string> warnings;
  const auto dup = lexicon("sad\t1.0\t1.5\t2.0\nsad\t1.1\t1.5\t2.0\n", &warnings);
  CHECK(dup.size() == 1);
  CHECK((*dup.find("sad"))[0] == 1.1);
  CHECK(warnings.size() == 1);
  CHECK_NOTHROW(lexicon(synth_lexicon_text()));
}

TEST_CASE("lookup") {
  const auto lex = lexicon(kLex);
  const auto gl = glossary({{"opp", "enemy"}, {"sad", "happy"}});
  CHECK(*lookup(make_token("SAD"), lex, gl) == AffectTriple{1.0, 1.5, 2.0});
  CHECK(*lookup(make_token("opp"), lex, gl) == AffectTriple{1.2, 2.6, 2.0});
  CHECK(!lookup(make_token("opp"), lex, Glossary{}));
  CHECK(!lookup(make_token("http://sad.com"), lex, gl));
  CHECK(!lookup(make_token("#sad"), lex, gl));
}

TEST_CASE("aggregation") {
  const auto lex = lexicon(kLex);
  const auto same = affect_features(tokenize("sad sad"), lex, {});
  CHECK(same.matched == 2);
  CHECK(same.coverage == 1.0);
  REQUIRE(same.stats);
  for (AffectDim d : kAffectDims) {
    const auto& s = (*same.stats)[std::size_t(d)];
    CHECK(s.mean == s.min);
    CHECK(s.max == s.min);
  }

  const auto mixed = affect_features(tokenize("sad happy"), lex, {});
  REQUIRE(mixed.stats);
  const auto& p = (*mixed.stats)[0];
  CHECK(p.mean == doctest::Approx(2.0));
  CHECK(p.min == 1.0);
  CHECK(p.max == 3.0);

  const auto none = affect_features(tokenize("zzz qqq"), lex, {});
  CHECK(none.matched == 0);
  CHECK(none.coverage == 0.0);
  CHECK(!none.stats);

  const auto partial = affect_features(tokenize("sad @x #y zzz"), lex, {});
  CHECK(partial.eligible == 2);
  CHECK(partial.coverage == 0.5);
  CHECK(affect_features({}, lex, {}).coverage == 0.0);
}

TEST_CASE("glossary mediation and its ablation") {
  const auto lex = lexicon(kLex);
  const auto gl = glossary({{"opp", "enemy"}, {"opps", "enemy"}});
  const auto toks = tokenize("opp opps");
  CHECK(affect_features(toks, lex, gl).coverage > 0.0);
  CHECK(affect_features(toks, lex, {}).coverage == 0.0);
}

TEST_CASE("permutation invariance, bounds and monotone coverage") {
  const auto lex = lexicon(synth_lexicon_text());
  const auto gl = glossary({{"opp", "enemy"}, {"rip", "rest"}, {"lol", "laugh"}});
  Rng rng(5);
  const std::vector<std::string> words = {"opp", "rip", "lol", "sad", "happy",
                                          ":(", "zzz", "#x", "gun", "pain"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> w;
    const auto n = rng.below(8);
    for (std::uint64_t k = 0; k < n; ++k) w.push_back(words[rng.below(words.size())]);
    std::vector<Token> toks;
    for (const auto& s : w) toks.push_back(make_token(s));
    const auto a = affect_features(toks, lex, gl);
    rng.shuffle(toks);
    const auto b = affect_features(toks, lex, gl);
    CHECK(a.matched == b.matched);
    CHECK(a.coverage == b.coverage);
    CHECK(a.stats.has_value() == b.stats.has_value());
    if (a.stats) {
      for (std::size_t d = 0; d < 3; ++d) {
        const auto& x = (*a.stats)[d];
        const auto& y = (*b.stats)[d];
        CHECK(x.mean == y.mean);
        CHECK(x.min == y.min);
        CHECK(x.max == y.max);
        CHECK(x.min <= x.mean);
        CHECK(x.mean <= x.max);
        CHECK(x.min >= kAffectMin);
        CHECK(x.max <= kAffectMax);
      }
    }
    AffectLexicon bigger = lex;
    bigger.add("zzz", {2.0, 2.0, 2.0});
    const auto c = affect_features(toks, bigger, gl);
    CHECK(c.matched >= a.matched);
    CHECK(c.coverage >= a.coverage);
  }
}
