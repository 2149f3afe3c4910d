#include <doctest.h>

#include <sstream>

#include "streetlex/corpus.hpp"
#include "streetlex/synth.hpp"

using namespace streetlex;

namespace {

LabeledCorpus ingest(const std::string& text, CorpusFormat format = CorpusFormat::jsonl,
                     const Codebook& cb = default_codebook()) {
  std::istringstream in(text);
  return ingest_corpus(in, format, cb);
}

std::string error_of(const std::string& text, const Codebook& cb = default_codebook()) {
  try {
    ingest(text, CorpusFormat::jsonl, cb);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kTweet =
    R"({"id":"t1","author":"a","created_at":"2014-03-29T10:00:00Z","text":"rip bro"})";

}  // namespace

TEST_CASE("minimal and empty input") {
  const auto c = ingest(std::string(kTweet) + "\n");
  REQUIRE(c.tweets.size() == 1);
  CHECK(c.tweets[0].id == "t1");
  CHECK(c.annotations.empty());
  CHECK(ingest("").tweets.empty());
}

TEST_CASE("ingest errors carry line numbers") {
  Codebook no_sadness;
  no_sadness.add("death", Category::grief);
  const std::string ann = R"({"tweet_id":"t1","annotator_id":"x","fine_code":"sadness"})";
  const auto msg = error_of(std::string(kTweet) + "\n" + ann + "\n", no_sadness);
  CHECK(msg.find("sadness") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);

  CHECK(error_of(std::string(kTweet) + "\n" + kTweet + "\n").find("line 2") !=
        std::string::npos);
  CHECK(error_of("{not json\n").find("line 1") != std::string::npos);
  CHECK(error_of(R"({"tweet_id":"nope","annotator_id":"x","fine_code":"death"})")
            .find("nope") != std::string::npos);
  CHECK(error_of(R"({"id":"t1","author":"a","created_at":"2014-03-29T10:00:00","text":"x"})")
            .find("line 1") != std::string::npos);
  CHECK(error_of(std::string(kTweet) + "\n" +
                 R"({"tweet_id":"t1","annotator_id":"x","fine_code":"death"})" + "\n" +
                 R"({"tweet_id":"t1","annotator_id":"x","fine_code":"death"})")
            .find("line 3") != std::string::npos);
}

TEST_CASE("timestamps") {
  const auto t = parse_timestamp("2014-03-29T12:00:00.25+02:00");
  CHECK(format_timestamp(t) == "2014-03-29T10:00:00.250Z");
  CHECK(format_timestamp(parse_timestamp("2014-03-29T10:00:00Z")) ==
        "2014-03-29T10:00:00Z");
  CHECK_THROWS_AS(parse_timestamp("2014-03-29T10:00:00"), ArgumentError);
  CHECK_THROWS_AS(parse_timestamp("2014-02-30T10:00:00Z"), ArgumentError);
  CHECK_THROWS_AS(parse_timestamp("2014-03-29 10:00:00Z"), ArgumentError);
}

TEST_CASE("collapse under the bundled codebook") {
  const auto cb = default_codebook();
  CHECK(cb.collapse("threats") == Category::aggression);
  CHECK(cb.collapse("aggression") == Category::aggression);
  CHECK(cb.collapse("sadness") == Category::grief);
  CHECK(cb.collapse("general-conversation") == Category::other);
  try {
    cb.collapse("notacode");
    FAIL("expected an error");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("notacode") != std::string::npos);
  }
  for (const auto& [code, cat] : cb.entries()) CHECK(cb.collapse(code) == cat);
}

TEST_CASE("codebook text round-trip") {
  const auto cb = default_codebook();
  std::istringstream in("# comment\n" + write_codebook(cb));
  CHECK(load_codebook(in) == cb);
  std::istringstream bad("threats\tviolence\n");
  CHECK_THROWS_AS(load_codebook(bad), ParseError);
}

TEST_CASE("window filter") {
  const auto day = [](int d) {
    return parse_timestamp("2014-03-01T00:00:00Z") + std::chrono::days(d);
  };
  LabeledCorpus c;
  c.codebook = default_codebook();
  for (int d : {1, 5, 20}) {
    c.tweets.push_back({"t" + std::to_string(d), "a", day(d), "x", std::nullopt});
    c.annotations.push_back({"t" + std::to_string(d), "x", "death", std::nullopt});
  }
  const auto w = window_filter(c, day(0), day(10));
  REQUIRE(w.tweets.size() == 2);
  CHECK(w.tweets[0].id == "t1");
  CHECK(w.tweets[1].id == "t5");
  CHECK(w.annotations.size() == 2);
  CHECK(window_filter(c, day(0), day(30)) == c);
  CHECK(window_filter(c, day(5), day(5)).tweets.empty());
  CHECK_THROWS_AS(window_filter(c, day(10), day(0)), ArgumentError);
}

TEST_CASE("serialize then re-ingest gives an equal corpus") {
  SynthOptions o;
  o.tweets_per_class = 10;
  LabeledCorpus c = synth_corpus(o);
  c.annotations[0].duvaa = DuvaaContext{"shooting", "set member", "threat\tlist",
                                        "names", "angry\nloud", "funeral"};
  c.tweets[1].text = "line one\nline two\twith tab \\ slash";
  for (auto f : {CorpusFormat::jsonl, CorpusFormat::tsv}) {
    CHECK(ingest(write_corpus(c, f), f, c.codebook) == c);
  }
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("annotations alone") {
  const std::string text =
      R"({"tweet_id":"t9","annotator_id":"x","fine_code":"death"})" "\n";
  std::istringstream in(text);
  const auto a = read_annotations(in, CorpusFormat::jsonl, default_codebook());
  REQUIRE(a.size() == 1);
  CHECK(a[0].tweet_id == "t9");
}

TEST_CASE("validate catches a dangling annotation") {
  LabeledCorpus c;
  c.codebook = default_codebook();
  c.annotations.push_back({"ghost", "x", "death", std::nullopt});
  CHECK_THROWS_AS(validate(c), Error);
}
