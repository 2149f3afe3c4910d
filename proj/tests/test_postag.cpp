#include <doctest.h>

#include <set>
#include <sstream>

#include "streetlex/postag.hpp"
#include "streetlex/synth.hpp"
#include "support.hpp"

using namespace streetlex;

TEST_CASE("tagset order and size") {
  const auto& tags = TagSet::tags();
  CHECK(tags.size() == 25);
  CHECK(std::set<std::string_view>(tags.begin(), tags.end()).size() == 25);
  CHECK(tags.front() == "N");
  CHECK(tags[20] == ",");
  CHECK(tags.back() == "Y");
  CHECK(TagSet::contains("@"));
  CHECK(!TagSet::contains("NN"));
}

TEST_CASE("augment") {
  CHECK(augment(std::vector<std::string>{"w=opp"}, Domain::target) ==
        std::vector<std::string>{"shared|w=opp", "dom=target|w=opp"});
  CHECK(augment(std::vector<std::string>{}, Domain::source).empty());
  const std::vector<std::string> f = {"w=run", "suf3=unn"};
  const auto s = augment(f, Domain::source);
  const auto t = augment(f, Domain::target);
  REQUIRE(s.size() == 4);
  for (std::size_t i = 0; i < 4; i += 2) CHECK(s[i] == t[i]);
  CHECK(s[1] == "dom=source|w=run");
}

TEST_CASE("memorizable corpus is learned exactly") {
  const auto corpus = support::memorizable_corpus();
  TaggerOptions o;
  const auto model = train_tagger({}, corpus, o);
  CHECK(tagger_accuracy(model, corpus) == 1.0);
  CHECK(model.tag(corpus[2].tokens, Domain::target) == corpus[2].tags);
  CHECK(model.tag({}, Domain::target).empty());
}

TEST_CASE("training is deterministic and seed-sensitive in order only") {
  const auto corpus = support::memorizable_corpus();
  TaggerOptions o;
  o.seed = 5;
  CHECK(train_tagger(corpus, {}, o) == train_tagger(corpus, {}, o));
}

TEST_CASE("all-zero model picks the first tag") {
  const TaggerModel empty;
  const auto tags = empty.tag(tokenize("who dis"), Domain::target);
  CHECK(tags == std::vector<std::string>{"N", "N"});
}

TEST_CASE("domain augmentation separates the two uses of blow") {
  const auto d = support::blow_corpus();
  TaggerOptions aug;
  const auto model = train_tagger(d.source, d.target_train, aug);
  const auto toks = tokenize("they blow it .");
  CHECK(model.tag(toks, Domain::target)[1] == "N");
  CHECK(model.tag(toks, Domain::source)[1] == "V");

  TaggerOptions pooled;
  pooled.domain_augmentation = false;
  const auto base = train_tagger(d.source, d.target_train, pooled);
  CHECK(tagger_accuracy(model, d.target_test) > tagger_accuracy(base, d.target_test));
}

TEST_CASE("accuracy counts tokens") {
  // Six of nine tokens match the model's memorized tags.
  const auto corpus = support::memorizable_corpus();
  const auto model = train_tagger({}, corpus, {});
  auto gold = std::vector<TaggedSentence>{corpus[0], corpus[2]};
  gold[0].tags[0] = "V";
  gold[0].tags[1] = "V";
  gold[1].tags[4] = "V";
  CHECK(tagger_accuracy(model, gold) == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
  for (auto& s : gold) {
    for (auto& t : s.tags) t = "Y";
  }
  CHECK(tagger_accuracy(model, gold) == 0.0);
  CHECK_THROWS_AS(tagger_accuracy(model, {}), ArgumentError);
}

TEST_CASE("training rejects bad input") {
  CHECK_THROWS_AS(train_tagger({}, {}, {}), ArgumentError);
  TaggerOptions zero;
  zero.epochs = 0;
  CHECK_THROWS_AS(train_tagger(support::memorizable_corpus(), {}, zero), ArgumentError);
  auto bad = support::memorizable_corpus();
  bad[0].tags.pop_back();
  CHECK_THROWS_AS(train_tagger(bad, {}, {}), ArgumentError);
}

TEST_CASE("save and load reproduce predictions") {
  SynthOptions so;
  so.tagged_per_domain = 40;
  const auto corpus = synth_tagged(so);
  const auto model = train_tagger(corpus, {}, {});
  std::istringstream in(model.save());
  const auto loaded = TaggerModel::load(in);
  CHECK(loaded == model);
  CHECK(loaded.save() == model.save());
  for (const auto& s : corpus) {
    CHECK(loaded.tag(s.tokens, s.domain) == model.tag(s.tokens, s.domain));
  }
  std::istringstream junk("not a model\n");
  CHECK_THROWS_AS(TaggerModel::load(junk), ParseError);
}

TEST_CASE("parallel batch tagging matches the serial reference") {
  SynthOptions so;
  so.tagged_per_domain = 60;
  const auto corpus = synth_tagged(so);
  const auto model = train_tagger({}, corpus, {});
  std::vector<std::vector<Token>> sentences;
  for (const auto& s : corpus) sentences.push_back(s.tokens);
  const auto serial = tag_batch_serial(model, sentences, Domain::target);
  CHECK(tag_batch(model, sentences, Domain::target) == serial);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    CHECK(serial[i].size() == sentences[i].size());
    for (const auto& t : serial[i]) CHECK(TagSet::contains(t));
  }
}

TEST_CASE("tagged corpus text round-trip") {
  const auto corpus = support::memorizable_corpus();
  const auto text = write_tagged_corpus(corpus);
  std::istringstream in(text);
  const auto back = read_tagged_corpus(in, Domain::target);
  REQUIRE(back.size() == corpus.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].tags == corpus[i].tags);
    CHECK(back[i].domain == corpus[i].domain);
    CHECK(surfaces(back[i].tokens) == surfaces(corpus[i].tokens));
  }
  std::istringstream bad("opp\tNN\n");
  CHECK_THROWS_AS(read_tagged_corpus(bad, Domain::target), ParseError);
}

TEST_CASE("split_tagged is a seeded partition") {
  SynthOptions so;
  so.tagged_per_domain = 50;
  const auto corpus = synth_tagged(so);
  const auto a = split_tagged(corpus, 0.8, 3);
  const auto b = split_tagged(corpus, 0.8, 3);
  CHECK(a.train.size() == 80);
  CHECK(a.held_out.size() == 20);
  CHECK(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].tags == b.train[i].tags);
  }
}
