#include <doctest.h>

#include <cmath>
#include <sstream>

#include "streetlex/align.hpp"
#include "streetlex/synth.hpp"
#include "support.hpp"

using namespace streetlex;

namespace {

std::vector<ParallelPair> toy() {
  return {{{"opp", "run"}, {"enemy", "flee"}}, {{"opp"}, {"enemy"}}};
}

std::vector<ParallelPair> to_pairs(const std::vector<support::Pair>& ps) {
  std::vector<ParallelPair> out;
  for (const auto& p : ps) out.push_back({p.source, p.gloss});
  return out;
}

void check_normalized(const TranslationTable& t) {
  for (const auto& [s, dist] : t.probs()) {
    double sum = 0;
    for (const auto& [g, p] : dist) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

}  // namespace

TEST_CASE("single candidate") {
  const std::vector<ParallelPair> one = {{{"opp"}, {"enemy"}}};
  const auto t = train_model1(one, 1, false);
  CHECK(t.prob("opp", "enemy") == 1.0);
  CHECK(viterbi_align(t, one[0]) == Alignment{0});
}

TEST_CASE("two-pair toy corpus after one iteration") {
  const auto t = train_model1(toy(), 1, false);
  CHECK(std::abs(t.prob("opp", "enemy") - 0.75) < 1e-12);
  CHECK(std::abs(t.prob("opp", "flee") - 0.25) < 1e-12);
  CHECK(std::abs(t.prob("run", "enemy") - 0.5) < 1e-12);
  CHECK(std::abs(t.prob("run", "flee") - 0.5) < 1e-12);
  CHECK(t.iterations_run() == 1);

  const auto a = viterbi_align(t, toy()[0]);
  CHECK(a == Alignment{0, 1});

  const auto g = extract_glossary(t, 0.7, 0);
  REQUIRE(g.size() == 1);
  CHECK(g.find("opp")->gloss == "enemy");
  CHECK(g.find("opp")->probability == doctest::Approx(0.75));
  CHECK(g.find("run") == nullptr);
}

TEST_CASE("toy corpus against the independent EM oracle") {
  std::vector<support::Pair> ps = {{{"opp", "run"}, {"enemy", "flee"}},
                                   {{"opp"}, {"enemy"}}};
  for (bool use_null : {false, true}) {
    const auto oracle = support::model1_oracle(ps, 20, use_null);
    const auto t = train_model1(toy(), 20, use_null);
    for (const auto& [key, p] : oracle.t) {
      const std::string src = key.first == "<NULL>" ? std::string(kNullToken) : key.first;
      CHECK(std::abs(t.prob(src, key.second) - p) < 1e-12);
    }
    for (std::size_t i = 0; i < oracle.log_likelihood.size(); ++i) {
      CHECK(std::abs(t.log_likelihoods()[i + 1] - oracle.log_likelihood[i]) < 1e-9);
    }
  }
  const auto t20 = train_model1(toy(), 20, false);
  CHECK(t20.prob("opp", "enemy") > 0.75);
}

TEST_CASE("EM stays normalized and the likelihood never drops") {
  const auto pairs = to_pairs(support::random_pairs(50, 99));
  int calls = 0;
  const auto t = train_model1(pairs, 20, true, EStep::parallel,
                              [&](int it, const TranslationTable& table) {
                                CHECK(it == ++calls);
                                check_normalized(table);
                              });
  CHECK(calls == 20);
  const auto& ll = t.log_likelihoods();
  REQUIRE(ll.size() == 21);
  for (std::size_t i = 1; i < ll.size(); ++i) CHECK(ll[i] >= ll[i - 1]);

  const auto oracle = support::model1_oracle(support::random_pairs(50, 99), 20, true);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(std::abs(ll[i + 1] - oracle.log_likelihood[i]) <
          1e-9 * std::abs(oracle.log_likelihood[i]));
  }
}

TEST_CASE("parallel E-step is bit-identical to the serial one") {
  SynthOptions so;
  const auto pairs = synth_parallel(so);
  for (bool use_null : {false, true}) {
    const auto a = train_model1(pairs, 8, use_null, EStep::serial);
    const auto b = train_model1(pairs, 8, use_null, EStep::parallel);
    CHECK(a == b);
    CHECK(a.save() == b.save());
  }
}

TEST_CASE("viterbi tie-breaks") {
  const std::vector<ParallelPair> uniform = {{{"a", "b"}, {"x", "y"}}};
  const auto t = train_model1(uniform, 1, false);
  CHECK(viterbi_align(t, uniform[0]) == Alignment{0, 0});
}

TEST_CASE("glossary rules") {
  const std::vector<ParallelPair> uniform = {{{"a"}, {"x", "y"}}};
  CHECK(extract_glossary(train_model1(uniform, 1, false), 1.0, 0).empty());

  const std::vector<ParallelPair> same = {{{"the"}, {"the"}}, {{"the"}, {"the"}}};
  CHECK(extract_glossary(train_model1(same, 3, false), 0.5, 0).empty());

  const auto t = train_model1(synth_parallel(SynthOptions{}), 10, true);
  const auto g = extract_glossary(t, 0.5, 2);
  CHECK(g.find("opp")->gloss == "enemy");
  CHECK(g.find(kNullToken) == nullptr);
  for (const auto& [src, e] : g.entries()) {
    CHECK(e.probability >= 0.5);
    CHECK(t.source_counts().at(src) >= 2);
    double best = 0;
    for (const auto& [gl, p] : t.probs().at(src)) best = std::max(best, p);
    CHECK(e.probability == best);
    CHECK(e.gloss != src);
  }
  CHECK(extract_glossary(t, 0.5, 1000).empty());
  CHECK_THROWS_AS(extract_glossary(t, 0.0, 1), ArgumentError);
}

TEST_CASE("table and glossary persistence") {
  const auto t = train_model1(synth_parallel(SynthOptions{}), 5, true);
  std::istringstream in(t.save());
  const auto back = TranslationTable::load(in);
  CHECK(back == t);

  const auto g = extract_glossary(t, 0.5, 2);
  std::istringstream gin(g.save());
  const auto gback = Glossary::load(gin);
  REQUIRE(gback.size() == g.size());
  for (const auto& [src, e] : g.entries()) {
    CHECK(gback.find(src)->gloss == e.gloss);
    CHECK(std::abs(gback.find(src)->probability - e.probability) <= 5e-7);
  }
}

TEST_CASE("bad input") {
  CHECK_THROWS_AS(train_model1({}, 1, true), ArgumentError);
  CHECK_THROWS_AS(train_model1(toy(), 0, true), ArgumentError);
  const std::vector<ParallelPair> empty_side = {{{"opp"}, {}}};
  CHECK_THROWS_AS(train_model1(empty_side, 1, true), ArgumentError);
  std::istringstream in("Opp Run\tEnemy flee\nno tab here\n");
  CHECK_THROWS_AS(read_parallel_corpus(in), ParseError);
  std::istringstream ok("Opp Run\tEnemy flee\n");
  const auto p = read_parallel_corpus(ok);
  CHECK(p[0].source == std::vector<std::string>{"opp", "run"});
  CHECK(p[0].gloss == std::vector<std::string>{"enemy", "flee"});
}
