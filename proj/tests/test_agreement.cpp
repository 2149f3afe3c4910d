#include <doctest.h>

#include <cmath>

#include "streetlex/agreement.hpp"
#include "support.hpp"

using namespace streetlex;

namespace {

const std::vector<std::string> kLabels = {"aggression", "grief", "other"};

AnnotationPair pair_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<LabeledItem> items;
  for (std::size_t i = 0; i < a.size(); ++i) {
    items.push_back({"i" + std::to_string(i), kLabels[a[i]], kLabels[b[i]]});
  }
  return AnnotationPair(items, kLabels);
}

// A = agg x5, grief x5; B = agg x4, other, grief x4, other.
AnnotationPair ten_items() {
  return pair_of({0, 0, 0, 0, 0, 1, 1, 1, 1, 1},
                   {0, 0, 0, 0, 2, 1, 1, 1, 1, 2});
}

}  // namespace

TEST_CASE("hand-computed ten-item pair") {
  const auto k = cohen_kappa(ten_items());
  CHECK(std::abs(k.observed_agreement - 0.8) < 1e-12);
  CHECK(std::abs(k.expected_agreement - 0.4) < 1e-12);
  CHECK(std::abs(k.kappa - 2.0 / 3.0) < 1e-9);
  CHECK(k.n_items == 10);

  const auto m = agreement_matrix(ten_items());
  CHECK(m[0][0] + m[1][1] + m[2][2] == 8);
  CHECK(m[0][2] == 1);
  CHECK(m[1][2] == 1);
  const auto d = disagreements(ten_items());
  REQUIRE(d.size() == 2);
  CHECK(d[0].id == "i4");
  CHECK(d[1].id == "i9");
}

TEST_CASE("perfect agreement and degenerate marginals") {
  CHECK(cohen_kappa(pair_of({0, 1, 2, 0}, {0, 1, 2, 0})).kappa == doctest::Approx(1.0));
  CHECK(disagreements(pair_of({0, 1}, {0, 1})).empty());
  try {
    cohen_kappa(pair_of({2, 2, 2}, {2, 2, 2}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("kappa undefined") != std::string::npos);
  }
  CHECK_THROWS_AS(cohen_kappa(AnnotationPair({}, kLabels)), ArgumentError);
}

TEST_CASE("agreement matrix edge cases") {
  const auto empty = agreement_matrix(AnnotationPair({}, kLabels));
  for (const auto& row : empty) {
    for (auto v : row) CHECK(v == 0);
  }
  const auto one = agreement_matrix(pair_of({0}, {0}));
  CHECK(one[0][0] == 1);
  CHECK(disagreements(pair_of({0, 1, 2}, {1, 2, 0})).size() == 3);
}

TEST_CASE("AnnotationPair rejects invalid items") {
  CHECK_THROWS_AS(AnnotationPair({{"x", "aggression", "rage"}}, kLabels), ArgumentError);
  CHECK_THROWS_AS(AnnotationPair({{"x", "grief", "grief"}, {"x", "grief", "other"}},
                                 kLabels),
                  ArgumentError);
}

TEST_CASE("kappa matches the brute-force formula, is symmetric and bounded") {
  Rng rng(11);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<int> a(n), b(n);
    for (auto& x : a) x = int(rng.below(3));
    for (auto& x : b) x = int(rng.below(3));
    const auto pair = pair_of(a, b);
    if (support::degenerate(a, b)) {
      CHECK_THROWS_AS(cohen_kappa(pair), Error);
      continue;
    }
    const auto k = cohen_kappa(pair);
    CHECK(std::abs(k.kappa - support::brute_kappa(a, b, 3)) < 1e-12);
    CHECK(std::abs(k.kappa - cohen_kappa(pair.swapped()).kappa) < 1e-12);
    CHECK(k.kappa >= -1.0);
    CHECK(k.kappa <= 1.0);
    const auto m = agreement_matrix(pair);
    CHECK(double(m[0][0] + m[1][1] + m[2][2]) / double(n) == k.observed_agreement);
    ++checked;
  }
  CHECK(checked > 400);
}

TEST_CASE("pairing annotators in a corpus") {
  LabeledCorpus c;
  c.codebook = default_codebook();
  const auto t = parse_timestamp("2014-03-29T00:00:00Z");
  for (const char* id : {"t1", "t2", "t3"}) c.tweets.push_back({id, "a", t, "x", {}});
  c.annotations = {{"t1", "a1", "threats", {}}, {"t1", "a2", "insults", {}},
                   {"t2", "a1", "death", {}},   {"t2", "a2", "women", {}},
                   {"t3", "a1", "death", {}}};
  const auto collapsed = pair_annotators(c, "a1", "a2", LabelLevel::collapsed);
  REQUIRE(collapsed.size() == 2);
  CHECK(collapsed.items()[0].label_a == "aggression");
  CHECK(collapsed.items()[0].label_b == "aggression");
  const auto fine = pair_annotators(c, "a1", "a2", LabelLevel::fine);
  CHECK(fine.items()[0].label_a == "threats");
  CHECK(fine.label_domain().size() == c.codebook.size());

  const auto sets = pair_annotation_sets(
      c.codebook, {{"t2", "a1", "death", {}}, {"t1", "a1", "threats", {}}},
      {{"t1", "b", "insults", {}}}, LabelLevel::collapsed);
  REQUIRE(sets.size() == 1);
  CHECK(sets.items()[0].id == "t1");
}
