#include "streetlex/agreement.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "streetlex/json_io.hpp"
#include "streetlex/util.hpp"

namespace streetlex {

AnnotationPair::AnnotationPair(std::vector<LabeledItem> items,
                               std::vector<std::string> label_domain)
    : items_(std::move(items)), domain_(std::move(label_domain)) {
  std::unordered_set<std::string> labels;
  for (const auto& l : domain_) {
    if (!labels.insert(l).second) {
      throw ArgumentError("duplicate label '" + l + "' in label domain");
    }
  }
  std::unordered_set<std::string> ids;
  for (const auto& it : items_) {
    if (!ids.insert(it.id).second) {
      throw ArgumentError("duplicate item id '" + it.id + "'");
    }
    for (const auto* l : {&it.label_a, &it.label_b}) {
      if (!labels.count(*l)) {
        throw ArgumentError("item '" + it.id + "' has label '" + *l +
                            "' outside the label domain");
      }
    }
  }
}

std::size_t AnnotationPair::label_index(const std::string& label) const {
  auto it = std::find(domain_.begin(), domain_.end(), label);
  if (it == domain_.end()) {
    throw ArgumentError("label '" + label + "' outside the label domain");
  }
  return std::size_t(it - domain_.begin());
}

AnnotationPair AnnotationPair::swapped() const {
  std::vector<LabeledItem> items;
  items.reserve(items_.size());
  for (const auto& it : items_) items.push_back({it.id, it.label_b, it.label_a});
  return AnnotationPair(std::move(items), domain_);
}

KappaResult cohen_kappa(const AnnotationPair& pair) {
  const std::size_t n = pair.size();
  if (n == 0) throw ArgumentError("cohen_kappa needs at least one item");
  const auto matrix = agreement_matrix(pair);
  const std::size_t k = matrix.size();
  std::vector<std::size_t> row(k, 0), col(k, 0);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < k; ++i) {
    agree += matrix[i][i];
    for (std::size_t j = 0; j < k; ++j) {
      row[i] += matrix[i][j];
      col[j] += matrix[i][j];
    }
  }
  // Chance agreement in integer form: sum_k row_k * col_k over n^2.
  std::size_t chance = 0;
  for (std::size_t i = 0; i < k; ++i) chance += row[i] * col[i];
  if (chance == n * n) {
    throw Error("kappa undefined: expected agreement is 1 (both annotators "
                "used a single identical label)");
  }
  KappaResult r;
  r.n_items = n;
  const double nn = double(n);
  r.observed_agreement = double(agree) / nn;
  r.expected_agreement = double(chance) / (nn * nn);
  r.kappa = (r.observed_agreement - r.expected_agreement) /
            (1.0 - r.expected_agreement);
  return r;
}

std::vector<std::vector<std::size_t>> agreement_matrix(
    const AnnotationPair& pair) {
  const auto& domain = pair.label_domain();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < domain.size(); ++i) index[domain[i]] = i;
  std::vector<std::vector<std::size_t>> m(
      domain.size(), std::vector<std::size_t>(domain.size(), 0));
  for (const auto& it : pair.items()) {
    ++m[index.at(it.label_a)][index.at(it.label_b)];
  }
  return m;
}

std::vector<LabeledItem> disagreements(const AnnotationPair& pair) {
  std::vector<LabeledItem> out;
  for (const auto& it : pair.items()) {
    if (it.label_a != it.label_b) out.push_back(it);
  }
  return out;
}

namespace {

std::vector<std::string> domain_for(const Codebook& cb, LabelLevel level) {
  std::vector<std::string> domain;
  if (level == LabelLevel::collapsed) {
    for (Category c : kCategories) domain.emplace_back(to_string(c));
  } else {
    for (const auto& [code, cat] : cb.entries()) domain.push_back(code);
  }
  return domain;
}

std::string label_for(const Codebook& cb, const std::string& code,
                      LabelLevel level) {
  if (level == LabelLevel::fine) {
    if (!cb.contains(code)) {
      throw ArgumentError("unknown fine code '" + code + "'");
    }
    return code;
  }
  return std::string(to_string(cb.collapse(code)));
}

std::unordered_map<std::string, std::string> by_tweet(
    const Codebook& cb, const std::vector<Annotation>& set, LabelLevel level,
    const char* which) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& a : set) {
    if (!out.emplace(a.tweet_id, label_for(cb, a.fine_code, level)).second) {
      throw ArgumentError(std::string("annotation set ") + which +
                          " labels tweet '" + a.tweet_id + "' more than once");
    }
  }
  return out;
}

}  // namespace

AnnotationPair pair_annotators(const LabeledCorpus& corpus,
                               const std::string& annotator_a,
                               const std::string& annotator_b,
                               LabelLevel level) {
  std::vector<Annotation> set_a, set_b;
  for (const auto& a : corpus.annotations) {
    if (a.annotator_id == annotator_a) set_a.push_back(a);
    if (a.annotator_id == annotator_b) set_b.push_back(a);
  }
  const auto la = by_tweet(corpus.codebook, set_a, level, "a");
  const auto lb = by_tweet(corpus.codebook, set_b, level, "b");
  std::vector<LabeledItem> items;
  for (const auto& t : corpus.tweets) {
    auto ia = la.find(t.id);
    auto ib = lb.find(t.id);
    if (ia != la.end() && ib != lb.end()) {
      items.push_back({t.id, ia->second, ib->second});
    }
  }
  return AnnotationPair(std::move(items), domain_for(corpus.codebook, level));
}

AnnotationPair pair_annotation_sets(const Codebook& codebook,
                                    const std::vector<Annotation>& set_a,
                                    const std::vector<Annotation>& set_b,
                                    LabelLevel level) {
  const auto lb = by_tweet(codebook, set_b, level, "b");
  by_tweet(codebook, set_a, level, "a");
  std::vector<LabeledItem> items;
  for (const auto& a : set_a) {
    auto ib = lb.find(a.tweet_id);
    if (ib == lb.end()) continue;
    items.push_back(
        {a.tweet_id, label_for(codebook, a.fine_code, level), ib->second});
  }
  return AnnotationPair(std::move(items), domain_for(codebook, level));
}

nlohmann::json kappa_to_json(const KappaResult& k, const AnnotationPair& pair) {
  return nlohmann::json{{"kappa", k.kappa},
                        {"observed", k.observed_agreement},
                        {"expected", k.expected_agreement},
                        {"n", k.n_items},
                        {"labels", pair.label_domain()},
                        {"matrix", agreement_matrix(pair)}};
}

}  // namespace streetlex
