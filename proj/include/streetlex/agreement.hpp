// Two-annotator agreement: Cohen's kappa, agreement matrices, disagreement
// listings.
#pragma once

#include <string>
#include <vector>

#include "streetlex/corpus.hpp"

namespace streetlex {

struct LabeledItem {
  std::string id;
  std::string label_a;
  std::string label_b;
  friend bool operator==(const LabeledItem&, const LabeledItem&) = default;
};

/// Items labelled by two annotators over a closed label domain. The domain
/// order fixes the row/column order of agreement matrices.
class AnnotationPair {
 public:
  /// Throws ArgumentError on duplicate item ids, duplicate domain labels, or
  /// labels outside the domain.
  AnnotationPair(std::vector<LabeledItem> items,
                 std::vector<std::string> label_domain);

  const std::vector<LabeledItem>& items() const { return items_; }
  const std::vector<std::string>& label_domain() const { return domain_; }
  std::size_t size() const { return items_.size(); }

  /// Index of a label in the domain.
  std::size_t label_index(const std::string& label) const;

  /// Same items with the annotators' roles exchanged.
  AnnotationPair swapped() const;

 private:
  std::vector<LabeledItem> items_;
  std::vector<std::string> domain_;
};

struct KappaResult {
  double kappa = 0;
  double observed_agreement = 0;
  double expected_agreement = 0;
  std::size_t n_items = 0;
};

/// Throws ArgumentError on an empty pair and Error("kappa undefined ...")
/// when the chance agreement is 1.
KappaResult cohen_kappa(const AnnotationPair& pair);

/// counts[k][l] = items with label_a = domain[k] and label_b = domain[l].
std::vector<std::vector<std::size_t>> agreement_matrix(
    const AnnotationPair& pair);

/// Items whose two labels differ, in input order.
std::vector<LabeledItem> disagreements(const AnnotationPair& pair);

enum class LabelLevel { collapsed, fine };

/// Pairs annotator `a`'s and annotator `b`'s labels on the tweets both of
/// them annotated, in corpus tweet order. Collapsed labels use the
/// aggression/grief/other domain; fine labels use the codebook's codes.
AnnotationPair pair_annotators(const LabeledCorpus& corpus,
                               const std::string& annotator_a,
                               const std::string& annotator_b,
                               LabelLevel level);

/// Pairs two annotation sets (one label per tweet in each) on the tweet ids
/// present in both, in set_a order. Annotator ids are ignored.
AnnotationPair pair_annotation_sets(const Codebook& codebook,
                                    const std::vector<Annotation>& set_a,
                                    const std::vector<Annotation>& set_b,
                                    LabelLevel level);

}  // namespace streetlex
