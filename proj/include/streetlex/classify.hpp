// Sparse tweet features and a one-vs-rest linear max-margin classifier for
// aggression / grief / other.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "streetlex/affect.hpp"
#include "streetlex/corpus.hpp"
#include "streetlex/tokenize.hpp"

namespace streetlex {

/// Sparse feature map; zero values are never stored.
class FeatureVector {
 public:
  FeatureVector() = default;

  /// Adds `value` to the feature, dropping it if the sum is zero.
  void add(const std::string& name, double value);
  void set(const std::string& name, double value);
  double get(std::string_view name) const;

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  const std::map<std::string, double, std::less<>>& values() const {
    return values_;
  }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::map<std::string, double, std::less<>> values_;
};

/// Feature families. Each one can be switched off for ablations.
struct FeatureConfig {
  bool lexical = true;           ///< uni:w, bi:w1_w2
  bool pos = true;               ///< pos:T, posbi:T1_T2
  bool emoticon_hashtag = true;  ///< emo:, hash:, *_present, kind:
  bool affect = true;            ///< affect:<dim>_{mean,min,max}, coverage
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// Throws ArgumentError when tags and tokens differ in length.
FeatureVector extract_features(std::span<const Token> tokens,
                               std::span<const std::string> tags,
                               const AffectVector& affect,
                               const FeatureConfig& config);

struct Example {
  std::string id;
  FeatureVector features;
  Category label = Category::other;
};

struct ClassifierOptions {
  double lambda = 1e-3;
  int epochs = 50;
  std::uint64_t seed = 1;
  /// Loss multiplier per gold class, in Category order.
  std::array<double, 3> class_weights = {1.0, 1.0, 1.0};
  friend bool operator==(const ClassifierOptions&,
                         const ClassifierOptions&) = default;
};

using ClassScores = std::array<double, 3>;

struct Prediction {
  Category label = Category::aggression;
  ClassScores scores{};
};

class ClassifierModel {
 public:
  struct ClassWeights {
    std::unordered_map<std::string, double> weights;
    double bias = 0;
    friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
  };

  ClassifierModel() = default;
  ClassifierModel(std::array<ClassWeights, 3> classes,
                  ClassifierOptions options, FeatureConfig features);

  ClassScores scores(const FeatureVector& fv) const;
  /// Argmax score; exact ties resolve aggression > grief > other.
  Prediction predict(const FeatureVector& fv) const;

  const ClassWeights& weights(Category c) const {
    return classes_[static_cast<std::size_t>(c)];
  }
  const ClassifierOptions& options() const { return options_; }
  const FeatureConfig& feature_config() const { return features_; }

  /// `streetlex-clf v1` text form; weights round-trip exactly.
  std::string save() const;
  static ClassifierModel load(std::istream& in);

  friend bool operator==(const ClassifierModel&,
                         const ClassifierModel&) = default;

 private:
  std::array<ClassWeights, 3> classes_;
  ClassifierOptions options_;
  FeatureConfig features_;
};

/// One binary hinge-loss learner per class, trained by stochastic
/// subgradient descent with step 1/(lambda * t) over a seeded per-epoch
/// shuffle. The bias is the weight of an implicit constant feature.
/// Throws ArgumentError on empty data, lambda <= 0, epochs < 1 or a
/// non-positive class weight.
ClassifierModel train_classifier(std::span<const Example> data,
                                 const ClassifierOptions& options,
                                 const FeatureConfig& features = {});

inline Prediction predict(const ClassifierModel& model,
                          const FeatureVector& fv) {
  return model.predict(fv);
}

/// Reference and OpenMP variants; identical output, input order preserved.
std::vector<Prediction> predict_batch_serial(const ClassifierModel& model,
                                             std::span<const Example> data);
std::vector<Prediction> predict_batch(const ClassifierModel& model,
                                      std::span<const Example> data);

using ConfusionMatrix = std::array<std::array<std::size_t, 3>, 3>;

struct ClassMetrics {
  double precision = 0, recall = 0, f1 = 0;
  std::size_t support = 0;
};

struct EvalReport {
  ConfusionMatrix confusion{};  ///< [gold][predicted]
  std::array<ClassMetrics, 3> per_class{};
  double macro_f1 = 0;
  double accuracy = 0;
  std::size_t n = 0;
};

/// Metrics derived from a confusion matrix. Throws ArgumentError when it is
/// all zero.
EvalReport report_from_confusion(const ConfusionMatrix& confusion);

/// Throws ArgumentError on empty gold data.
EvalReport evaluate(const ClassifierModel& model,
                    std::span<const Example> gold);

/// Most frequent gold class predicted for every item.
EvalReport majority_baseline(std::span<const Example> train,
                             std::span<const Example> gold);

struct CrossValidation {
  std::vector<std::size_t> fold_of;  ///< fold index per input item
  std::vector<double> fold_macro_f1;
  double mean_macro_f1 = 0;
  double stddev_macro_f1 = 0;  ///< sample standard deviation
};

/// Item at position p of a seeded permutation goes to fold p mod k.
std::vector<std::size_t> assign_folds(std::size_t n, std::size_t k,
                                      std::uint64_t seed);

/// Throws ArgumentError when k < 2 or data has fewer than k items.
CrossValidation cross_validate(std::span<const Example> data, std::size_t k,
                               const ClassifierOptions& options,
                               std::uint64_t fold_seed,
                               const FeatureConfig& features = {});

/// Seeded train/test split; `test_ratio` of the items (rounded) are held out.
struct ExampleSplit {
  std::vector<Example> train;
  std::vector<Example> test;
};
ExampleSplit split_examples(std::span<const Example> data, double test_ratio,
                            std::uint64_t seed);

/// Feature JSONL: {"id", "label" (string or null), "features": {name: value}}.
std::string write_examples(std::span<const Example> data,
                           const std::vector<bool>* labeled = nullptr);
/// Unlabeled records are kept with `labeled[i] = false` when given;
/// otherwise they are an error.
std::vector<Example> read_examples(std::istream& in,
                                   std::vector<bool>* labeled = nullptr);

/// Human-readable table and the JSON object
/// {confusion, per_class, macro_f1, accuracy, n}.
std::string format_report_text(const EvalReport& r);
std::string format_report_json(const EvalReport& r, int indent = 2);

}  // namespace streetlex
