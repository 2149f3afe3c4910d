// Averaged-perceptron part-of-speech tagger over the 25-tag CMU tweet tagset,
// with shared/per-domain feature augmentation for adapting from general
// tweets (source) to the gang corpus (target).
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "streetlex/tokenize.hpp"

namespace streetlex {

enum class Domain { source, target };

std::string_view to_string(Domain d);
Domain domain_from_string(std::string_view name);

/// The CMU tweet tagset in its fixed order. Tie-breaks prefer earlier tags.
class TagSet {
 public:
  static constexpr std::size_t kSize = 25;
  static const std::array<std::string_view, kSize>& tags();
  /// Index of `tag`, or kSize when it is not a tagset symbol.
  static std::size_t index(std::string_view tag);
  static bool contains(std::string_view tag) { return index(tag) < kSize; }
};

struct TaggedSentence {
  std::vector<Token> tokens;
  std::vector<std::string> tags;
  Domain domain = Domain::target;
};

/// Throws ArgumentError when tags and tokens differ in length or a tag is
/// outside the tagset.
void validate(const TaggedSentence& s);

/// Each feature f becomes "shared|f" followed by "dom=<domain>|f".
std::vector<std::string> augment(std::span<const std::string> features,
                                 Domain domain);

/// Un-augmented feature templates for token `i`, given the tag predicted for
/// the previous token (empty at sentence start).
std::vector<std::string> tagger_features(std::span<const Token> tokens,
                                         std::size_t i,
                                         std::string_view prev_tag);

struct TaggerOptions {
  int epochs = 10;
  std::uint64_t seed = 1;
  /// Off trains on the pooled, un-augmented features.
  bool domain_augmentation = true;
  friend bool operator==(const TaggerOptions&, const TaggerOptions&) = default;
};

class TaggerModel {
 public:
  using Weights = std::array<double, TagSet::kSize>;

  TaggerModel() = default;
  TaggerModel(std::unordered_map<std::string, Weights> weights,
              TaggerOptions options);

  /// Greedy left-to-right decoding.
  std::vector<std::string> tag(std::span<const Token> tokens,
                               Domain domain) const;

  const TaggerOptions& options() const { return options_; }
  const std::unordered_map<std::string, Weights>& weights() const {
    return weights_;
  }
  std::size_t feature_count() const { return weights_.size(); }

  /// `streetlex-tagger v1` text form.
  std::string save() const;
  static TaggerModel load(std::istream& in);

  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;

 private:
  std::unordered_map<std::string, Weights> weights_;
  TaggerOptions options_;
};

/// Throws ArgumentError on an empty combined corpus or epochs < 1.
TaggerModel train_tagger(std::span<const TaggedSentence> source_corpus,
                         std::span<const TaggedSentence> target_corpus,
                         const TaggerOptions& options);

inline std::vector<std::string> tag(const TaggerModel& model,
                                    std::span<const Token> tokens,
                                    Domain domain) {
  return model.tag(tokens, domain);
}

/// Token-level accuracy; each sentence is decoded in its own domain.
double tagger_accuracy(const TaggerModel& model,
                       std::span<const TaggedSentence> gold);

/// Reference and OpenMP variants; identical output.
std::vector<std::vector<std::string>> tag_batch_serial(
    const TaggerModel& model, std::span<const std::vector<Token>> sentences,
    Domain domain);
std::vector<std::vector<std::string>> tag_batch(
    const TaggerModel& model, std::span<const std::vector<Token>> sentences,
    Domain domain);

/// Tagged-corpus TSV: `token<TAB>tag` lines, blank line between sentences,
/// optional `# domain: source|target` line opening a block. Blocks without a
/// domain line take `default_domain`.
std::vector<TaggedSentence> read_tagged_corpus(std::istream& in,
                                               Domain default_domain);
std::string write_tagged_corpus(std::span<const TaggedSentence> corpus);

/// Deterministic train/held-out split; the first `ratio` share of a seeded
/// permutation goes to training.
struct TaggedSplit {
  std::vector<TaggedSentence> train;
  std::vector<TaggedSentence> held_out;
};
TaggedSplit split_tagged(std::span<const TaggedSentence> corpus, double ratio,
                         std::uint64_t seed);

}  // namespace streetlex
