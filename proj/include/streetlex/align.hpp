// IBM Model 1 alignment from tweet tokens to Standard American English gloss
// tokens, t(gloss | tweet-token), and glossary extraction from the table.
#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streetlex {

/// Reserved source token present in every pair when NULL alignment is on.
inline constexpr std::string_view kNullToken = "<NULL>";

struct ParallelPair {
  std::vector<std::string> source;  ///< lowercased tweet tokens
  std::vector<std::string> gloss;   ///< standard-English tokens
};

/// Throws ArgumentError when either side is empty.
void validate(const ParallelPair& pair);

class TranslationTable {
 public:
  using Distribution = std::map<std::string, double, std::less<>>;

  /// t(gloss | source); 0 for pairs never co-observed.
  double prob(std::string_view source, std::string_view gloss) const;

  const std::map<std::string, Distribution, std::less<>>& probs() const {
    return probs_;
  }
  /// Corpus frequency of each source token (NULL excluded).
  const std::map<std::string, std::size_t, std::less<>>& source_counts() const {
    return source_counts_;
  }
  const std::map<std::string, std::size_t, std::less<>>& gloss_counts() const {
    return gloss_counts_;
  }
  int iterations_run() const { return iterations_; }
  bool uses_null() const { return use_null_; }

  /// Corpus log-likelihood before EM (index 0) and after each iteration.
  const std::vector<double>& log_likelihoods() const { return log_likelihood_; }

  /// `streetlex-ttable v1` text form. Probabilities round-trip exactly.
  std::string save() const;
  static TranslationTable load(std::istream& in);

  friend bool operator==(const TranslationTable&,
                         const TranslationTable&) = default;

 private:
  friend class Model1Trainer;
  std::map<std::string, Distribution, std::less<>> probs_;
  std::map<std::string, std::size_t, std::less<>> source_counts_;
  std::map<std::string, std::size_t, std::less<>> gloss_counts_;
  std::vector<double> log_likelihood_;
  int iterations_ = 0;
  bool use_null_ = false;
};

enum class EStep { serial, parallel };

/// Called after each EM iteration (1-based) with the table so far.
using Model1Observer = std::function<void(int, const TranslationTable&)>;

/// EM training from a uniform start over each source token's co-occurring
/// gloss vocabulary. Both E-step variants give bit-identical tables; the
/// parallel one computes per-pair posteriors concurrently and then adds them
/// in pair order. Throws ArgumentError on an empty corpus or iterations < 1.
TranslationTable train_model1(std::span<const ParallelPair> pairs,
                              int iterations, bool use_null,
                              EStep estep = EStep::parallel,
                              const Model1Observer& observer = {});

/// Per gloss position: the linked source index, or nullopt for NULL.
using Alignment = std::vector<std::optional<std::size_t>>;

/// Argmax source per gloss token; ties go to the lowest source index, and
/// NULL wins only when strictly better than every source token.
Alignment viterbi_align(const TranslationTable& table, const ParallelPair& pair);

struct GlossEntry {
  std::string gloss;
  double probability = 0;
  friend bool operator==(const GlossEntry&, const GlossEntry&) = default;
};

class Glossary {
 public:
  Glossary() = default;
  explicit Glossary(std::map<std::string, GlossEntry, std::less<>> entries)
      : entries_(std::move(entries)) {}

  const GlossEntry* find(std::string_view source) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, GlossEntry, std::less<>>& entries() const {
    return entries_;
  }

  /// TSV `source<TAB>gloss<TAB>probability`, probability to 6 decimals.
  std::string save() const;
  static Glossary load(std::istream& in);

  friend bool operator==(const Glossary&, const Glossary&) = default;

 private:
  std::map<std::string, GlossEntry, std::less<>> entries_;
};

/// Best gloss per source token (lexicographically smallest on ties), kept
/// when its probability is >= threshold, the source token occurred at least
/// min_count times, and the gloss differs from the source token.
Glossary extract_glossary(const TranslationTable& table, double threshold,
                          std::size_t min_count);

/// Parallel corpus TSV: `source tokens<TAB>gloss tokens`, space separated.
/// Both sides are case-folded on read.
std::vector<ParallelPair> read_parallel_corpus(std::istream& in);

}  // namespace streetlex
