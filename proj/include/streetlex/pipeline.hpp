// Pipeline configuration and the end-to-end run used by the CLI.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "streetlex/affect.hpp"
#include "streetlex/align.hpp"
#include "streetlex/classify.hpp"
#include "streetlex/corpus.hpp"
#include "streetlex/postag.hpp"
#include "streetlex/util.hpp"

namespace streetlex {

/// Bad configuration file or value; the message names the file, and the
/// line when the parser reports one.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct AlignOptions {
  int iterations = 10;
  double tau = 0.5;
  std::size_t min_count = 2;
  bool use_null = true;
};

struct PipelineConfig {
  struct Paths {
    std::filesystem::path tweets;
    std::filesystem::path annotations;  ///< optional; may be empty
    std::filesystem::path codebook;
    std::filesystem::path tagged;
    std::filesystem::path parallel;
    std::filesystem::path lexicon;
    std::filesystem::path out_dir = "out";
  } paths;

  CorpusFormat corpus_format = CorpusFormat::jsonl;
  /// Annotator whose labels are gold; empty takes each tweet's first
  /// annotation in file order.
  std::string gold_annotator;

  TaggerOptions tagger;
  double tagger_split = 0.8;

  AlignOptions align;

  ClassifierOptions classifier;
  FeatureConfig features;
  bool use_glossary = true;

  std::size_t eval_folds = 5;  ///< 0 skips cross-validation
  std::uint64_t eval_seed = 1;
  double test_ratio = 0.3;
};

/// Sets one `section.key` from text. Throws ConfigError on unknown keys and
/// bad values.
void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value);

/// INI-style file: `[section]` headers, `key = value` lines, `#`/`;`
/// comments. Relative paths resolve against the file's directory.
PipelineConfig load_config(const std::filesystem::path& file);

/// Throws ConfigError when a value is outside the range its stage accepts.
void validate(const PipelineConfig& config);

/// The effective configuration, in the same INI form load_config reads.
std::string describe(const PipelineConfig& config);

/// Trained resources that turn raw tweet text into classifier features.
struct Featurizer {
  TaggerModel tagger;
  AffectLexicon lexicon;
  Glossary glossary;
  FeatureConfig features;
  bool use_glossary = true;

  FeatureVector operator()(std::string_view text) const;
};

/// Gold label per tweet: `gold_annotator`'s code, or the first annotation in
/// file order when empty. Unlabelled tweets are absent from the map.
std::map<std::string, Category> gold_labels(const LabeledCorpus& corpus,
                                            const std::string& gold_annotator);

/// Examples for every tweet; `labeled[i]` says whether tweet i has a gold
/// label (unlabelled examples carry Category::other as a placeholder).
std::vector<Example> featurize_corpus(const LabeledCorpus& corpus,
                                      const Featurizer& featurizer,
                                      const std::string& gold_annotator,
                                      std::vector<bool>* labeled = nullptr);

LabeledCorpus load_corpus(const PipelineConfig& config);
AffectLexicon load_lexicon_file(const std::filesystem::path& path);

struct PipelineResult {
  std::filesystem::path table_path, glossary_path, tagger_path, features_path,
      classifier_path, report_json_path, report_text_path;
  double tagger_accuracy = 0;
  std::size_t glossary_size = 0;
  EvalReport held_out;
  EvalReport baseline;
  std::optional<CrossValidation> cross_validation;
};

/// align-train -> glossary -> tag-train -> featurize -> train -> evaluate,
/// writing every artifact atomically under config.paths.out_dir.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace streetlex
