// Seeded synthetic fixtures: a planted-vocabulary tweet corpus, a slang
// parallel corpus, a two-domain tagged corpus and a small affect lexicon.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "streetlex/align.hpp"
#include "streetlex/corpus.hpp"
#include "streetlex/postag.hpp"

namespace streetlex {

struct SynthOptions {
  std::size_t tweets_per_class = 50;
  /// Share of tweets that carry one planted word from another class.
  double noise = 0.15;
  /// Probability that the second annotator picks the same category.
  double agreement = 0.85;
  std::size_t parallel_pairs = 300;
  std::size_t tagged_per_domain = 150;
  std::uint64_t seed = 7;
};

/// One slang vocabulary item. `group` is the category the word is planted
/// in, or empty for filler words shared by all classes.
struct SynthWord {
  const char* surface;
  const char* tag;
  const char* gloss;
  const char* group;
};

std::span<const SynthWord> synth_vocabulary();

/// Tweets over a two-week window from 2014-03-28 with two annotators
/// ("a1", "a2"); a1's labels are the planted classes.
LabeledCorpus synth_corpus(const SynthOptions& options);

/// Slang word sequences paired with their word-by-word glosses.
std::vector<ParallelPair> synth_parallel(const SynthOptions& options);

/// Edited-text sentences (source) and tweet-vocabulary sentences (target).
/// "blow" is a verb in the source domain and a noun in the target domain.
std::vector<TaggedSentence> synth_tagged(const SynthOptions& options);

/// Lexicon TSV covering the glosses, a few emoticons and "sad"/"happy".
std::string synth_lexicon_text();

/// Writes tweets.jsonl, annotations.jsonl, codebook.tsv, parallel.tsv,
/// tagged.tsv, lexicon.tsv and pipeline.ini into `dir`.
void write_fixtures(const std::filesystem::path& dir,
                    const SynthOptions& options);

}  // namespace streetlex
