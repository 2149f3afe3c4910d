// Corpus data model: tweets, codebooks, annotations, ingestion and
// serialization, time-window filtering.
#pragma once

#include <array>
#include <chrono>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streetlex/util.hpp"

namespace streetlex {

/// Collapsed label. Declaration order is the classifier's tie-break priority.
enum class Category { aggression, grief, other };

inline constexpr std::array<Category, 3> kCategories = {
    Category::aggression, Category::grief, Category::other};

std::string_view to_string(Category c);
Category category_from_string(std::string_view name);

/// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// ISO-8601 with a mandatory zone designator (`Z` or `+HH:MM`). Naive
/// timestamps are rejected.
Timestamp parse_timestamp(std::string_view text);

/// Canonical UTC form, e.g. `2014-03-29T18:04:05Z` or `...05.250Z`.
std::string format_timestamp(Timestamp t);

struct Tweet {
  std::string id;
  std::string author;
  Timestamp created_at;
  std::string text;
  std::optional<std::string> reply_to;
  friend bool operator==(const Tweet&, const Tweet&) = default;
};

class Codebook {
 public:
  Codebook() = default;

  /// Adds or replaces a fine code.
  void add(std::string fine_code, Category category);

  bool contains(std::string_view fine_code) const;
  /// Throws ArgumentError naming the code when unknown.
  Category collapse(std::string_view fine_code) const;

  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Category, std::less<>>& entries() const {
    return map_;
  }

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  std::map<std::string, Category, std::less<>> map_;
};

/// Codebook TSV: `fine_code<TAB>category`, `#` comments and blank lines
/// ignored.
Codebook load_codebook(std::istream& in);
std::string write_codebook(const Codebook& cb);

/// Built-in codebook with the common fine codes; load a codebook file for
/// any others.
Codebook default_codebook();

/// Free-text context for the six qualitative lenses used while coding.
struct DuvaaContext {
  std::string precipitating_event;
  std::string author_profile;
  std::string content;
  std::string clues;
  std::string tone;
  std::string trigger_event;
  friend bool operator==(const DuvaaContext&, const DuvaaContext&) = default;
};

struct Annotation {
  std::string tweet_id;
  std::string annotator_id;
  std::string fine_code;
  std::optional<DuvaaContext> duvaa;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct LabeledCorpus {
  std::vector<Tweet> tweets;
  std::vector<Annotation> annotations;
  Codebook codebook;

  const Tweet* find(std::string_view id) const;
  friend bool operator==(const LabeledCorpus&, const LabeledCorpus&) = default;
};

enum class CorpusFormat { jsonl, tsv };
CorpusFormat corpus_format_from_string(std::string_view name);

/// Reads tweets and annotations.
///
/// JSONL lines are dispatched on their keys: objects with `tweet_id` are
/// annotations, objects with `id` are tweets, so both may share one stream.
/// TSV streams start with a header row naming the columns (`id ...` for
/// tweets, `tweet_id ...` for annotations); fields use `\t`, `\n`, `\\`
/// escapes. Errors carry the 1-based line number of the offending record.
LabeledCorpus ingest_corpus(std::istream& source, CorpusFormat format,
                            const Codebook& codebook,
                            std::istream* annotations = nullptr);

/// Annotation records alone, with the same checks except that tweet ids are
/// not resolved.
std::vector<Annotation> read_annotations(std::istream& in, CorpusFormat format,
                                         const Codebook& codebook);

/// Serialized tweets followed by annotations, in corpus order.
std::string write_corpus(const LabeledCorpus& corpus, CorpusFormat format);
std::string write_annotations(const std::vector<Annotation>& annotations,
                              CorpusFormat format);

/// Tweets with start <= created_at < end, with their annotations.
LabeledCorpus window_filter(const LabeledCorpus& corpus, Timestamp start,
                            Timestamp end);

/// Checks every LabeledCorpus invariant; throws Error describing the first
/// violation.
void validate(const LabeledCorpus& corpus);

}  // namespace streetlex
