// Dictionary-of-Affect style lexicon (pleasantness, activation, imagery) and
// per-tweet affect aggregation with glossary fallback.
#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streetlex/align.hpp"
#include "streetlex/tokenize.hpp"

namespace streetlex {

enum class AffectDim { pleasantness, activation, imagery };

inline constexpr std::array<AffectDim, 3> kAffectDims = {
    AffectDim::pleasantness, AffectDim::activation, AffectDim::imagery};

std::string_view to_string(AffectDim d);

/// Scores indexed by AffectDim.
using AffectTriple = std::array<double, 3>;

inline constexpr double kAffectMin = 1.0;
inline constexpr double kAffectMax = 3.0;

class AffectLexicon {
 public:
  AffectLexicon() = default;

  /// Throws ArgumentError when a score lies outside [1, 3].
  void add(std::string word, const AffectTriple& scores);

  /// Exact lookup on an already lowercased word.
  const AffectTriple* find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, AffectTriple, std::less<>> entries_;
};

/// Lexicon TSV `word<TAB>pleasantness<TAB>activation<TAB>imagery`; `#`
/// comments and blank lines are skipped. A repeated word replaces the
/// earlier entry and appends a message to `warnings` when given.
AffectLexicon load_lexicon(std::istream& in,
                           std::vector<std::string>* warnings = nullptr);

/// Word, emoticon and emoji tokens only.
bool affect_eligible(const Token& token);

/// Direct hit on the lowercased surface first, then the glossary's gloss.
std::optional<AffectTriple> lookup(const Token& token,
                                   const AffectLexicon& lexicon,
                                   const Glossary& glossary);

struct DimStats {
  double mean = 0, min = 0, max = 0;
};

struct AffectVector {
  std::size_t matched = 0;
  std::size_t eligible = 0;  ///< word-like tokens considered
  double coverage = 0;       ///< matched / eligible, 0 when eligible == 0
  /// Present only when matched > 0.
  std::optional<std::array<DimStats, 3>> stats;
};

AffectVector affect_features(std::span<const Token> tokens,
                             const AffectLexicon& lexicon,
                             const Glossary& glossary);

}  // namespace streetlex
