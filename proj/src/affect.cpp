#include "streetlex/affect.hpp"

#include <algorithm>
#include <istream>

#include "streetlex/util.hpp"

namespace streetlex {

std::string_view to_string(AffectDim d) {
  switch (d) {
    case AffectDim::pleasantness: return "pleasantness";
    case AffectDim::activation: return "activation";
    case AffectDim::imagery: return "imagery";
  }
  return "?";
}

void AffectLexicon::add(std::string word, const AffectTriple& scores) {
  for (std::size_t d = 0; d < scores.size(); ++d) {
    if (!(scores[d] >= kAffectMin && scores[d] <= kAffectMax)) {
      throw ArgumentError("affect score " + format_double(scores[d]) +
                          " for '" + word + "' (" +
                          std::string(to_string(kAffectDims[d])) +
                          ") outside [1, 3]");
    }
  }
  entries_[std::move(word)] = scores;
}

const AffectTriple* AffectLexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

AffectLexicon load_lexicon(std::istream& in,
                           std::vector<std::string>* warnings) {
  AffectLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 4 || trim(cols[0]).empty()) {
      throw ParseError(
          "expected word<TAB>pleasantness<TAB>activation<TAB>imagery", lineno);
    }
    const std::string word = ascii_lower(trim(cols[0]));
    AffectTriple scores;
    try {
      for (std::size_t d = 0; d < 3; ++d) {
        scores[d] = parse_double(cols[d + 1], to_string(kAffectDims[d]));
      }
      if (warnings && lex.find(word)) {
        warnings->push_back("line " + std::to_string(lineno) +
                            ": duplicate entry '" + word +
                            "' replaces the earlier one");
      }
      lex.add(word, scores);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return lex;
}

bool affect_eligible(const Token& token) {
  return token.kind == TokenKind::word || token.kind == TokenKind::emoticon ||
         token.kind == TokenKind::emoji;
}

std::optional<AffectTriple> lookup(const Token& token,
                                   const AffectLexicon& lexicon,
                                   const Glossary& glossary) {
  if (!affect_eligible(token)) return std::nullopt;
  const std::string key = ascii_lower(token.surface);
  if (const auto* hit = lexicon.find(key)) return *hit;
  if (const auto* entry = glossary.find(key)) {
    if (const auto* hit = lexicon.find(entry->gloss)) return *hit;
  }
  return std::nullopt;
}

AffectVector affect_features(std::span<const Token> tokens,
                             const AffectLexicon& lexicon,
                             const Glossary& glossary) {
  AffectVector v;
  std::array<std::vector<double>, 3> values;
  for (const auto& tok : tokens) {
    if (!affect_eligible(tok)) continue;
    ++v.eligible;
    auto hit = lookup(tok, lexicon, glossary);
    if (!hit) continue;
    for (std::size_t d = 0; d < 3; ++d) values[d].push_back((*hit)[d]);
    ++v.matched;
  }
  if (v.eligible > 0) v.coverage = double(v.matched) / double(v.eligible);
  if (v.matched == 0) return v;

  std::array<DimStats, 3> stats{};
  for (std::size_t d = 0; d < 3; ++d) {
    // Sorted summation makes the mean independent of token order.
    auto& xs = values[d];
    std::sort(xs.begin(), xs.end());
    double sum = 0.0;
    for (double x : xs) sum += x;
    stats[d].min = xs.front();
    stats[d].max = xs.back();
    stats[d].mean = std::clamp(sum / double(xs.size()), xs.front(), xs.back());
  }
  v.stats = stats;
  return v;
}

}  // namespace streetlex
