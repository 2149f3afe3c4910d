#include "streetlex/align.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <unordered_map>

#include "streetlex/util.hpp"

namespace streetlex {

constexpr std::string_view kTableHeader = "streetlex-ttable v1";

void validate(const ParallelPair& pair) {
  if (pair.source.empty() || pair.gloss.empty()) {
    throw ArgumentError("parallel pair has an empty side");
  }
}

double TranslationTable::prob(std::string_view source,
                              std::string_view gloss) const {
  auto s = probs_.find(source);
  if (s == probs_.end()) return 0.0;
  auto g = s->second.find(gloss);
  return g == s->second.end() ? 0.0 : g->second;
}

// Dense-index form of the corpus. Each (source type, co-occurring gloss type)
// owns one cell; every pair carries a |gloss| x |source| matrix of cell
// indices so the E-step touches flat arrays only.
class Model1Trainer {
 public:
  Model1Trainer(std::span<const ParallelPair> pairs, bool use_null)
      : use_null_(use_null) {
    if (use_null_) intern(source_ids_, source_vocab_, std::string(kNullToken));
    std::vector<std::vector<int>> cooc;
    struct Encoded {
      std::vector<int> src, gls;
    };
    std::vector<Encoded> encoded;
    encoded.reserve(pairs.size());
    for (const auto& p : pairs) {
      validate(p);
      Encoded e;
      if (use_null_) e.src.push_back(0);
      for (const auto& s : p.source) {
        e.src.push_back(intern(source_ids_, source_vocab_, s));
        ++source_counts_[s];
      }
      for (const auto& g : p.gloss) {
        e.gls.push_back(intern(gloss_ids_, gloss_vocab_, g));
        ++gloss_counts_[g];
      }
      cooc.resize(source_vocab_.size());
      for (int s : e.src) {
        cooc[std::size_t(s)].insert(cooc[std::size_t(s)].end(), e.gls.begin(),
                                    e.gls.end());
      }
      encoded.push_back(std::move(e));
    }

    cell_base_.assign(cooc.size() + 1, 0);
    for (std::size_t s = 0; s < cooc.size(); ++s) {
      auto& c = cooc[s];
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      cell_base_[s + 1] = cell_base_[s] + c.size();
    }
    cell_gloss_.resize(cell_base_.back());
    t_.resize(cell_base_.back());
    for (std::size_t s = 0; s < cooc.size(); ++s) {
      const double uniform = 1.0 / double(cooc[s].size());
      for (std::size_t k = 0; k < cooc[s].size(); ++k) {
        cell_gloss_[cell_base_[s] + k] = cooc[s][k];
        t_[cell_base_[s] + k] = uniform;
      }
    }

    pairs_.reserve(encoded.size());
    std::size_t offset = 0;
    for (const auto& e : encoded) {
      PairCells pc;
      pc.n_src = e.src.size();
      pc.n_gls = e.gls.size();
      pc.offset = offset;
      pc.cells.reserve(pc.n_src * pc.n_gls);
      for (int g : e.gls) {
        for (int s : e.src) pc.cells.push_back(cell_of(s, g));
      }
      offset += pc.cells.size();
      pairs_.push_back(std::move(pc));
    }
    posterior_.resize(offset);
    pair_ll_.resize(pairs_.size());
  }

  // One EM iteration; returns the log-likelihood of the parameters that
  // were in force before the update.
  double iterate(EStep mode) {
    compute_posteriors(mode);
    std::vector<double> counts(t_.size(), 0.0);
    for (const auto& pc : pairs_) {
      for (std::size_t k = 0; k < pc.cells.size(); ++k) {
        counts[pc.cells[k]] += posterior_[pc.offset + k];
      }
    }
    for (std::size_t s = 0; s + 1 < cell_base_.size(); ++s) {
      double total = 0.0;
      for (std::size_t c = cell_base_[s]; c < cell_base_[s + 1]; ++c) {
        total += counts[c];
      }
      if (total <= 0.0) continue;
      for (std::size_t c = cell_base_[s]; c < cell_base_[s + 1]; ++c) {
        t_[c] = counts[c] / total;
      }
    }
    return sum_ll();
  }

  double log_likelihood() {
    compute_posteriors(EStep::serial);
    return sum_ll();
  }

  TranslationTable table(int iterations, std::vector<double> ll) const {
    TranslationTable out;
    for (std::size_t s = 0; s + 1 < cell_base_.size(); ++s) {
      auto& dist = out.probs_[source_vocab_[s]];
      for (std::size_t c = cell_base_[s]; c < cell_base_[s + 1]; ++c) {
        dist[gloss_vocab_[std::size_t(cell_gloss_[c])]] = t_[c];
      }
    }
    out.source_counts_.insert(source_counts_.begin(), source_counts_.end());
    out.gloss_counts_.insert(gloss_counts_.begin(), gloss_counts_.end());
    out.iterations_ = iterations;
    out.use_null_ = use_null_;
    out.log_likelihood_ = std::move(ll);
    return out;
  }

 private:
  struct PairCells {
    std::size_t n_src = 0, n_gls = 0, offset = 0;
    std::vector<std::size_t> cells;  // row-major, gloss x source
  };

  static int intern(std::unordered_map<std::string, int>& ids,
                    std::vector<std::string>& vocab, const std::string& w) {
    auto [it, fresh] = ids.emplace(w, int(vocab.size()));
    if (fresh) vocab.push_back(w);
    return it->second;
  }

  std::size_t cell_of(int s, int g) const {
    const auto begin = cell_gloss_.begin() + std::ptrdiff_t(cell_base_[std::size_t(s)]);
    const auto end = cell_gloss_.begin() + std::ptrdiff_t(cell_base_[std::size_t(s) + 1]);
    return std::size_t(std::lower_bound(begin, end, g) - cell_gloss_.begin());
  }

  // Posterior of each alignment link and per-pair log-likelihood, written
  // into slots owned by the pair.
  void pair_posteriors(std::size_t p) {
    const PairCells& pc = pairs_[p];
    double ll = 0.0;
    const double log_n_src = std::log(double(pc.n_src));
    for (std::size_t j = 0; j < pc.n_gls; ++j) {
      const std::size_t row = j * pc.n_src;
      double denom = 0.0;
      for (std::size_t i = 0; i < pc.n_src; ++i) denom += t_[pc.cells[row + i]];
      for (std::size_t i = 0; i < pc.n_src; ++i) {
        posterior_[pc.offset + row + i] = t_[pc.cells[row + i]] / denom;
      }
      ll += std::log(denom) - log_n_src;
    }
    pair_ll_[p] = ll;
  }

  void compute_posteriors(EStep mode) {
    const auto n = static_cast<std::ptrdiff_t>(pairs_.size());
    if (mode == EStep::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t p = 0; p < n; ++p) pair_posteriors(std::size_t(p));
    } else {
      for (std::ptrdiff_t p = 0; p < n; ++p) pair_posteriors(std::size_t(p));
    }
  }

  double sum_ll() const {
    double ll = 0.0;
    for (double v : pair_ll_) ll += v;
    return ll;
  }

  bool use_null_;
  std::unordered_map<std::string, int> source_ids_, gloss_ids_;
  std::vector<std::string> source_vocab_, gloss_vocab_;
  std::map<std::string, std::size_t> source_counts_, gloss_counts_;
  std::vector<std::size_t> cell_base_;
  std::vector<int> cell_gloss_;
  std::vector<double> t_;
  std::vector<PairCells> pairs_;
  std::vector<double> posterior_;
  std::vector<double> pair_ll_;
};

TranslationTable train_model1(std::span<const ParallelPair> pairs,
                              int iterations, bool use_null, EStep estep,
                              const Model1Observer& observer) {
  if (pairs.empty()) throw ArgumentError("parallel corpus is empty");
  if (iterations < 1) throw ArgumentError("iterations must be >= 1");
  Model1Trainer trainer(pairs, use_null);
  std::vector<double> ll;
  ll.reserve(std::size_t(iterations) + 1);
  for (int it = 1; it <= iterations; ++it) {
    ll.push_back(trainer.iterate(estep));
    if (observer) observer(it, trainer.table(it, ll));
  }
  ll.push_back(trainer.log_likelihood());
  return trainer.table(iterations, std::move(ll));
}

Alignment viterbi_align(const TranslationTable& table,
                        const ParallelPair& pair) {
  Alignment links;
  links.reserve(pair.gloss.size());
  for (const auto& g : pair.gloss) {
    std::optional<std::size_t> best;
    double best_p = -1.0;
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
      const double p = table.prob(pair.source[i], g);
      if (p > best_p) {
        best_p = p;
        best = i;
      }
    }
    if (table.uses_null() && table.prob(kNullToken, g) > best_p) best.reset();
    links.push_back(best);
  }
  return links;
}

std::string TranslationTable::save() const {
  std::string out(kTableHeader);
  out += "\niterations\t" + std::to_string(iterations_);
  out += "\nnull\t" + std::string(use_null_ ? "1" : "0");
  out += "\nloglik";
  for (double v : log_likelihood_) out += '\t' + format_double(v);
  for (const auto& [s, n] : source_counts_) {
    out += "\ncount\t" + s + '\t' + std::to_string(n);
  }
  for (const auto& [g, n] : gloss_counts_) {
    out += "\ngcount\t" + g + '\t' + std::to_string(n);
  }
  out += "\n\n";
  for (const auto& [s, dist] : probs_) {
    for (const auto& [g, p] : dist) {
      out += s + '\t' + g + '\t' + format_double(p) + '\n';
    }
  }
  return out;
}

TranslationTable TranslationTable::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || trim(line) != kTableHeader) {
    throw ParseError("expected header '" + std::string(kTableHeader) + "'", 1);
  }
  TranslationTable t;
  bool in_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      in_data = true;
      continue;
    }
    auto cols = split(line, '\t');
    try {
      if (in_data) {
        if (cols.size() != 3) {
          throw ParseError("expected source<TAB>gloss<TAB>prob", lineno);
        }
        const double p = parse_double(cols[2], "probability");
        if (p < 0.0 || p > 1.0) {
          throw ParseError("probability outside [0, 1]", lineno);
        }
        t.probs_[cols[0]][cols[1]] = p;
      } else if (cols[0] == "iterations" && cols.size() == 2) {
        t.iterations_ = int(parse_int(cols[1], "iterations"));
      } else if (cols[0] == "null" && cols.size() == 2) {
        t.use_null_ = cols[1] == "1";
      } else if (cols[0] == "loglik") {
        for (std::size_t k = 1; k < cols.size(); ++k) {
          t.log_likelihood_.push_back(parse_double(cols[k], "loglik"));
        }
      } else if ((cols[0] == "count" || cols[0] == "gcount") &&
                 cols.size() == 3) {
        auto& m = cols[0] == "count" ? t.source_counts_ : t.gloss_counts_;
        m[cols[1]] = std::size_t(parse_int(cols[2], "count"));
      } else {
        throw ParseError("unknown table metadata line", lineno);
      }
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return t;
}

const GlossEntry* Glossary::find(std::string_view source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Glossary::save() const {
  std::string out;
  for (const auto& [s, e] : entries_) {
    out += s + '\t' + e.gloss + '\t' + format_fixed(e.probability, 6) + '\n';
  }
  return out;
}

Glossary Glossary::load(std::istream& in) {
  std::map<std::string, GlossEntry, std::less<>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
      throw ParseError("expected source<TAB>gloss<TAB>probability", lineno);
    }
    double p;
    try {
      p = parse_double(cols[2], "probability");
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
    entries[cols[0]] = GlossEntry{cols[1], p};
  }
  return Glossary(std::move(entries));
}

Glossary extract_glossary(const TranslationTable& table, double threshold,
                          std::size_t min_count) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ArgumentError("glossary threshold must lie in (0, 1]");
  }
  std::map<std::string, GlossEntry, std::less<>> entries;
  for (const auto& [source, dist] : table.probs()) {
    if (source == kNullToken || dist.empty()) continue;
    auto count = table.source_counts().find(source);
    const std::size_t n =
        count == table.source_counts().end() ? 0 : count->second;
    if (n < min_count) continue;
    auto best = dist.begin();
    for (auto it = dist.begin(); it != dist.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    if (best->second < threshold || best->first == source) continue;
    entries.emplace(source, GlossEntry{best->first, best->second});
  }
  return Glossary(std::move(entries));
}

std::vector<ParallelPair> read_parallel_corpus(std::istream& in) {
  std::vector<ParallelPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) {
      throw ParseError("expected source tokens<TAB>gloss tokens", lineno);
    }
    ParallelPair p;
    for (auto& w : split_ws(cols[0])) p.source.push_back(ascii_lower(w));
    for (auto& w : split_ws(cols[1])) p.gloss.push_back(ascii_lower(w));
    if (p.source.empty() || p.gloss.empty()) {
      throw ParseError("parallel pair has an empty side", lineno);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace streetlex
