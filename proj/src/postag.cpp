#include "streetlex/postag.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>

#include "streetlex/util.hpp"

namespace streetlex {
namespace {

constexpr std::array<std::string_view, TagSet::kSize> kTags = {
    "N", "O", "^", "S", "Z", "V", "A", "R", "!", "D", "P", "&", "T",
    "X", "#", "@", "~", "U", "E", "$", ",", "G", "L", "M", "Y"};

constexpr std::string_view kTaggerHeader = "streetlex-tagger v1";

// Byte offsets of code-point starts, plus the end offset.
std::vector<std::size_t> char_starts(std::string_view s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(s.size());
  return out;
}

std::string word_shape(std::string_view w) {
  std::string shape;
  for (unsigned char c : w) {
    char s;
    if (c >= 'A' && c <= 'Z') {
      s = 'X';
    } else if (c >= 'a' && c <= 'z') {
      s = 'x';
    } else if (c >= '0' && c <= '9') {
      s = 'd';
    } else if (c >= 0x80) {
      if ((c & 0xC0) == 0x80) continue;
      s = 'u';
    } else {
      s = char(c);
    }
    if (shape.empty() || shape.back() != s) shape += s;
  }
  return shape;
}

std::size_t argmax_tag(const TaggerModel::Weights& scores) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return best;
}

// Perceptron weights with lazily accumulated sums for averaging.
struct TrainEntry {
  TaggerModel::Weights weight{};
  TaggerModel::Weights total{};
  std::array<std::int64_t, TagSet::kSize> stamp{};
};

class AveragedPerceptron {
 public:
  TaggerModel::Weights score(const std::vector<std::string>& features) const {
    TaggerModel::Weights s{};
    for (const auto& f : features) {
      auto it = table_.find(f);
      if (it == table_.end()) continue;
      for (std::size_t t = 0; t < s.size(); ++t) s[t] += it->second.weight[t];
    }
    return s;
  }

  void update(const std::vector<std::string>& features, std::size_t gold,
              std::size_t guess) {
    for (const auto& f : features) {
      auto& e = table_[f];
      bump(e, gold, 1.0);
      bump(e, guess, -1.0);
    }
  }

  void tick() { ++instances_; }

  std::unordered_map<std::string, TaggerModel::Weights> averaged() const {
    std::unordered_map<std::string, TaggerModel::Weights> out;
    const double n = double(std::max<std::int64_t>(instances_, 1));
    for (const auto& [f, e] : table_) {
      TaggerModel::Weights avg{};
      bool any = false;
      for (std::size_t t = 0; t < avg.size(); ++t) {
        const double total =
            e.total[t] + double(instances_ - e.stamp[t]) * e.weight[t];
        avg[t] = total / n;
        any = any || avg[t] != 0.0;
      }
      if (any) out.emplace(f, avg);
    }
    return out;
  }

 private:
  void bump(TrainEntry& e, std::size_t tag, double delta) {
    e.total[tag] += double(instances_ - e.stamp[tag]) * e.weight[tag];
    e.stamp[tag] = instances_;
    e.weight[tag] += delta;
  }

  std::unordered_map<std::string, TrainEntry> table_;
  std::int64_t instances_ = 0;
};

std::vector<std::string> model_features(std::span<const Token> tokens,
                                        std::size_t i,
                                        std::string_view prev_tag,
                                        bool augmented, Domain domain) {
  auto base = tagger_features(tokens, i, prev_tag);
  return augmented ? augment(base, domain) : base;
}

}  // namespace

std::string_view to_string(Domain d) {
  return d == Domain::source ? "source" : "target";
}

Domain domain_from_string(std::string_view name) {
  if (name == "source") return Domain::source;
  if (name == "target") return Domain::target;
  throw ArgumentError("unknown domain '" + std::string(name) +
                      "' (expected source or target)");
}

const std::array<std::string_view, TagSet::kSize>& TagSet::tags() {
  return kTags;
}

std::size_t TagSet::index(std::string_view tag) {
  auto it = std::find(kTags.begin(), kTags.end(), tag);
  return std::size_t(it - kTags.begin());
}

void validate(const TaggedSentence& s) {
  if (s.tags.size() != s.tokens.size()) {
    throw ArgumentError("tagged sentence has " + std::to_string(s.tokens.size()) +
                        " tokens but " + std::to_string(s.tags.size()) +
                        " tags");
  }
  for (const auto& t : s.tags) {
    if (!TagSet::contains(t)) {
      throw ArgumentError("tag '" + t + "' is not in the CMU tagset");
    }
  }
}

std::vector<std::string> augment(std::span<const std::string> features,
                                 Domain domain) {
  const std::string dom = "dom=" + std::string(to_string(domain)) + "|";
  std::vector<std::string> out;
  out.reserve(features.size() * 2);
  for (const auto& f : features) {
    out.push_back("shared|" + f);
    out.push_back(dom + f);
  }
  return out;
}

std::vector<std::string> tagger_features(std::span<const Token> tokens,
                                         std::size_t i,
                                         std::string_view prev_tag) {
  const Token& tok = tokens[i];
  const std::string lower = ascii_lower(tok.surface);
  const auto starts = char_starts(lower);
  const std::size_t nchars = starts.size() - 1;

  std::vector<std::string> f;
  f.reserve(16);
  f.emplace_back("bias");
  f.push_back("w=" + lower);
  f.push_back("shape=" + word_shape(tok.surface));
  for (std::size_t k = 1; k <= 3 && k <= nchars; ++k) {
    f.push_back("pre" + std::to_string(k) + "=" + lower.substr(0, starts[k]));
    f.push_back("suf" + std::to_string(k) + "=" +
                lower.substr(starts[nchars - k]));
  }
  if (std::any_of(lower.begin(), lower.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    f.emplace_back("has_digit");
  }
  if (lower.find('-') != std::string::npos) f.emplace_back("has_hyphen");
  f.push_back("kind=" + std::string(to_string(tok.kind)));
  f.push_back("pw=" + (i == 0 ? std::string("<s>")
                              : ascii_lower(tokens[i - 1].surface)));
  f.push_back("nw=" + (i + 1 == tokens.size()
                           ? std::string("</s>")
                           : ascii_lower(tokens[i + 1].surface)));
  f.push_back("pt=" + (prev_tag.empty() ? std::string("<s>")
                                        : std::string(prev_tag)));
  return f;
}

TaggerModel::TaggerModel(std::unordered_map<std::string, Weights> weights,
                         TaggerOptions options)
    : weights_(std::move(weights)), options_(options) {}

std::vector<std::string> TaggerModel::tag(std::span<const Token> tokens,
                                          Domain domain) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::string_view prev;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Weights scores{};
    for (const auto& f : model_features(tokens, i, prev,
                                        options_.domain_augmentation, domain)) {
      auto it = weights_.find(f);
      if (it == weights_.end()) continue;
      for (std::size_t t = 0; t < scores.size(); ++t) scores[t] += it->second[t];
    }
    out.emplace_back(kTags[argmax_tag(scores)]);
    prev = out.back();
  }
  return out;
}

std::string TaggerModel::save() const {
  std::string out(kTaggerHeader);
  out += "\n# epochs " + std::to_string(options_.epochs);
  out += "\n# seed " + std::to_string(options_.seed);
  out += "\n# augment " + std::string(options_.domain_augmentation ? "1" : "0");
  out += '\n';
  std::vector<const std::string*> keys;
  keys.reserve(weights_.size());
  for (const auto& [f, w] : weights_) keys.push_back(&f);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (const auto* f : keys) {
    const auto& w = weights_.at(*f);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (w[t] == 0.0) continue;
      out += *f;
      out += '\t';
      out += kTags[t];
      out += '\t';
      out += format_double(w[t]);
      out += '\n';
    }
  }
  return out;
}

TaggerModel TaggerModel::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || trim(line) != kTaggerHeader) {
    throw ParseError("expected header '" + std::string(kTaggerHeader) + "'", 1);
  }
  TaggerOptions opts;
  std::unordered_map<std::string, Weights> weights;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      auto parts = split_ws(line.substr(2));
      if (parts.size() != 2) continue;
      try {
        if (parts[0] == "epochs") opts.epochs = int(parse_int(parts[1], "epochs"));
        if (parts[0] == "seed") {
          opts.seed = std::uint64_t(parse_int(parts[1], "seed"));
        }
        if (parts[0] == "augment") opts.domain_augmentation = parts[1] == "1";
      } catch (const ArgumentError& e) {
        throw ParseError(e.what(), lineno);
      }
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 3) {
      throw ParseError("expected feature<TAB>tag<TAB>weight", lineno);
    }
    const std::size_t t = TagSet::index(cols[1]);
    if (t >= TagSet::kSize) {
      throw ParseError("unknown tag '" + cols[1] + "'", lineno);
    }
    try {
      weights[cols[0]][t] = parse_double(cols[2], "weight");
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return TaggerModel(std::move(weights), opts);
}

TaggerModel train_tagger(std::span<const TaggedSentence> source_corpus,
                         std::span<const TaggedSentence> target_corpus,
                         const TaggerOptions& options) {
  if (options.epochs < 1) throw ArgumentError("tagger epochs must be >= 1");
  std::vector<const TaggedSentence*> data;
  for (const auto& s : source_corpus) data.push_back(&s);
  for (const auto& s : target_corpus) data.push_back(&s);
  if (data.empty()) throw ArgumentError("tagger training corpus is empty");
  for (const auto* s : data) validate(*s);

  AveragedPerceptron perceptron;
  Rng rng(options.seed);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(data);
    for (const auto* s : data) {
      std::string_view prev;
      for (std::size_t i = 0; i < s->tokens.size(); ++i) {
        const auto feats = model_features(s->tokens, i, prev,
                                          options.domain_augmentation,
                                          s->domain);
        const std::size_t guess = argmax_tag(perceptron.score(feats));
        const std::size_t gold = TagSet::index(s->tags[i]);
        if (guess != gold) perceptron.update(feats, gold, guess);
        perceptron.tick();
        prev = kTags[guess];
      }
    }
  }
  return TaggerModel(perceptron.averaged(), options);
}

double tagger_accuracy(const TaggerModel& model,
                       std::span<const TaggedSentence> gold) {
  if (gold.empty()) throw ArgumentError("gold tagged corpus is empty");
  std::size_t total = 0, correct = 0;
  for (const auto& s : gold) {
    validate(s);
    const auto pred = model.tag(s.tokens, s.domain);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == s.tags[i];
    }
    total += pred.size();
  }
  if (total == 0) throw ArgumentError("gold tagged corpus has no tokens");
  return double(correct) / double(total);
}

std::vector<std::vector<std::string>> tag_batch_serial(
    const TaggerModel& model, std::span<const std::vector<Token>> sentences,
    Domain domain) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(model.tag(s, domain));
  return out;
}

std::vector<std::vector<std::string>> tag_batch(
    const TaggerModel& model, std::span<const std::vector<Token>> sentences,
    Domain domain) {
  std::vector<std::vector<std::string>> out(sentences.size());
  const auto n = static_cast<std::ptrdiff_t>(sentences.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[std::size_t(i)] = model.tag(sentences[std::size_t(i)], domain);
  }
  return out;
}

std::vector<TaggedSentence> read_tagged_corpus(std::istream& in,
                                               Domain default_domain) {
  std::vector<TaggedSentence> out;
  std::vector<std::string> words, tags;
  Domain domain = default_domain;
  bool domain_set = false;
  std::size_t lineno = 0;

  auto flush = [&] {
    if (!words.empty()) {
      TaggedSentence s;
      std::size_t cp = 0, byte = 0;
      for (auto& w : words) {
        Token t = make_token(std::move(w));
        t.span = {cp, cp + t.span.end};
        t.byte_span = {byte, byte + t.byte_span.end};
        cp = t.span.end + 1;
        byte = t.byte_span.end + 1;
        s.tokens.push_back(std::move(t));
      }
      s.tags = std::move(tags);
      s.domain = domain;
      out.push_back(std::move(s));
    } else if (domain_set) {
      throw ParseError("domain header without tokens", lineno);
    }
    words.clear();
    tags.clear();
    domain = default_domain;
    domain_set = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.rfind("# domain:", 0) == 0) {
      if (!words.empty()) {
        throw ParseError("domain header inside a sentence block", lineno);
      }
      try {
        domain = domain_from_string(trim(line.substr(9)));
      } catch (const ArgumentError& e) {
        throw ParseError(e.what(), lineno);
      }
      domain_set = true;
      continue;
    }
    if (line.rfind("# ", 0) == 0 && line.find('\t') == std::string::npos) {
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 2 || cols[0].empty()) {
      throw ParseError("expected token<TAB>tag", lineno);
    }
    if (!TagSet::contains(cols[1])) {
      throw ParseError("tag '" + cols[1] + "' is not in the CMU tagset", lineno);
    }
    words.push_back(std::move(cols[0]));
    tags.push_back(std::move(cols[1]));
  }
  flush();
  return out;
}

std::string write_tagged_corpus(std::span<const TaggedSentence> corpus) {
  std::string out;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& s = corpus[k];
    if (k) out += '\n';
    out += "# domain: " + std::string(to_string(s.domain)) + "\n";
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out += s.tokens[i].surface + '\t' + s.tags[i] + '\n';
    }
  }
  return out;
}

TaggedSplit split_tagged(std::span<const TaggedSentence> corpus, double ratio,
                         std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ArgumentError("split ratio must lie in (0, 1]");
  }
  Rng rng(seed);
  const auto order = shuffled_indices(corpus.size(), rng);
  const auto n_train =
      static_cast<std::size_t>(std::llround(ratio * double(corpus.size())));
  TaggedSplit out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? out.train : out.held_out).push_back(corpus[order[k]]);
  }
  return out;
}

}  // namespace streetlex
