#include "streetlex/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "streetlex/agreement.hpp"
#include "streetlex/json_io.hpp"

namespace streetlex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

template <typename Fn>
auto convert(Fn fn) {
  try {
    return fn();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

std::string path_text(const fs::path& p) { return p.generic_string(); }

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open file: " + p.string());
  return in;
}

// Re-raises parse errors with the file name in front.
template <typename Fn>
auto with_file(const fs::path& p, Fn fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(p.string() + ": " + e.what(), 0);
  }
}

}  // namespace

void set_config_value(PipelineConfig& c, const std::string& key,
                      const std::string& value) {
  const std::string& v = value;
  auto as_int = [&] {
    return convert([&] { return parse_int(v, key); });
  };
  auto as_double = [&] {
    return convert([&] { return parse_double(v, key); });
  };
  auto as_count = [&] {
    const long long n = as_int();
    if (n < 0) throw ConfigError(key + " must be >= 0");
    return std::size_t(n);
  };

  if (key == "paths.tweets") c.paths.tweets = v;
  else if (key == "paths.annotations") c.paths.annotations = v;
  else if (key == "paths.codebook") c.paths.codebook = v;
  else if (key == "paths.tagged") c.paths.tagged = v;
  else if (key == "paths.parallel") c.paths.parallel = v;
  else if (key == "paths.lexicon") c.paths.lexicon = v;
  else if (key == "paths.out_dir") c.paths.out_dir = v;
  else if (key == "corpus.format") {
    c.corpus_format = convert([&] { return corpus_format_from_string(v); });
  } else if (key == "corpus.gold_annotator") c.gold_annotator = v;
  else if (key == "tagger.epochs") c.tagger.epochs = int(as_int());
  else if (key == "tagger.seed") c.tagger.seed = std::uint64_t(as_count());
  else if (key == "tagger.split") c.tagger_split = as_double();
  else if (key == "tagger.augment") c.tagger.domain_augmentation = parse_bool(key, v);
  else if (key == "align.iterations") c.align.iterations = int(as_int());
  else if (key == "align.tau") c.align.tau = as_double();
  else if (key == "align.min_count") c.align.min_count = as_count();
  else if (key == "align.use_null") c.align.use_null = parse_bool(key, v);
  else if (key == "classifier.lambda") c.classifier.lambda = as_double();
  else if (key == "classifier.epochs") c.classifier.epochs = int(as_int());
  else if (key == "classifier.seed") c.classifier.seed = std::uint64_t(as_count());
  else if (key == "classifier.class_weights") {
    auto parts = split(v, ',');
    if (parts.size() != 3) {
      throw ConfigError(key + " needs three comma-separated weights");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      c.classifier.class_weights[k] =
          convert([&] { return parse_double(parts[k], key); });
    }
  } else if (key == "classifier.lexical") c.features.lexical = parse_bool(key, v);
  else if (key == "classifier.pos") c.features.pos = parse_bool(key, v);
  else if (key == "classifier.emoticon_hashtag") {
    c.features.emoticon_hashtag = parse_bool(key, v);
  } else if (key == "classifier.affect") c.features.affect = parse_bool(key, v);
  else if (key == "classifier.glossary") c.use_glossary = parse_bool(key, v);
  else if (key == "eval.folds") c.eval_folds = as_count();
  else if (key == "eval.seed") c.eval_seed = std::uint64_t(as_count());
  else if (key == "eval.test_ratio") c.test_ratio = as_double();
  else throw ConfigError("unknown configuration key '" + key + "'");
}

PipelineConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file: " + file.string());
  PipelineConfig c;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  const auto where = [&] {
    return file.string() + ":" + std::to_string(lineno) + ": ";
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where() + "unterminated section");
      section = std::string(trim(t.substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where() + "expected key = value");
    }
    if (section.empty()) throw ConfigError(where() + "key outside a section");
    const std::string key = section + "." + std::string(trim(t.substr(0, eq)));
    try {
      set_config_value(c, key, std::string(trim(t.substr(eq + 1))));
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  const fs::path base = file.parent_path();
  for (fs::path* p : {&c.paths.tweets, &c.paths.annotations, &c.paths.codebook,
                      &c.paths.tagged, &c.paths.parallel, &c.paths.lexicon,
                      &c.paths.out_dir}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

void validate(const PipelineConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.tagger.epochs >= 1, "tagger.epochs must be >= 1");
  require(c.tagger_split > 0.0 && c.tagger_split <= 1.0,
          "tagger.split must lie in (0, 1]");
  require(c.align.iterations >= 1, "align.iterations must be >= 1");
  require(c.align.tau > 0.0 && c.align.tau <= 1.0,
          "align.tau must lie in (0, 1]");
  require(c.classifier.lambda > 0.0, "classifier.lambda must be > 0");
  require(c.classifier.epochs >= 1, "classifier.epochs must be >= 1");
  for (double w : c.classifier.class_weights) {
    require(w > 0.0, "classifier.class_weights must be > 0");
  }
  require(c.eval_folds == 0 || c.eval_folds >= 2,
          "eval.folds must be 0 (off) or >= 2");
  require(c.test_ratio > 0.0 && c.test_ratio < 1.0,
          "eval.test_ratio must lie in (0, 1)");
}

std::string describe(const PipelineConfig& c) {
  std::ostringstream os;
  const auto& w = c.classifier.class_weights;
  os << "[paths]\n"
     << "tweets = " << path_text(c.paths.tweets) << "\n"
     << "annotations = " << path_text(c.paths.annotations) << "\n"
     << "codebook = " << path_text(c.paths.codebook) << "\n"
     << "tagged = " << path_text(c.paths.tagged) << "\n"
     << "parallel = " << path_text(c.paths.parallel) << "\n"
     << "lexicon = " << path_text(c.paths.lexicon) << "\n"
     << "out_dir = " << path_text(c.paths.out_dir) << "\n\n"
     << "[corpus]\n"
     << "format = " << (c.corpus_format == CorpusFormat::jsonl ? "jsonl" : "tsv")
     << "\n"
     << "gold_annotator = " << c.gold_annotator << "\n\n"
     << "[tagger]\n"
     << "epochs = " << c.tagger.epochs << "\n"
     << "seed = " << c.tagger.seed << "\n"
     << "split = " << format_double(c.tagger_split) << "\n"
     << "augment = " << bool_text(c.tagger.domain_augmentation) << "\n\n"
     << "[align]\n"
     << "iterations = " << c.align.iterations << "\n"
     << "tau = " << format_double(c.align.tau) << "\n"
     << "min_count = " << c.align.min_count << "\n"
     << "use_null = " << bool_text(c.align.use_null) << "\n\n"
     << "[classifier]\n"
     << "lambda = " << format_double(c.classifier.lambda) << "\n"
     << "epochs = " << c.classifier.epochs << "\n"
     << "seed = " << c.classifier.seed << "\n"
     << "class_weights = " << format_double(w[0]) << "," << format_double(w[1])
     << "," << format_double(w[2]) << "\n"
     << "lexical = " << bool_text(c.features.lexical) << "\n"
     << "pos = " << bool_text(c.features.pos) << "\n"
     << "emoticon_hashtag = " << bool_text(c.features.emoticon_hashtag) << "\n"
     << "affect = " << bool_text(c.features.affect) << "\n"
     << "glossary = " << bool_text(c.use_glossary) << "\n\n"
     << "[eval]\n"
     << "folds = " << c.eval_folds << "\n"
     << "seed = " << c.eval_seed << "\n"
     << "test_ratio = " << format_double(c.test_ratio) << "\n";
  return os.str();
}

FeatureVector Featurizer::operator()(std::string_view text) const {
  static const Glossary kNoGlossary;
  const auto tokens = tokenize(text);
  const auto tags = tagger.tag(tokens, Domain::target);
  const auto affect = affect_features(tokens, lexicon,
                                      use_glossary ? glossary : kNoGlossary);
  return extract_features(tokens, tags, affect, features);
}

std::map<std::string, Category> gold_labels(const LabeledCorpus& corpus,
                                            const std::string& gold_annotator) {
  std::map<std::string, Category> gold;
  for (const auto& a : corpus.annotations) {
    if (!gold_annotator.empty() && a.annotator_id != gold_annotator) continue;
    gold.emplace(a.tweet_id, corpus.codebook.collapse(a.fine_code));
  }
  return gold;
}

std::vector<Example> featurize_corpus(const LabeledCorpus& corpus,
                                      const Featurizer& featurizer,
                                      const std::string& gold_annotator,
                                      std::vector<bool>* labeled) {
  const auto gold = gold_labels(corpus, gold_annotator);
  std::vector<Example> out(corpus.tweets.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.tweets.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Tweet& t = corpus.tweets[std::size_t(i)];
    out[std::size_t(i)].id = t.id;
    out[std::size_t(i)].features = featurizer(t.text);
  }
  if (labeled) labeled->assign(out.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto it = gold.find(out[i].id);
    if (it == gold.end()) continue;
    out[i].label = it->second;
    if (labeled) (*labeled)[i] = true;
  }
  return out;
}

LabeledCorpus load_corpus(const PipelineConfig& c) {
  auto cb_in = open_input(c.paths.codebook);
  const Codebook cb =
      with_file(c.paths.codebook, [&] { return load_codebook(cb_in); });
  auto tweets = open_input(c.paths.tweets);
  if (c.paths.annotations.empty()) {
    return with_file(c.paths.tweets, [&] {
      return ingest_corpus(tweets, c.corpus_format, cb);
    });
  }
  auto ann = open_input(c.paths.annotations);
  return with_file(c.paths.tweets.string() + " + " +
                       c.paths.annotations.string(),
                   [&] { return ingest_corpus(tweets, c.corpus_format, cb, &ann); });
}

AffectLexicon load_lexicon_file(const fs::path& path) {
  auto in = open_input(path);
  return with_file(path, [&] { return load_lexicon(in); });
}

PipelineResult run_pipeline(const PipelineConfig& c) {
  validate(c);
  PipelineResult r;
  const fs::path out = c.paths.out_dir;
  r.table_path = out / "ttable.txt";
  r.glossary_path = out / "glossary.tsv";
  r.tagger_path = out / "tagger.model";
  r.features_path = out / "features.jsonl";
  r.classifier_path = out / "classifier.model";
  r.report_json_path = out / "report.json";
  r.report_text_path = out / "report.txt";

  // align-train
  auto par_in = open_input(c.paths.parallel);
  const auto pairs =
      with_file(c.paths.parallel, [&] { return read_parallel_corpus(par_in); });
  const auto table = train_model1(pairs, c.align.iterations, c.align.use_null);
  write_file_atomic(r.table_path, table.save());

  // glossary
  Featurizer featurizer;
  featurizer.glossary = extract_glossary(table, c.align.tau, c.align.min_count);
  featurizer.use_glossary = c.use_glossary;
  featurizer.features = c.features;
  r.glossary_size = featurizer.glossary.size();
  write_file_atomic(r.glossary_path, featurizer.glossary.save());

  // tag-train
  auto tag_in = open_input(c.paths.tagged);
  const auto tagged = with_file(
      c.paths.tagged, [&] { return read_tagged_corpus(tag_in, Domain::target); });
  std::vector<TaggedSentence> source, target;
  for (const auto& s : tagged) {
    (s.domain == Domain::source ? source : target).push_back(s);
  }
  const auto split = split_tagged(target, c.tagger_split, c.tagger.seed);
  featurizer.tagger = train_tagger(source, split.train, c.tagger);
  r.tagger_accuracy =
      split.held_out.empty()
          ? tagger_accuracy(featurizer.tagger, split.train)
          : tagger_accuracy(featurizer.tagger, split.held_out);
  write_file_atomic(r.tagger_path, featurizer.tagger.save());

  // featurize
  featurizer.lexicon = load_lexicon_file(c.paths.lexicon);
  const LabeledCorpus corpus = load_corpus(c);
  std::vector<bool> labeled;
  const auto examples =
      featurize_corpus(corpus, featurizer, c.gold_annotator, &labeled);
  write_file_atomic(r.features_path, write_examples(examples, &labeled));

  std::vector<Example> gold;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (labeled[i]) gold.push_back(examples[i]);
  }
  if (gold.size() < 2) {
    throw Error("corpus has fewer than two labelled tweets");
  }

  // train
  const auto parts = split_examples(gold, c.test_ratio, c.eval_seed);
  if (parts.train.empty() || parts.test.empty()) {
    throw Error("test_ratio leaves an empty train or test split");
  }
  const auto model = train_classifier(parts.train, c.classifier, c.features);
  write_file_atomic(r.classifier_path, model.save());

  // evaluate
  r.held_out = evaluate(model, parts.test);
  r.baseline = majority_baseline(parts.train, parts.test);
  if (c.eval_folds >= 2 && gold.size() >= c.eval_folds) {
    r.cross_validation = cross_validate(gold, c.eval_folds, c.classifier,
                                        c.eval_seed, c.features);
  }

  json report;
  report["config"] = describe(c);
  report["alignment"] = {{"pairs", pairs.size()},
                         {"iterations", table.iterations_run()},
                         {"final_log_likelihood", table.log_likelihoods().back()},
                         {"glossary_entries", r.glossary_size}};
  report["tagger"] = {{"source_sentences", source.size()},
                      {"target_train_sentences", split.train.size()},
                      {"target_held_out_sentences", split.held_out.size()},
                      {"held_out_accuracy", r.tagger_accuracy}};
  report["corpus"] = {{"tweets", corpus.tweets.size()},
                      {"annotations", corpus.annotations.size()},
                      {"labelled", gold.size()},
                      {"train", parts.train.size()},
                      {"test", parts.test.size()}};
  std::set<std::string> annotators;
  for (const auto& a : corpus.annotations) annotators.insert(a.annotator_id);
  std::string kappa_text;
  if (annotators.size() >= 2) {
    const auto a = *annotators.begin();
    const auto b = *std::next(annotators.begin());
    const auto pair =
        pair_annotators(corpus, a, b, LabelLevel::collapsed);
    if (pair.size() > 0) {
      try {
        const auto k = cohen_kappa(pair);
        auto kj = kappa_to_json(k, pair);
        kj["annotator_a"] = a;
        kj["annotator_b"] = b;
        report["agreement"] = kj;
        kappa_text = "agreement " + a + " vs " + b + ": kappa = " +
                     format_fixed(k.kappa, 4) + " over " +
                     std::to_string(k.n_items) + " tweets\n";
      } catch (const Error& e) {
        report["agreement"] = {{"error", e.what()}};
      }
    }
  }
  report["evaluation"] = report_to_json(r.held_out);
  report["baseline"] = report_to_json(r.baseline);
  if (r.cross_validation) {
    report["cross_validation"] = {
        {"folds", c.eval_folds},
        {"fold_macro_f1", r.cross_validation->fold_macro_f1},
        {"mean_macro_f1", r.cross_validation->mean_macro_f1},
        {"stddev_macro_f1", r.cross_validation->stddev_macro_f1}};
  }
  write_file_atomic(r.report_json_path, report.dump(2) + "\n");

  std::ostringstream text;
  text << "# effective configuration\n" << describe(c) << "\n";
  text << "alignment: " << pairs.size() << " pairs, " << table.iterations_run()
       << " iterations, glossary " << r.glossary_size << " entries\n";
  text << "tagger: held-out target accuracy "
       << format_fixed(r.tagger_accuracy, 4) << "\n";
  text << kappa_text;
  text << "\nheld-out evaluation\n" << format_report_text(r.held_out);
  text << "\nmajority-class baseline: macro-F1 = "
       << format_fixed(r.baseline.macro_f1, 4)
       << "  accuracy = " << format_fixed(r.baseline.accuracy, 4) << "\n";
  if (r.cross_validation) {
    text << c.eval_folds << "-fold cross-validation: macro-F1 = "
         << format_fixed(r.cross_validation->mean_macro_f1, 4) << " +/- "
         << format_fixed(r.cross_validation->stddev_macro_f1, 4) << "\n";
  }
  write_file_atomic(r.report_text_path, text.str());
  return r;
}

}  // namespace streetlex
