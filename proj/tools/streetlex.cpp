// streetlex command-line tool.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "streetlex/agreement.hpp"
#include "streetlex/json_io.hpp"
#include "streetlex/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace streetlex;

namespace {

struct Globals {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
};

PipelineConfig effective_config(const Globals& g) {
  PipelineConfig c = g.config.empty() ? PipelineConfig{} : load_config(g.config);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects section.key=value, got '" + kv + "'");
    }
    set_config_value(c, std::string(trim(kv.substr(0, eq))),
                     std::string(trim(kv.substr(eq + 1))));
  }
  if (g.seed) {
    c.tagger.seed = c.classifier.seed = c.eval_seed = *g.seed;
  }
  return c;
}

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open file: " + p.string());
  return in;
}

template <typename Fn>
auto load(const fs::path& p, Fn fn) {
  auto in = open_input(p);
  try {
    return fn(in);
  } catch (const ParseError& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

fs::path require_path(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("no ") + what + " path given");
  return p;
}

// Writes to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::string line;
  auto take = [&](std::istream& in) {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
  };
  if (path.empty() || path == "-") {
    take(std::cin);
  } else {
    auto in = open_input(path);
    take(in);
  }
  return lines;
}

Codebook codebook_for(const fs::path& p) {
  if (p.empty()) return default_codebook();
  return load(p, [](std::istream& in) { return load_codebook(in); });
}

json affect_json(const AffectVector& a) {
  json j = {{"matched", a.matched}, {"eligible", a.eligible},
            {"coverage", a.coverage}};
  if (a.stats) {
    for (AffectDim d : kAffectDims) {
      const auto& s = (*a.stats)[std::size_t(d)];
      j[std::string(to_string(d))] = {
          {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
    }
  }
  return j;
}

std::vector<Example> labeled_only(const std::vector<Example>& data,
                                  const std::vector<bool>& labeled) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (labeled[i]) out.push_back(data[i]);
  }
  return out;
}

std::string report_text(const EvalReport& r, const std::string& format) {
  return format == "json" ? format_report_json(r) : format_report_text(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streetlex: tweet tokenization, tagging, glossary induction, "
               "affect features and aggression/grief classification"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "pipeline configuration file");
  app.add_option("--set", g.overrides, "override a config value: section.key=value");
  app.add_option("--seed", g.seed, "seed for every randomized stage");
  app.add_option("--format", g.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  std::function<void()> action;
  auto command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    return sub;
  };

  // ingest
  std::string tweets, annotations, codebook, input_format, start, end, out;
  auto* ingest = command("ingest", "validate a corpus and write it as JSONL");
  ingest->add_option("--tweets", tweets);
  ingest->add_option("--annotations", annotations);
  ingest->add_option("--codebook", codebook);
  ingest->add_option("--input-format", input_format)
      ->check(CLI::IsMember({"jsonl", "tsv"}));
  ingest->add_option("--start", start, "keep tweets at or after this time");
  ingest->add_option("--end", end, "keep tweets before this time");
  ingest->add_option("-o,--out", out);
  ingest->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!tweets.empty()) c.paths.tweets = tweets;
      if (!annotations.empty()) c.paths.annotations = annotations;
      if (!codebook.empty()) c.paths.codebook = codebook;
      if (!input_format.empty()) c.corpus_format = corpus_format_from_string(input_format);
      require_path(c.paths.tweets, "tweets");
      const Codebook cb = codebook_for(c.paths.codebook);
      auto tin = open_input(c.paths.tweets);
      std::optional<std::ifstream> ain;
      if (!c.paths.annotations.empty()) ain = open_input(c.paths.annotations);
      LabeledCorpus corpus;
      try {
        corpus = ingest_corpus(tin, c.corpus_format, cb, ain ? &*ain : nullptr);
      } catch (const ParseError& e) {
        throw Error(c.paths.tweets.string() +
                    (ain ? " + " + c.paths.annotations.string() : "") + ": " +
                    e.what());
      }
      if (!start.empty() || !end.empty()) {
        const Timestamp lo = start.empty() ? Timestamp::min() : parse_timestamp(start);
        const Timestamp hi = end.empty() ? Timestamp::max() : parse_timestamp(end);
        corpus = window_filter(corpus, lo, hi);
      }
      emit(out, write_corpus(corpus, CorpusFormat::jsonl));
      std::cerr << corpus.tweets.size() << " tweets, "
                << corpus.annotations.size() << " annotations\n";
    };
  });

  // kappa
  std::vector<std::string> kappa_files;
  std::string level = "collapsed", annotator_a, annotator_b;
  auto* kappa = command("kappa", "Cohen's kappa between two annotation files");
  kappa->add_option("files", kappa_files, "annotation files A and B")
      ->required()
      ->expected(2);
  kappa->add_option("--codebook", codebook);
  kappa->add_option("--input-format", input_format)
      ->check(CLI::IsMember({"jsonl", "tsv"}));
  kappa->add_option("--level", level)->check(CLI::IsMember({"collapsed", "fine"}));
  kappa->add_option("--annotator-a", annotator_a, "only this annotator from file A");
  kappa->add_option("--annotator-b", annotator_b, "only this annotator from file B");
  kappa->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!codebook.empty()) c.paths.codebook = codebook;
      if (!input_format.empty()) c.corpus_format = corpus_format_from_string(input_format);
      const Codebook cb = codebook_for(c.paths.codebook);
      auto read = [&](const std::string& path, const std::string& who) {
        auto all = load(path, [&](std::istream& in) {
          return read_annotations(in, c.corpus_format, cb);
        });
        if (who.empty()) return all;
        std::vector<Annotation> kept;
        for (auto& a : all) {
          if (a.annotator_id == who) kept.push_back(std::move(a));
        }
        return kept;
      };
      const auto pair = pair_annotation_sets(
          cb, read(kappa_files[0], annotator_a), read(kappa_files[1], annotator_b),
          level == "fine" ? LabelLevel::fine : LabelLevel::collapsed);
      const auto k = cohen_kappa(pair);
      if (g.format == "json") {
        std::cout << kappa_to_json(k, pair).dump(2) << "\n";
      } else {
        std::cout << "kappa = " << format_fixed(k.kappa, 4) << "\n"
                  << "observed = " << format_fixed(k.observed_agreement, 4) << "\n"
                  << "expected = " << format_fixed(k.expected_agreement, 4) << "\n"
                  << "items = " << k.n_items << "\n";
      }
    };
  });

  // collapse
  std::vector<std::string> codes;
  auto* collapse = command("collapse", "map fine codes to aggression/grief/other");
  collapse->add_option("codes", codes, "fine codes")->required();
  collapse->add_option("--codebook", codebook);
  collapse->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!codebook.empty()) c.paths.codebook = codebook;
      const Codebook cb = codebook_for(c.paths.codebook);
      for (const auto& code : codes) {
        std::cout << code << "\t" << to_string(cb.collapse(code)) << "\n";
      }
    };
  });

  // tag-train
  std::string tagged;
  std::optional<int> epochs;
  bool no_augment = false;
  auto* tag_train = command("tag-train", "train the domain-adapted tagger");
  tag_train->add_option("--tagged", tagged);
  tag_train->add_option("--epochs", epochs);
  tag_train->add_flag("--no-augment", no_augment, "pooled features, no augmentation");
  tag_train->add_option("-o,--out", out);
  tag_train->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!tagged.empty()) c.paths.tagged = tagged;
      if (epochs) c.tagger.epochs = *epochs;
      if (no_augment) c.tagger.domain_augmentation = false;
      validate(c);
      const auto corpus = load(require_path(c.paths.tagged, "tagged corpus"),
                               [](std::istream& in) {
                                 return read_tagged_corpus(in, Domain::target);
                               });
      std::vector<TaggedSentence> source, target;
      for (const auto& s : corpus) {
        (s.domain == Domain::source ? source : target).push_back(s);
      }
      const auto split = split_tagged(target, c.tagger_split, c.tagger.seed);
      const auto model = train_tagger(source, split.train, c.tagger);
      const fs::path dest = out.empty() ? c.paths.out_dir / "tagger.model" : fs::path(out);
      emit(dest.string(), model.save());
      if (!split.held_out.empty()) {
        std::cerr << "held-out target accuracy "
                  << format_fixed(tagger_accuracy(model, split.held_out), 4) << "\n";
      }
    };
  });

  // tag
  std::string model_path, input, domain = "target";
  auto* tag_cmd = command("tag", "tag tweets, one per input line");
  tag_cmd->add_option("-m,--model", model_path)->required();
  tag_cmd->add_option("--domain", domain)->check(CLI::IsMember({"source", "target"}));
  tag_cmd->add_option("input", input, "text file (default stdin)");
  tag_cmd->callback([&] {
    action = [&] {
      effective_config(g);
      const auto model = load(model_path, [](std::istream& in) {
        return TaggerModel::load(in);
      });
      std::vector<std::vector<Token>> sentences;
      for (const auto& line : read_lines(input)) sentences.push_back(tokenize(line));
      const auto tags = tag_batch(model, sentences, domain_from_string(domain));
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (g.format == "json") {
          json j = json::array();
          for (std::size_t k = 0; k < tags[i].size(); ++k) {
            j.push_back({{"token", sentences[i][k].surface}, {"tag", tags[i][k]}});
          }
          std::cout << j.dump() << "\n";
        } else {
          for (std::size_t k = 0; k < tags[i].size(); ++k) {
            std::cout << (k ? " " : "") << sentences[i][k].surface << "/"
                      << tags[i][k];
          }
          std::cout << "\n";
        }
      }
    };
  });

  // align-train
  std::string parallel;
  std::optional<int> iterations;
  bool no_null = false;
  auto* align_train = command("align-train", "train the word-translation table");
  align_train->add_option("--parallel", parallel);
  align_train->add_option("--iterations", iterations);
  align_train->add_flag("--no-null", no_null, "no NULL source token");
  align_train->add_option("-o,--out", out);
  align_train->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!parallel.empty()) c.paths.parallel = parallel;
      if (iterations) c.align.iterations = *iterations;
      if (no_null) c.align.use_null = false;
      validate(c);
      const auto pairs = load(require_path(c.paths.parallel, "parallel corpus"),
                              [](std::istream& in) { return read_parallel_corpus(in); });
      const auto table = train_model1(pairs, c.align.iterations, c.align.use_null);
      const fs::path dest = out.empty() ? c.paths.out_dir / "ttable.txt" : fs::path(out);
      emit(dest.string(), table.save());
      std::cerr << "log-likelihood " << format_double(table.log_likelihoods().back())
                << " after " << table.iterations_run() << " iterations\n";
    };
  });

  // glossary
  std::string table_path;
  std::optional<double> tau;
  std::optional<std::size_t> min_count;
  auto* glossary = command("glossary", "extract the slang glossary from a table");
  glossary->add_option("--table", table_path);
  glossary->add_option("--tau", tau);
  glossary->add_option("--min-count", min_count);
  glossary->add_option("-o,--out", out);
  glossary->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (tau) c.align.tau = *tau;
      if (min_count) c.align.min_count = *min_count;
      validate(c);
      const fs::path src =
          table_path.empty() ? c.paths.out_dir / "ttable.txt" : fs::path(table_path);
      const auto table = load(src, [](std::istream& in) {
        return TranslationTable::load(in);
      });
      const auto gl = extract_glossary(table, c.align.tau, c.align.min_count);
      const fs::path dest = out.empty() ? c.paths.out_dir / "glossary.tsv" : fs::path(out);
      emit(dest.string(), gl.save());
      std::cerr << gl.size() << " glossary entries\n";
    };
  });

  // affect
  std::string lexicon, glossary_path;
  bool no_glossary = false;
  auto* affect = command("affect", "affect scores for text, one item per line");
  affect->add_option("--lexicon", lexicon);
  affect->add_option("--glossary", glossary_path);
  affect->add_flag("--no-glossary", no_glossary);
  affect->add_option("input", input, "text file (default stdin)");
  affect->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!lexicon.empty()) c.paths.lexicon = lexicon;
      const auto lex = load_lexicon_file(require_path(c.paths.lexicon, "lexicon"));
      Glossary gl;
      if (!no_glossary && !glossary_path.empty()) {
        gl = load(glossary_path, [](std::istream& in) { return Glossary::load(in); });
      }
      for (const auto& line : read_lines(input)) {
        const auto a = affect_features(tokenize(line), lex, gl);
        if (g.format == "json") {
          json j = affect_json(a);
          j["text"] = line;
          std::cout << j.dump() << "\n";
        } else {
          std::cout << format_fixed(a.coverage, 4);
          if (a.stats) {
            for (const auto& s : *a.stats) {
              std::cout << "\t" << format_fixed(s.mean, 4) << "\t"
                        << format_fixed(s.min, 4) << "\t" << format_fixed(s.max, 4);
            }
          }
          std::cout << "\n";
        }
      }
    };
  });

  // featurize
  std::string tagger_path;
  auto* featurize = command("featurize", "turn the corpus into feature JSONL");
  featurize->add_option("--tweets", tweets);
  featurize->add_option("--annotations", annotations);
  featurize->add_option("--codebook", codebook);
  featurize->add_option("--tagger", tagger_path);
  featurize->add_option("--glossary", glossary_path);
  featurize->add_option("--lexicon", lexicon);
  featurize->add_flag("--no-glossary", no_glossary);
  featurize->add_option("-o,--out", out);
  featurize->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (!tweets.empty()) c.paths.tweets = tweets;
      if (!annotations.empty()) c.paths.annotations = annotations;
      if (!codebook.empty()) c.paths.codebook = codebook;
      if (!lexicon.empty()) c.paths.lexicon = lexicon;
      if (no_glossary) c.use_glossary = false;
      require_path(c.paths.tweets, "tweets");
      require_path(c.paths.codebook, "codebook");
      Featurizer f;
      f.features = c.features;
      f.use_glossary = c.use_glossary;
      f.tagger = load(tagger_path.empty() ? c.paths.out_dir / "tagger.model"
                                          : fs::path(tagger_path),
                      [](std::istream& in) { return TaggerModel::load(in); });
      if (c.use_glossary) {
        f.glossary = load(glossary_path.empty() ? c.paths.out_dir / "glossary.tsv"
                                                : fs::path(glossary_path),
                          [](std::istream& in) { return Glossary::load(in); });
      }
      f.lexicon = load_lexicon_file(require_path(c.paths.lexicon, "lexicon"));
      const auto corpus = load_corpus(c);
      std::vector<bool> labeled;
      const auto data = featurize_corpus(corpus, f, c.gold_annotator, &labeled);
      const fs::path dest =
          out.empty() ? c.paths.out_dir / "features.jsonl" : fs::path(out);
      emit(dest.string(), write_examples(data, &labeled));
    };
  });

  // train
  std::string features_path;
  std::optional<double> lambda;
  auto* train = command("train", "train the classifier on labelled features");
  train->add_option("--features", features_path);
  train->add_option("--lambda", lambda);
  train->add_option("--epochs", epochs);
  train->add_option("-o,--out", out);
  train->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (lambda) c.classifier.lambda = *lambda;
      if (epochs) c.classifier.epochs = *epochs;
      validate(c);
      const fs::path src = features_path.empty() ? c.paths.out_dir / "features.jsonl"
                                                 : fs::path(features_path);
      std::vector<bool> labeled;
      const auto data = labeled_only(
          load(src, [&](std::istream& in) { return read_examples(in, &labeled); }),
          labeled);
      const auto model = train_classifier(data, c.classifier, c.features);
      const fs::path dest =
          out.empty() ? c.paths.out_dir / "classifier.model" : fs::path(out);
      emit(dest.string(), model.save());
    };
  });

  auto load_model = [&](const PipelineConfig& c) {
    const fs::path p =
        model_path.empty() ? c.paths.out_dir / "classifier.model" : fs::path(model_path);
    return load(p, [](std::istream& in) { return ClassifierModel::load(in); });
  };
  auto features_file = [&](const PipelineConfig& c) {
    return features_path.empty() ? c.paths.out_dir / "features.jsonl"
                                 : fs::path(features_path);
  };

  // predict
  auto* predict_cmd = command("predict", "classify feature records");
  predict_cmd->add_option("-m,--model", model_path);
  predict_cmd->add_option("--features", features_path);
  predict_cmd->add_option("-o,--out", out);
  predict_cmd->callback([&] {
    action = [&] {
      const auto c = effective_config(g);
      const auto model = load_model(c);
      std::vector<bool> labeled;
      const auto data = load(features_file(c), [&](std::istream& in) {
        return read_examples(in, &labeled);
      });
      const auto preds = predict_batch(model, data);
      std::string text;
      for (std::size_t i = 0; i < data.size(); ++i) {
        json scores;
        for (Category k : kCategories) {
          scores[std::string(to_string(k))] = preds[i].scores[std::size_t(k)];
        }
        text += json{{"id", data[i].id},
                     {"label", to_string(preds[i].label)},
                     {"scores", scores}}
                    .dump() +
                "\n";
      }
      emit(out, text);
    };
  });

  // evaluate
  auto* evaluate_cmd = command("evaluate", "score a model on labelled features");
  evaluate_cmd->add_option("-m,--model", model_path);
  evaluate_cmd->add_option("--features", features_path);
  evaluate_cmd->callback([&] {
    action = [&] {
      const auto c = effective_config(g);
      const auto model = load_model(c);
      std::vector<bool> labeled;
      const auto data = labeled_only(load(features_file(c), [&](std::istream& in) {
                                       return read_examples(in, &labeled);
                                     }),
                                     labeled);
      std::cout << report_text(evaluate(model, data), g.format);
    };
  });

  // xval
  std::optional<std::size_t> folds;
  auto* xval = command("xval", "k-fold cross-validation on labelled features");
  xval->add_option("--features", features_path);
  xval->add_option("-k,--folds", folds);
  xval->callback([&] {
    action = [&] {
      auto c = effective_config(g);
      if (folds) c.eval_folds = *folds;
      validate(c);
      if (c.eval_folds < 2) throw ConfigError("xval needs at least 2 folds");
      std::vector<bool> labeled;
      const auto data = labeled_only(load(features_file(c), [&](std::istream& in) {
                                       return read_examples(in, &labeled);
                                     }),
                                     labeled);
      const auto cv =
          cross_validate(data, c.eval_folds, c.classifier, c.eval_seed, c.features);
      if (g.format == "json") {
        std::cout << json{{"folds", c.eval_folds},
                          {"fold_macro_f1", cv.fold_macro_f1},
                          {"mean_macro_f1", cv.mean_macro_f1},
                          {"stddev_macro_f1", cv.stddev_macro_f1}}
                         .dump(2)
                  << "\n";
      } else {
        for (std::size_t f = 0; f < cv.fold_macro_f1.size(); ++f) {
          std::cout << "fold " << f << "\t" << format_fixed(cv.fold_macro_f1[f], 4)
                    << "\n";
        }
        std::cout << "mean macro-F1 = " << format_fixed(cv.mean_macro_f1, 4)
                  << " +/- " << format_fixed(cv.stddev_macro_f1, 4) << "\n";
      }
    };
  });

  // pipeline
  std::string out_dir;
  auto* pipeline = command("pipeline", "run every stage from a config file");
  pipeline->add_option("--out-dir", out_dir);
  pipeline->callback([&] {
    action = [&] {
      if (g.config.empty()) throw ConfigError("pipeline needs --config");
      auto c = effective_config(g);
      if (!out_dir.empty()) c.paths.out_dir = out_dir;
      const auto r = run_pipeline(c);
      if (g.format == "json") {
        std::cout << read_file(r.report_json_path);
      } else {
        std::cout << read_file(r.report_text_path);
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "streetlex: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
