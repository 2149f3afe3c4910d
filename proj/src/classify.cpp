#include "streetlex/classify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "streetlex/json_io.hpp"
#include "streetlex/util.hpp"

namespace streetlex {

using nlohmann::json;

namespace {

constexpr std::string_view kClassifierHeader = "streetlex-clf v1";

std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

// w = scale * v, so the per-step shrink of every weight is O(1).
struct ScaledWeights {
  std::unordered_map<std::string, double> v;
  double bias_v = 0;
  double scale = 1;

  double score(const FeatureVector& x) const {
    double s = bias_v;
    for (const auto& [name, value] : x) {
      auto it = v.find(name);
      if (it != v.end()) s += it->second * value;
    }
    return scale * s;
  }

  void shrink(double factor) {
    if (factor <= 0.0) {
      v.clear();
      bias_v = 0;
      scale = 1;
      return;
    }
    scale *= factor;
  }

  void add(const FeatureVector& x, double step) {
    const double d = step / scale;
    for (const auto& [name, value] : x) v[name] += d * value;
    bias_v += d;
  }

  ClassifierModel::ClassWeights materialize() const {
    ClassifierModel::ClassWeights out;
    for (const auto& [name, value] : v) {
      const double w = scale * value;
      if (w != 0.0) out.weights.emplace(name, w);
    }
    out.bias = scale * bias_v;
    return out;
  }
};

std::string bool_flag(bool b) { return b ? "1" : "0"; }

}  // namespace

void FeatureVector::add(const std::string& name, double value) {
  if (value == 0.0) return;
  auto [it, fresh] = values_.emplace(name, value);
  if (!fresh) {
    it->second += value;
    if (it->second == 0.0) values_.erase(it);
  }
}

void FeatureVector::set(const std::string& name, double value) {
  if (value == 0.0) {
    auto it = values_.find(name);
    if (it != values_.end()) values_.erase(it);
    return;
  }
  values_[name] = value;
}

double FeatureVector::get(std::string_view name) const {
  auto it = values_.find(name);
  return it == values_.end() ? 0.0 : it->second;
}

FeatureVector extract_features(std::span<const Token> tokens,
                               std::span<const std::string> tags,
                               const AffectVector& affect,
                               const FeatureConfig& config) {
  if (tokens.size() != tags.size()) {
    throw ArgumentError("extract_features: " + std::to_string(tokens.size()) +
                        " tokens but " + std::to_string(tags.size()) +
                        " tags");
  }
  FeatureVector fv;
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(ascii_lower(t.surface));

  if (config.lexical) {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      fv.add("uni:" + lower[i], 1.0);
      if (i + 1 < lower.size()) fv.add("bi:" + lower[i] + "_" + lower[i + 1], 1.0);
    }
  }
  if (config.pos) {
    for (std::size_t i = 0; i < tags.size(); ++i) {
      fv.add("pos:" + tags[i], 1.0);
      if (i + 1 < tags.size()) fv.add("posbi:" + tags[i] + "_" + tags[i + 1], 1.0);
    }
  }
  if (config.emoticon_hashtag) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      fv.add("kind:" + std::string(to_string(t.kind)), 1.0);
      switch (t.kind) {
        case TokenKind::emoticon:
        case TokenKind::emoji:
          fv.set("emo:" + t.surface, 1.0);
          break;
        case TokenKind::hashtag:
          fv.set("hash:" + lower[i].substr(1), 1.0);
          break;
        case TokenKind::mention:
          fv.set("mention_present", 1.0);
          break;
        case TokenKind::url:
          fv.set("url_present", 1.0);
          break;
        default:
          break;
      }
    }
  }
  if (config.affect && affect.stats) {
    for (std::size_t d = 0; d < 3; ++d) {
      const std::string dim(to_string(kAffectDims[d]));
      const DimStats& s = (*affect.stats)[d];
      fv.set("affect:" + dim + "_mean", s.mean);
      fv.set("affect:" + dim + "_min", s.min);
      fv.set("affect:" + dim + "_max", s.max);
    }
    fv.set("affect:coverage", affect.coverage);
  }
  return fv;
}

ClassifierModel::ClassifierModel(std::array<ClassWeights, 3> classes,
                                 ClassifierOptions options,
                                 FeatureConfig features)
    : classes_(std::move(classes)), options_(options), features_(features) {}

ClassScores ClassifierModel::scores(const FeatureVector& fv) const {
  ClassScores s{};
  for (std::size_t c = 0; c < 3; ++c) {
    double v = classes_[c].bias;
    for (const auto& [name, value] : fv) {
      auto it = classes_[c].weights.find(name);
      if (it != classes_[c].weights.end()) v += it->second * value;
    }
    s[c] = v;
  }
  return s;
}

Prediction ClassifierModel::predict(const FeatureVector& fv) const {
  Prediction p;
  p.scores = scores(fv);
  std::size_t best = 0;
  for (std::size_t c = 1; c < 3; ++c) {
    if (p.scores[c] > p.scores[best]) best = c;
  }
  p.label = kCategories[best];
  return p;
}

std::string ClassifierModel::save() const {
  std::string out(kClassifierHeader);
  out += "\n# lambda " + format_double(options_.lambda);
  out += "\n# epochs " + std::to_string(options_.epochs);
  out += "\n# seed " + std::to_string(options_.seed);
  out += "\n# class_weights";
  for (double w : options_.class_weights) out += " " + format_double(w);
  out += "\n# features lexical=" + bool_flag(features_.lexical) +
         " pos=" + bool_flag(features_.pos) +
         " emoticon_hashtag=" + bool_flag(features_.emoticon_hashtag) +
         " affect=" + bool_flag(features_.affect);
  out += '\n';
  for (std::size_t c = 0; c < 3; ++c) {
    out += "CLASS " + std::string(to_string(kCategories[c])) + " " +
           format_double(classes_[c].bias) + "\n";
    std::vector<std::pair<std::string, double>> sorted(
        classes_[c].weights.begin(), classes_[c].weights.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [name, w] : sorted) {
      out += name + '\t' + format_double(w) + '\n';
    }
  }
  return out;
}

ClassifierModel ClassifierModel::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || trim(line) != kClassifierHeader) {
    throw ParseError("expected header '" + std::string(kClassifierHeader) + "'",
                     1);
  }
  ClassifierOptions opts;
  FeatureConfig feats;
  std::array<ClassWeights, 3> classes;
  std::array<bool, 3> seen{};
  std::optional<std::size_t> current;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      if (line.find('\t') != std::string::npos) {
        if (!current) throw ParseError("weight line before CLASS line", lineno);
        auto cols = split(line, '\t');
        if (cols.size() != 2) {
          throw ParseError("expected feature<TAB>weight", lineno);
        }
        classes[*current].weights[cols[0]] = parse_double(cols[1], "weight");
      } else if (line.rfind("CLASS ", 0) == 0) {
        auto parts = split_ws(line);
        if (parts.size() != 3) {
          throw ParseError("expected CLASS name bias", lineno);
        }
        const std::size_t c = index_of(category_from_string(parts[1]));
        if (seen[c]) throw ParseError("class listed twice", lineno);
        seen[c] = true;
        classes[c].bias = parse_double(parts[2], "bias");
        current = c;
      } else if (line.rfind("# ", 0) == 0) {
        auto parts = split_ws(line.substr(2));
        if (parts.empty()) continue;
        if (parts[0] == "lambda" && parts.size() == 2) {
          opts.lambda = parse_double(parts[1], "lambda");
        } else if (parts[0] == "epochs" && parts.size() == 2) {
          opts.epochs = int(parse_int(parts[1], "epochs"));
        } else if (parts[0] == "seed" && parts.size() == 2) {
          opts.seed = std::uint64_t(parse_int(parts[1], "seed"));
        } else if (parts[0] == "class_weights" && parts.size() == 4) {
          for (std::size_t c = 0; c < 3; ++c) {
            opts.class_weights[c] = parse_double(parts[c + 1], "class weight");
          }
        } else if (parts[0] == "features") {
          for (std::size_t k = 1; k < parts.size(); ++k) {
            auto kv = split(parts[k], '=');
            if (kv.size() != 2) continue;
            const bool on = kv[1] == "1";
            if (kv[0] == "lexical") feats.lexical = on;
            if (kv[0] == "pos") feats.pos = on;
            if (kv[0] == "emoticon_hashtag") feats.emoticon_hashtag = on;
            if (kv[0] == "affect") feats.affect = on;
          }
        }
      } else {
        throw ParseError("unrecognized line", lineno);
      }
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  for (std::size_t c = 0; c < 3; ++c) {
    if (!seen[c]) {
      throw ParseError("model lacks class '" +
                           std::string(to_string(kCategories[c])) + "'",
                       lineno);
    }
  }
  return ClassifierModel(std::move(classes), opts, feats);
}

ClassifierModel train_classifier(std::span<const Example> data,
                                 const ClassifierOptions& options,
                                 const FeatureConfig& features) {
  if (data.empty()) throw ArgumentError("classifier training data is empty");
  if (!(options.lambda > 0.0)) throw ArgumentError("lambda must be > 0");
  if (options.epochs < 1) throw ArgumentError("epochs must be >= 1");
  for (double w : options.class_weights) {
    if (!(w > 0.0)) throw ArgumentError("class weights must be > 0");
  }

  std::array<ScaledWeights, 3> learners;
  Rng rng(options.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const Example& ex = data[i];
      ++t;
      const double eta = 1.0 / (options.lambda * double(t));
      const double loss_weight = options.class_weights[index_of(ex.label)];
      for (std::size_t c = 0; c < 3; ++c) {
        const double y = ex.label == kCategories[c] ? 1.0 : -1.0;
        const double margin = y * learners[c].score(ex.features);
        learners[c].shrink(1.0 - eta * options.lambda);
        if (margin < 1.0) learners[c].add(ex.features, eta * y * loss_weight);
      }
    }
  }
  std::array<ClassifierModel::ClassWeights, 3> classes;
  for (std::size_t c = 0; c < 3; ++c) classes[c] = learners[c].materialize();
  return ClassifierModel(std::move(classes), options, features);
}

std::vector<Prediction> predict_batch_serial(const ClassifierModel& model,
                                             std::span<const Example> data) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (const auto& ex : data) out.push_back(model.predict(ex.features));
  return out;
}

std::vector<Prediction> predict_batch(const ClassifierModel& model,
                                      std::span<const Example> data) {
  std::vector<Prediction> out(data.size());
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[std::size_t(i)] = model.predict(data[std::size_t(i)].features);
  }
  return out;
}

EvalReport report_from_confusion(const ConfusionMatrix& confusion) {
  EvalReport r;
  r.confusion = confusion;
  std::size_t trace = 0;
  std::array<std::size_t, 3> row{}, col{};
  for (std::size_t g = 0; g < 3; ++g) {
    for (std::size_t p = 0; p < 3; ++p) {
      r.n += confusion[g][p];
      row[g] += confusion[g][p];
      col[p] += confusion[g][p];
    }
    trace += confusion[g][g];
  }
  if (r.n == 0) throw ArgumentError("evaluation set is empty");
  double f1_sum = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    ClassMetrics& m = r.per_class[c];
    const double tp = double(confusion[c][c]);
    m.support = row[c];
    m.precision = col[c] ? tp / double(col[c]) : 0.0;
    m.recall = row[c] ? tp / double(row[c]) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    f1_sum += m.f1;
  }
  r.macro_f1 = f1_sum / 3.0;
  r.accuracy = double(trace) / double(r.n);
  return r;
}

EvalReport evaluate(const ClassifierModel& model,
                    std::span<const Example> gold) {
  if (gold.empty()) throw ArgumentError("evaluation set is empty");
  ConfusionMatrix cm{};
  const auto preds = predict_batch(model, gold);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++cm[index_of(gold[i].label)][index_of(preds[i].label)];
  }
  return report_from_confusion(cm);
}

EvalReport majority_baseline(std::span<const Example> train,
                             std::span<const Example> gold) {
  if (gold.empty()) throw ArgumentError("evaluation set is empty");
  std::array<std::size_t, 3> freq{};
  for (const auto& ex : train) ++freq[index_of(ex.label)];
  const std::size_t majority = std::size_t(
      std::max_element(freq.begin(), freq.end()) - freq.begin());
  ConfusionMatrix cm{};
  for (const auto& ex : gold) ++cm[index_of(ex.label)][majority];
  return report_from_confusion(cm);
}

std::vector<std::size_t> assign_folds(std::size_t n, std::size_t k,
                                      std::uint64_t seed) {
  if (k < 2) throw ArgumentError("cross-validation needs k >= 2");
  if (n < k) {
    throw ArgumentError("cross-validation needs at least k = " +
                        std::to_string(k) + " items, got " + std::to_string(n));
  }
  Rng rng(seed);
  const auto perm = shuffled_indices(n, rng);
  std::vector<std::size_t> fold(n);
  for (std::size_t p = 0; p < n; ++p) fold[perm[p]] = p % k;
  return fold;
}

CrossValidation cross_validate(std::span<const Example> data, std::size_t k,
                               const ClassifierOptions& options,
                               std::uint64_t fold_seed,
                               const FeatureConfig& features) {
  CrossValidation cv;
  cv.fold_of = assign_folds(data.size(), k, fold_seed);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Example> train, test;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (cv.fold_of[i] == f ? test : train).push_back(data[i]);
    }
    const auto model = train_classifier(train, options, features);
    cv.fold_macro_f1.push_back(evaluate(model, test).macro_f1);
  }
  double sum = 0;
  for (double v : cv.fold_macro_f1) sum += v;
  cv.mean_macro_f1 = sum / double(k);
  double ss = 0;
  for (double v : cv.fold_macro_f1) {
    ss += (v - cv.mean_macro_f1) * (v - cv.mean_macro_f1);
  }
  cv.stddev_macro_f1 = std::sqrt(ss / double(k - 1));
  return cv;
}

ExampleSplit split_examples(std::span<const Example> data, double test_ratio,
                            std::uint64_t seed) {
  if (!(test_ratio >= 0.0 && test_ratio < 1.0)) {
    throw ArgumentError("test ratio must lie in [0, 1)");
  }
  Rng rng(seed);
  const auto perm = shuffled_indices(data.size(), rng);
  const auto n_test =
      static_cast<std::size_t>(std::llround(test_ratio * double(data.size())));
  std::vector<bool> is_test(data.size(), false);
  for (std::size_t p = 0; p < n_test; ++p) is_test[perm[p]] = true;
  ExampleSplit out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (is_test[i] ? out.test : out.train).push_back(data[i]);
  }
  return out;
}

std::string write_examples(std::span<const Example> data,
                           const std::vector<bool>* labeled) {
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Example& ex = data[i];
    json obj;
    obj["id"] = ex.id;
    if (labeled && !(*labeled)[i]) {
      obj["label"] = nullptr;
    } else {
      obj["label"] = std::string(to_string(ex.label));
    }
    json feats = json::object();
    for (const auto& [name, value] : ex.features) feats[name] = value;
    obj["features"] = std::move(feats);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<Example> read_examples(std::istream& in,
                                   std::vector<bool>* labeled) {
  std::vector<Example> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const json obj = json::parse(line);
      Example ex;
      ex.id = obj.value("id", std::string());
      const auto& label = obj.at("label");
      if (label.is_null()) {
        if (!labeled) throw ParseError("record has no label", lineno);
        labeled->push_back(false);
      } else {
        ex.label = category_from_string(label.get<std::string>());
        if (labeled) labeled->push_back(true);
      }
      for (const auto& [name, value] : obj.at("features").items()) {
        if (!value.is_number()) {
          throw ParseError("feature '" + name + "' is not a number", lineno);
        }
        ex.features.set(name, value.get<double>());
      }
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed feature record: ") + e.what(),
                       lineno);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

json report_to_json(const EvalReport& r) {
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  json per_class = json::object();
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& m = r.per_class[c];
    per_class[std::string(to_string(kCategories[c]))] = {
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
        {"support", m.support}};
  }
  return json{{"confusion", std::move(confusion)},
              {"per_class", std::move(per_class)},
              {"macro_f1", r.macro_f1},
              {"accuracy", r.accuracy},
              {"n", r.n}};
}

std::string format_report_json(const EvalReport& r, int indent) {
  return report_to_json(r).dump(indent) + "\n";
}

std::string format_report_text(const EvalReport& r) {
  std::ostringstream os;
  os << "n = " << r.n << "  accuracy = " << format_fixed(r.accuracy, 4)
     << "  macro-F1 = " << format_fixed(r.macro_f1, 4) << "\n\n";
  os << "confusion (rows gold, columns predicted)\n";
  os << "              aggression       grief       other\n";
  for (std::size_t g = 0; g < 3; ++g) {
    std::string name(to_string(kCategories[g]));
    name.resize(12, ' ');
    os << name;
    for (std::size_t p = 0; p < 3; ++p) {
      std::string cell = std::to_string(r.confusion[g][p]);
      os << std::string(12 - std::min<std::size_t>(cell.size(), 11), ' ')
         << cell;
    }
    os << '\n';
  }
  os << "\nclass         precision    recall        F1   support\n";
  for (std::size_t c = 0; c < 3; ++c) {
    std::string name(to_string(kCategories[c]));
    name.resize(12, ' ');
    const auto& m = r.per_class[c];
    os << name << "  " << format_fixed(m.precision, 6) << "  "
       << format_fixed(m.recall, 6) << "  " << format_fixed(m.f1, 6) << "  "
       << std::setw(8) << m.support << '\n';
  }
  return os.str();
}

}  // namespace streetlex
