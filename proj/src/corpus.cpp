#include "streetlex/corpus.hpp"

#include <array>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "streetlex/util.hpp"

namespace streetlex {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kCategoryNames = {"aggression",
                                                            "grief", "other"};

constexpr std::array<std::string_view, 6> kDuvaaKeys = {
    "precipitating_event", "author_profile", "content",
    "clues",               "tone",           "trigger_event"};

std::array<std::string*, 6> duvaa_fields(DuvaaContext& d) {
  return {&d.precipitating_event, &d.author_profile, &d.content,
          &d.clues,               &d.tone,           &d.trigger_event};
}

std::array<const std::string*, 6> duvaa_fields(const DuvaaContext& d) {
  return {&d.precipitating_event, &d.author_profile, &d.content,
          &d.clues,               &d.tone,           &d.trigger_event};
}

int parse_digits(std::string_view s, std::size_t pos, std::size_t n,
                 std::string_view text) {
  if (pos + n > s.size()) {
    throw ArgumentError("truncated timestamp: '" + std::string(text) + "'");
  }
  int v = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const char c = s[pos + k];
    if (c < '0' || c > '9') {
      throw ArgumentError("invalid timestamp: '" + std::string(text) + "'");
    }
    v = v * 10 + (c - '0');
  }
  return v;
}

void expect_char(std::string_view s, std::size_t pos, char c,
                 std::string_view text) {
  if (pos >= s.size() || s[pos] != c) {
    throw ArgumentError("invalid timestamp: '" + std::string(text) + "'");
  }
}

// Splits on '\t' and undoes \t \n \r \\ escapes. "\N" marks a null field.
struct TsvField {
  std::string value;
  bool null = false;
};

std::vector<TsvField> split_tsv(std::string_view line, std::size_t lineno) {
  std::vector<TsvField> out;
  for (const auto& raw : split(line, '\t')) {
    TsvField f;
    if (raw == "\\N") {
      f.null = true;
      out.push_back(std::move(f));
      continue;
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '\\') {
        f.value += raw[i];
        continue;
      }
      if (i + 1 >= raw.size()) throw ParseError("dangling escape", lineno);
      switch (raw[++i]) {
        case 't': f.value += '\t'; break;
        case 'n': f.value += '\n'; break;
        case 'r': f.value += '\r'; break;
        case '\\': f.value += '\\'; break;
        default: throw ParseError("unknown escape in field", lineno);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::string escape_tsv(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_optional(const std::optional<std::string>& s) {
  return s ? escape_tsv(*s) : std::string("\\N");
}

const std::vector<std::string> kTweetColumns = {"id", "author", "created_at",
                                                "text", "reply_to"};
const std::vector<std::string> kAnnotationColumns = {
    "tweet_id", "annotator_id", "fine_code", "precipitating_event",
    "author_profile", "content", "clues", "tone", "trigger_event"};

struct PendingAnnotation {
  Annotation annotation;
  std::size_t line;
};

class CorpusBuilder {
 public:
  explicit CorpusBuilder(const Codebook& cb) { corpus_.codebook = cb; }

  void add_tweet(Tweet t, std::size_t line) {
    if (t.id.empty()) throw ParseError("tweet id is empty", line);
    if (t.text.empty()) {
      throw ParseError("tweet '" + t.id + "' has empty text", line);
    }
    if (!ids_.insert(t.id).second) {
      throw ParseError("duplicate tweet id '" + t.id + "'", line);
    }
    corpus_.tweets.push_back(std::move(t));
  }

  void add_annotation(Annotation a, std::size_t line) {
    if (!corpus_.codebook.contains(a.fine_code)) {
      throw ParseError("fine code '" + a.fine_code +
                           "' is not in the codebook",
                       line);
    }
    if (!pairs_.insert({a.tweet_id, a.annotator_id}).second) {
      throw ParseError("second annotation of tweet '" + a.tweet_id +
                           "' by annotator '" + a.annotator_id + "'",
                       line);
    }
    pending_.push_back({std::move(a), line});
  }

  LabeledCorpus finish() {
    for (auto& p : pending_) {
      if (!ids_.count(p.annotation.tweet_id)) {
        throw ParseError("annotation references unknown tweet id '" +
                             p.annotation.tweet_id + "'",
                         p.line);
      }
      corpus_.annotations.push_back(std::move(p.annotation));
    }
    pending_.clear();
    return std::move(corpus_);
  }

  std::vector<Annotation> finish_annotations() {
    if (!corpus_.tweets.empty()) {
      throw ParseError("expected annotation records only", 1);
    }
    std::vector<Annotation> out;
    for (auto& p : pending_) out.push_back(std::move(p.annotation));
    pending_.clear();
    return out;
  }

 private:
  LabeledCorpus corpus_;
  std::unordered_set<std::string> ids_;
  std::set<std::pair<std::string, std::string>> pairs_;
  std::vector<PendingAnnotation> pending_;
};

std::string json_string(const json& obj, const char* key, std::size_t line,
                        bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) {
      throw ParseError(std::string("missing key '") + key + "'", line);
    }
    return {};
  }
  if (!it->is_string()) {
    throw ParseError(std::string("key '") + key + "' must be a string", line);
  }
  return it->get<std::string>();
}

void read_jsonl(std::istream& in, CorpusBuilder& builder) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
    if (!obj.is_object()) throw ParseError("record is not an object", lineno);
    if (obj.contains("tweet_id")) {
      Annotation a;
      a.tweet_id = json_string(obj, "tweet_id", lineno);
      a.annotator_id = json_string(obj, "annotator_id", lineno);
      a.fine_code = json_string(obj, "fine_code", lineno);
      if (auto it = obj.find("duvaa"); it != obj.end() && !it->is_null()) {
        if (!it->is_object()) {
          throw ParseError("key 'duvaa' must be an object", lineno);
        }
        DuvaaContext d;
        auto fields = duvaa_fields(d);
        for (std::size_t k = 0; k < kDuvaaKeys.size(); ++k) {
          *fields[k] = json_string(*it, kDuvaaKeys[k].data(), lineno, false);
        }
        a.duvaa = std::move(d);
      }
      builder.add_annotation(std::move(a), lineno);
    } else {
      Tweet t;
      t.id = json_string(obj, "id", lineno);
      t.author = json_string(obj, "author", lineno);
      t.text = json_string(obj, "text", lineno);
      try {
        t.created_at = parse_timestamp(json_string(obj, "created_at", lineno));
      } catch (const ArgumentError& e) {
        throw ParseError(e.what(), lineno);
      }
      if (auto it = obj.find("reply_to"); it != obj.end() && !it->is_null()) {
        t.reply_to = json_string(obj, "reply_to", lineno);
      }
      builder.add_tweet(std::move(t), lineno);
    }
  }
}

bool is_header(const std::vector<TsvField>& f,
               const std::vector<std::string>& columns, std::size_t min_cols) {
  if (f.size() < min_cols || f.size() > columns.size()) return false;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].null || f[k].value != columns[k]) return false;
  }
  return true;
}

void read_tsv(std::istream& in, CorpusBuilder& builder) {
  enum class Section { none, tweets, annotations } section = Section::none;
  std::size_t width = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto f = split_tsv(line, lineno);
    if (is_header(f, kTweetColumns, 4)) {
      section = Section::tweets;
      width = f.size();
      continue;
    }
    if (is_header(f, kAnnotationColumns, 3) &&
        (f.size() == 3 || f.size() == kAnnotationColumns.size())) {
      section = Section::annotations;
      width = f.size();
      continue;
    }
    if (section == Section::none) {
      throw ParseError("data row before a header row", lineno);
    }
    if (f.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, got " +
                           std::to_string(f.size()),
                       lineno);
    }
    for (std::size_t k = 0; k < 3; ++k) {
      if (f[k].null) throw ParseError("required field is null", lineno);
    }
    if (section == Section::tweets) {
      if (f[3].null) throw ParseError("required field is null", lineno);
      Tweet t;
      t.id = f[0].value;
      t.author = f[1].value;
      try {
        t.created_at = parse_timestamp(f[2].value);
      } catch (const ArgumentError& e) {
        throw ParseError(e.what(), lineno);
      }
      t.text = f[3].value;
      if (width == 5 && !f[4].null) t.reply_to = f[4].value;
      builder.add_tweet(std::move(t), lineno);
    } else {
      Annotation a{f[0].value, f[1].value, f[2].value, std::nullopt};
      if (width == kAnnotationColumns.size()) {
        bool any_null = false, all_null = true;
        for (std::size_t k = 3; k < width; ++k) {
          any_null = any_null || f[k].null;
          all_null = all_null && f[k].null;
        }
        if (any_null && !all_null) {
          throw ParseError("context columns must be all null or all set",
                           lineno);
        }
        if (!all_null) {
          DuvaaContext d;
          auto fields = duvaa_fields(d);
          for (std::size_t k = 0; k < 6; ++k) *fields[k] = f[3 + k].value;
          a.duvaa = std::move(d);
        }
      }
      builder.add_annotation(std::move(a), lineno);
    }
  }
}

json annotation_json(const Annotation& a) {
  json obj = {{"tweet_id", a.tweet_id},
              {"annotator_id", a.annotator_id},
              {"fine_code", a.fine_code}};
  if (a.duvaa) {
    json d = json::object();
    auto fields = duvaa_fields(*a.duvaa);
    for (std::size_t k = 0; k < 6; ++k) {
      d[std::string(kDuvaaKeys[k])] = *fields[k];
    }
    obj["duvaa"] = std::move(d);
  }
  return obj;
}

std::string join_columns(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (k) out += '\t';
    out += cols[k];
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

Category category_from_string(std::string_view name) {
  for (std::size_t k = 0; k < kCategoryNames.size(); ++k) {
    if (kCategoryNames[k] == name) return static_cast<Category>(k);
  }
  throw ArgumentError("unknown category '" + std::string(name) +
                      "' (expected aggression, grief or other)");
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const std::string_view s = trim(text);
  const int y = parse_digits(s, 0, 4, text);
  expect_char(s, 4, '-', text);
  const int mo = parse_digits(s, 5, 2, text);
  expect_char(s, 7, '-', text);
  const int d = parse_digits(s, 8, 2, text);
  expect_char(s, 10, 'T', text);
  const int h = parse_digits(s, 11, 2, text);
  expect_char(s, 13, ':', text);
  const int mi = parse_digits(s, 14, 2, text);
  expect_char(s, 16, ':', text);
  const int sec = parse_digits(s, 17, 2, text);
  std::size_t pos = 19;
  int millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t digits = 0;
    ++pos;
    while (pos + digits < s.size() && s[pos + digits] >= '0' &&
           s[pos + digits] <= '9') {
      ++digits;
    }
    if (digits == 0 || digits > 3) {
      throw ArgumentError("timestamp fraction must have 1-3 digits: '" +
                          std::string(text) + "'");
    }
    millis = parse_digits(s, pos, digits, text);
    for (std::size_t k = digits; k < 3; ++k) millis *= 10;
    pos += digits;
  }
  if (pos >= s.size()) {
    throw ArgumentError("timestamp lacks a zone designator: '" +
                        std::string(text) + "'");
  }
  int offset_minutes = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '-' ? -1 : 1;
    const int oh = parse_digits(s, pos + 1, 2, text);
    std::size_t p = pos + 3;
    if (p < s.size() && s[p] == ':') ++p;
    const int om = parse_digits(s, p, 2, text);
    if (oh > 23 || om > 59) {
      throw ArgumentError("invalid zone offset: '" + std::string(text) + "'");
    }
    offset_minutes = sign * (oh * 60 + om);
    pos = p + 2;
  } else {
    throw ArgumentError("timestamp lacks a zone designator: '" +
                        std::string(text) + "'");
  }
  if (pos != s.size()) {
    throw ArgumentError("trailing characters in timestamp: '" +
                        std::string(text) + "'");
  }
  const year_month_day ymd{year{y}, month{unsigned(mo)}, day{unsigned(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) {
    throw ArgumentError("timestamp out of range: '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} +
         milliseconds{millis} - minutes{offset_minutes};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  auto rest = t - day_point;
  const auto h = duration_cast<hours>(rest);
  rest -= h;
  const auto mi = duration_cast<minutes>(rest);
  rest -= mi;
  const auto sec = duration_cast<seconds>(rest);
  rest -= sec;
  const long long ms = rest.count();
  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02lld",
                        int(ymd.year()), unsigned(ymd.month()),
                        unsigned(ymd.day()), int(h.count()), int(mi.count()),
                        static_cast<long long>(sec.count()));
  std::string out(buf, std::size_t(n));
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03lld", ms);
    out += buf;
  }
  out += 'Z';
  return out;
}

void Codebook::add(std::string fine_code, Category category) {
  if (fine_code.empty()) throw ArgumentError("empty fine code");
  map_[std::move(fine_code)] = category;
}

bool Codebook::contains(std::string_view fine_code) const {
  return map_.find(fine_code) != map_.end();
}

Category Codebook::collapse(std::string_view fine_code) const {
  auto it = map_.find(fine_code);
  if (it == map_.end()) {
    throw ArgumentError("unknown fine code '" + std::string(fine_code) + "'");
  }
  return it->second;
}

Codebook load_codebook(std::istream& in) {
  Codebook cb;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) {
      throw ParseError("expected fine_code<TAB>category", lineno);
    }
    const std::string code(trim(cols[0]));
    if (code.empty()) throw ParseError("empty fine code", lineno);
    if (cb.contains(code)) {
      throw ParseError("duplicate fine code '" + code + "'", lineno);
    }
    try {
      cb.add(code, category_from_string(trim(cols[1])));
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return cb;
}

std::string write_codebook(const Codebook& cb) {
  std::string out;
  for (const auto& [code, cat] : cb.entries()) {
    out += code;
    out += '\t';
    out += to_string(cat);
    out += '\n';
  }
  return out;
}

Codebook default_codebook() {
  Codebook cb;
  for (const char* c : {"insults", "threats", "aggression", "bragging",
                        "hypervigilance", "authority-challenge"}) {
    cb.add(c, Category::aggression);
  }
  for (const char* c : {"distress", "sadness", "loneliness", "death"}) {
    cb.add(c, Category::grief);
  }
  for (const char* c : {"general-conversation", "women", "happiness"}) {
    cb.add(c, Category::other);
  }
  return cb;
}

const Tweet* LabeledCorpus::find(std::string_view id) const {
  for (const auto& t : tweets) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

CorpusFormat corpus_format_from_string(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "tsv") return CorpusFormat::tsv;
  throw ArgumentError("unknown corpus format '" + std::string(name) +
                      "' (expected jsonl or tsv)");
}

LabeledCorpus ingest_corpus(std::istream& source, CorpusFormat format,
                            const Codebook& codebook,
                            std::istream* annotations) {
  CorpusBuilder builder(codebook);
  auto read = [&](std::istream& in) {
    if (format == CorpusFormat::jsonl) {
      read_jsonl(in, builder);
    } else {
      read_tsv(in, builder);
    }
  };
  read(source);
  if (annotations) read(*annotations);
  return builder.finish();
}

std::vector<Annotation> read_annotations(std::istream& in, CorpusFormat format,
                                         const Codebook& codebook) {
  CorpusBuilder builder(codebook);
  if (format == CorpusFormat::jsonl) {
    read_jsonl(in, builder);
  } else {
    read_tsv(in, builder);
  }
  return builder.finish_annotations();
}

std::string write_annotations(const std::vector<Annotation>& annotations,
                              CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::jsonl) {
    for (const auto& a : annotations) {
      out += annotation_json(a).dump();
      out += '\n';
    }
    return out;
  }
  if (annotations.empty()) return out;
  out += join_columns(kAnnotationColumns) + '\n';
  for (const auto& a : annotations) {
    out += escape_tsv(a.tweet_id) + '\t' + escape_tsv(a.annotator_id) + '\t' +
           escape_tsv(a.fine_code);
    if (a.duvaa) {
      for (const auto* f : duvaa_fields(*a.duvaa)) out += '\t' + escape_tsv(*f);
    } else {
      for (int k = 0; k < 6; ++k) out += "\t\\N";
    }
    out += '\n';
  }
  return out;
}

std::string write_corpus(const LabeledCorpus& corpus, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::jsonl) {
    for (const auto& t : corpus.tweets) {
      json obj = {{"id", t.id},
                  {"author", t.author},
                  {"created_at", format_timestamp(t.created_at)},
                  {"text", t.text}};
      if (t.reply_to) obj["reply_to"] = *t.reply_to;
      out += obj.dump();
      out += '\n';
    }
  } else if (!corpus.tweets.empty()) {
    out += join_columns(kTweetColumns) + '\n';
    for (const auto& t : corpus.tweets) {
      out += escape_tsv(t.id) + '\t' + escape_tsv(t.author) + '\t' +
             format_timestamp(t.created_at) + '\t' + escape_tsv(t.text) +
             '\t' + escape_optional(t.reply_to) + '\n';
    }
  }
  out += write_annotations(corpus.annotations, format);
  return out;
}

LabeledCorpus window_filter(const LabeledCorpus& corpus, Timestamp start,
                            Timestamp end) {
  if (start > end) {
    throw ArgumentError("window start " + format_timestamp(start) +
                        " is after end " + format_timestamp(end));
  }
  LabeledCorpus out;
  out.codebook = corpus.codebook;
  std::unordered_set<std::string> kept;
  for (const auto& t : corpus.tweets) {
    if (start <= t.created_at && t.created_at < end) {
      kept.insert(t.id);
      out.tweets.push_back(t);
    }
  }
  for (const auto& a : corpus.annotations) {
    if (kept.count(a.tweet_id)) out.annotations.push_back(a);
  }
  return out;
}

void validate(const LabeledCorpus& corpus) {
  std::unordered_set<std::string> ids;
  for (const auto& t : corpus.tweets) {
    if (t.id.empty()) throw Error("tweet with empty id");
    if (t.text.empty()) throw Error("tweet '" + t.id + "' has empty text");
    if (!ids.insert(t.id).second) {
      throw Error("duplicate tweet id '" + t.id + "'");
    }
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& a : corpus.annotations) {
    if (!ids.count(a.tweet_id)) {
      throw Error("annotation references unknown tweet id '" + a.tweet_id +
                  "'");
    }
    if (!corpus.codebook.contains(a.fine_code)) {
      throw Error("fine code '" + a.fine_code + "' is not in the codebook");
    }
    if (!pairs.insert({a.tweet_id, a.annotator_id}).second) {
      throw Error("second annotation of tweet '" + a.tweet_id +
                  "' by annotator '" + a.annotator_id + "'");
    }
  }
}

}  // namespace streetlex
