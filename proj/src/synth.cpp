#include "streetlex/synth.hpp"

#include <array>
#include <string_view>

#include "streetlex/util.hpp"

namespace streetlex {

namespace {

constexpr SynthWord kVocabulary[] = {
    {"opp", "N", "enemy", "aggression"},
    {"opps", "N", "enemies", "aggression"},
    {"smoke", "V", "fight", "aggression"},
    {"slide", "V", "attack", "aggression"},
    {"drill", "V", "shoot", "aggression"},
    {"pressure", "N", "threat", "aggression"},
    {"glock", "N", "gun", "aggression"},
    {"spin", "V", "return", "aggression"},
    {"bodies", "N", "killings", "aggression"},
    {"lacking", "A", "unprepared", "aggression"},

    {"rip", "!", "rest", "grief"},
    {"miss", "V", "miss", "grief"},
    {"gone", "A", "gone", "grief"},
    {"4ever", "R", "forever", "grief"},
    {"heaven", "N", "heaven", "grief"},
    {"tears", "N", "tears", "grief"},
    {"hurtin", "V", "hurting", "grief"},
    {"pain", "N", "pain", "grief"},
    {"ripbro", "N", "brother", "grief"},
    {"lost", "V", "lost", "grief"},

    {"lol", "!", "laugh", "other"},
    {"shorty", "N", "girl", "other"},
    {"bae", "N", "baby", "other"},
    {"party", "N", "party", "other"},
    {"guap", "N", "money", "other"},
    {"fresh", "A", "fresh", "other"},
    {"chill", "V", "relax", "other"},
    {"vibes", "N", "feelings", "other"},
    {"food", "N", "food", "other"},
    {"game", "N", "game", "other"},

    {"u", "O", "you", ""},
    {"da", "D", "the", ""},
    {"dat", "D", "that", ""},
    {"dis", "D", "this", ""},
    {"finna", "V", "going", ""},
    {"gotta", "V", "must", ""},
    {"bro", "N", "brother", ""},
    {"lil", "A", "little", ""},
    {"wit", "P", "with", ""},
    {"n", "&", "and", ""},
    {"jus", "R", "just", ""},
    {"we", "O", "we", ""},
    {"yall", "O", "you", ""},
    {"2day", "N", "today", ""},
};

constexpr std::string_view kLexicon = R"(# word	pleasantness	activation	imagery
enemy	1.2	2.6	2.0
enemies	1.2	2.5	1.9
fight	1.3	2.9	2.4
attack	1.1	2.9	2.2
shoot	1.2	2.8	2.6
threat	1.1	2.5	1.6
gun	1.3	2.6	3.0
return	1.9	1.8	1.4
killings	1.0	2.7	2.4
unprepared	1.4	1.9	1.2
rest	2.2	1.2	1.8
miss	1.5	1.5	1.3
gone	1.4	1.3	1.4
forever	2.0	1.5	1.3
heaven	2.8	1.6	2.2
tears	1.2	1.9	2.7
hurting	1.1	2.2	1.8
pain	1.0	2.3	2.0
brother	2.5	1.6	2.5
lost	1.2	1.5	1.5
laugh	2.9	2.6	2.3
girl	2.6	1.9	2.8
baby	2.7	1.8	2.9
party	2.8	2.8	2.5
money	2.5	2.1	2.7
fresh	2.6	2.0	2.0
relax	2.7	1.2	1.9
feelings	2.1	1.9	1.3
food	2.6	1.8	2.9
game	2.5	2.3	2.2
you	2.0	1.7	1.2
the	2.0	1.4	1.0
that	2.0	1.4	1.0
this	2.0	1.4	1.0
going	2.0	2.1	1.3
must	1.8	2.0	1.0
little	2.0	1.4	1.8
with	2.1	1.5	1.0
and	2.0	1.4	1.0
just	2.0	1.5	1.0
we	2.1	1.6	1.3
today	2.1	1.8	1.5
sad	1.0	1.3	1.7
happy	3.0	2.0	2.0
:(	1.2	1.6	1.4
:)	2.8	1.9	1.6
:'(	1.1	1.8	1.6
)";

constexpr std::array<const char*, 3> kHashtags[] = {
    {"#GBE", "#300", "#oblock"},
    {"#RIPLilB", "#LLJoe", "#FlyHigh"},
    {"#TurnUp", "#Weekend", "#Blessed"},
};

constexpr std::array<const char*, 3> kEmoticons[] = {
    {":@", "\xF0\x9F\x98\xA4", "\xF0\x9F\x92\xAF"},
    {":(", ":'(", "\xF0\x9F\x98\xA2"},
    {":)", ":D", "\xF0\x9F\x98\x82"},
};

constexpr const char* kAuthors[] = {"lilsosa300", "tyquanGBE", "bigmoe_",
                                    "ka_lo", "dreezy4ever", "shontaeee"};

template <typename T, std::size_t N>
const T& pick(const T (&arr)[N], Rng& rng) {
  return arr[rng.below(N)];
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

std::vector<const SynthWord*> words_in(std::string_view group) {
  std::vector<const SynthWord*> out;
  for (const auto& w : kVocabulary) {
    if (group == w.group) out.push_back(&w);
  }
  return out;
}

std::vector<std::string> codes_for(const Codebook& cb, Category c) {
  std::vector<std::string> out;
  for (const auto& [code, cat] : cb.entries()) {
    if (cat == c) out.push_back(code);
  }
  return out;
}

std::string random_handle(Rng& rng) {
  static constexpr std::string_view kChars =
      "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string s;
  for (int i = 0; i < 6; ++i) s += kChars[rng.below(kChars.size())];
  return s;
}

TaggedSentence make_sentence(
    const std::vector<std::pair<std::string, std::string>>& words,
    Domain domain) {
  TaggedSentence s;
  s.domain = domain;
  std::size_t pos = 0;
  for (const auto& [surface, tag] : words) {
    Token t = make_token(surface);
    const std::size_t len = t.span.end, bytes = t.byte_span.end;
    t.span = {pos, pos + len};
    t.byte_span = {pos, pos + bytes};
    pos += len + 1;
    s.tokens.push_back(std::move(t));
    s.tags.push_back(tag);
  }
  return s;
}

}  // namespace

std::span<const SynthWord> synth_vocabulary() { return kVocabulary; }

LabeledCorpus synth_corpus(const SynthOptions& o) {
  Rng rng(o.seed);
  LabeledCorpus corpus;
  corpus.codebook = default_codebook();
  const auto fillers = words_in("");

  std::vector<Category> labels;
  for (Category c : kCategories) labels.insert(labels.end(), o.tweets_per_class, c);
  rng.shuffle(labels);

  const Timestamp start = parse_timestamp("2014-03-28T00:00:00Z");
  const std::uint64_t window_ms = 14ull * 24 * 3600 * 1000;
  std::vector<Timestamp> times;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    times.push_back(start + std::chrono::milliseconds(rng.below(window_ms)));
  }
  std::sort(times.begin(), times.end());

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Category c = labels[i];
    const auto ci = static_cast<std::size_t>(c);
    const auto own = words_in(to_string(c));
    std::vector<std::string> words;
    const std::size_t planted = 2 + rng.below(2);
    for (std::size_t k = 0; k < planted; ++k) words.push_back(pick(own, rng)->surface);
    const std::size_t filler = 1 + rng.below(3);
    for (std::size_t k = 0; k < filler; ++k) words.push_back(pick(fillers, rng)->surface);
    if (rng.uniform() < o.noise) {
      const Category other = kCategories[(ci + 1 + rng.below(2)) % 3];
      words.push_back(pick(words_in(to_string(other)), rng)->surface);
    }
    rng.shuffle(words);
    if (rng.uniform() < 0.3) {
      words.insert(words.begin(), "@" + std::string(pick(kAuthors, rng)));
    }
    if (rng.uniform() < 0.5) words.push_back(kHashtags[ci][rng.below(3)]);
    if (rng.uniform() < 0.5) words.push_back(kEmoticons[ci][rng.below(3)]);
    if (rng.uniform() < 0.15) words.push_back("http://t.co/" + random_handle(rng));

    Tweet t;
    t.id = "t" + std::to_string(1000 + i);
    t.author = pick(kAuthors, rng);
    t.created_at = times[i];
    for (std::size_t k = 0; k < words.size(); ++k) {
      t.text += (k ? " " : "") + words[k];
    }
    if (i > 0 && rng.uniform() < 0.1) {
      t.reply_to = corpus.tweets[rng.below(i)].id;
    }
    corpus.tweets.push_back(std::move(t));

    const auto codes = codes_for(corpus.codebook, c);
    corpus.annotations.push_back(
        {corpus.tweets.back().id, "a1", pick(codes, rng), std::nullopt});
    Category second = c;
    if (rng.uniform() >= o.agreement) {
      second = kCategories[(ci + 1 + rng.below(2)) % 3];
    }
    corpus.annotations.push_back({corpus.tweets.back().id, "a2",
                                  pick(codes_for(corpus.codebook, second), rng),
                                  std::nullopt});
  }
  return corpus;
}

std::vector<ParallelPair> synth_parallel(const SynthOptions& o) {
  Rng rng(o.seed + 1);
  std::vector<ParallelPair> out;
  for (std::size_t i = 0; i < o.parallel_pairs; ++i) {
    ParallelPair p;
    const std::size_t len = 3 + rng.below(5);
    for (std::size_t k = 0; k < len; ++k) {
      const auto& w = pick(kVocabulary, rng);
      p.source.emplace_back(w.surface);
      p.gloss.emplace_back(w.gloss);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TaggedSentence> synth_tagged(const SynthOptions& o) {
  Rng rng(o.seed + 2);
  using Slot = std::vector<const char*>;
  const Slot det = {"the", "a", "this", "that"};
  const Slot adj = {"strong", "cold", "new", "old", "quiet"};
  const Slot noun = {"wind", "storm", "door", "man", "city",
                     "news", "report", "council", "glass", "candle"};
  const Slot verb = {"blow", "open", "close", "read", "watch", "build"};
  const Slot prep = {"in", "on", "at", "with"};
  const Slot pron = {"he", "she", "they", "we"};
  const Slot adv = {"slowly", "today", "again"};

  std::vector<TaggedSentence> out;
  for (std::size_t i = 0; i < o.tagged_per_domain; ++i) {
    std::vector<std::pair<std::string, std::string>> w;
    const char* v = rng.uniform() < 0.4 ? "blow" : pick(verb, rng);
    if (rng.below(2) == 0) {
      w = {{pick(det, rng), "D"}, {pick(adj, rng), "A"},
           {pick(noun, rng), "N"}, {"will", "V"},
           {v, "V"},               {pick(det, rng), "D"},
           {pick(noun, rng), "N"}};
    } else {
      w = {{pick(pron, rng), "O"}, {v, "V"},
           {pick(det, rng), "D"},  {pick(noun, rng), "N"},
           {pick(prep, rng), "P"}, {pick(det, rng), "D"},
           {pick(noun, rng), "N"}, {pick(adv, rng), "R"}};
    }
    w.push_back({".", ","});
    out.push_back(make_sentence(w, Domain::source));
  }

  for (std::size_t i = 0; i < o.tagged_per_domain; ++i) {
    std::vector<std::pair<std::string, std::string>> w;
    if (rng.uniform() < 0.3) w.push_back({"@" + random_handle(rng), "@"});
    const std::size_t len = 3 + rng.below(4);
    for (std::size_t k = 0; k < len; ++k) {
      const auto& v = pick(kVocabulary, rng);
      w.push_back({v.surface, v.tag});
    }
    if (rng.uniform() < 0.4) {
      const std::size_t at = rng.below(w.size() + 1);
      w.insert(w.begin() + std::ptrdiff_t(at), {{"dat", "D"}, {"blow", "N"}});
    }
    if (rng.uniform() < 0.4) {
      w.push_back({kHashtags[rng.below(3)][rng.below(3)], "#"});
    }
    if (rng.uniform() < 0.4) {
      w.push_back({kEmoticons[rng.below(3)][rng.below(3)], "E"});
    }
    if (rng.uniform() < 0.1) w.push_back({"http://t.co/" + random_handle(rng), "U"});
    out.push_back(make_sentence(w, Domain::target));
  }
  return out;
}

std::string synth_lexicon_text() { return std::string(kLexicon); }

void write_fixtures(const std::filesystem::path& dir, const SynthOptions& o) {
  LabeledCorpus corpus = synth_corpus(o);
  const auto annotations = std::move(corpus.annotations);
  corpus.annotations.clear();
  write_file_atomic(dir / "tweets.jsonl", write_corpus(corpus, CorpusFormat::jsonl));
  write_file_atomic(dir / "annotations.jsonl",
                    write_annotations(annotations, CorpusFormat::jsonl));
  write_file_atomic(dir / "codebook.tsv",
                    "# partial reconstruction: fine code -> category\n" +
                        write_codebook(corpus.codebook));

  std::string parallel;
  for (const auto& p : synth_parallel(o)) {
    for (std::size_t k = 0; k < p.source.size(); ++k) {
      parallel += (k ? " " : "") + p.source[k];
    }
    parallel += '\t';
    for (std::size_t k = 0; k < p.gloss.size(); ++k) {
      parallel += (k ? " " : "") + p.gloss[k];
    }
    parallel += '\n';
  }
  write_file_atomic(dir / "parallel.tsv", parallel);
  const auto tagged = synth_tagged(o);
  write_file_atomic(dir / "tagged.tsv", write_tagged_corpus(tagged));
  write_file_atomic(dir / "lexicon.tsv", synth_lexicon_text());

  write_file_atomic(dir / "pipeline.ini", R"(# Synthetic fixture run. Paths are relative to this file.
[paths]
tweets = tweets.jsonl
annotations = annotations.jsonl
codebook = codebook.tsv
tagged = tagged.tsv
parallel = parallel.tsv
lexicon = lexicon.tsv
out_dir = out

[corpus]
format = jsonl
gold_annotator = a1

[tagger]
epochs = 10
seed = 1
split = 0.8
augment = true

[align]
iterations = 10
tau = 0.5
min_count = 2
use_null = true

[classifier]
lambda = 0.001
epochs = 50
seed = 1
lexical = true
pos = true
emoticon_hashtag = true
affect = true
glossary = true
class_weights = 1,1,1

[eval]
folds = 5
seed = 1
test_ratio = 0.3
)");
}

}  // namespace streetlex
