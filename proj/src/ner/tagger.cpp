#include "cner/ner/tagger.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "cner/common/error.h"
#include "cner/common/util.h"
#include "cner/text/unicode.h"

namespace cner::ner {

namespace {

constexpr std::string_view kHeader = "NERTAG v1";
constexpr std::size_t kTags = BioTag::kCount;

std::size_t argmax(const TagScores& s) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < kTags; ++t)
    if (s[t] > s[best]) best = t;
  return best;
}

double margin_of(const TagScores& s, std::size_t best) {
  double second = -INFINITY;
  for (std::size_t t = 0; t < kTags; ++t)
    if (t != best) second = std::max(second, s[t]);
  return s[best] - second;
}

// Features of a sentence that do not depend on predicted tags, plus the
// lowercased words needed by the history features.
struct SentenceView {
  std::vector<std::vector<std::string>> base;
  std::vector<std::string> lower;
};

SentenceView prepare(const text::Sentence& sentence) {
  const std::size_t n = sentence.tokens.size();
  SentenceView v;
  v.lower.reserve(n);
  std::vector<std::u32string> lower32;
  lower32.reserve(n);
  for (const auto& tok : sentence.tokens) {
    lower32.push_back(text::lowercase(text::decode_utf8(tok.surface)));
    v.lower.push_back(text::encode_utf8(lower32.back()));
  }
  auto word_at = [&](long j) -> std::string {
    if (j < 0) return j == -1 ? "<s>" : "<s2>";
    if (j >= static_cast<long>(n)) return j == static_cast<long>(n) ? "</s>" : "</s2>";
    return v.lower[static_cast<std::size_t>(j)];
  };

  v.base.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = v.base[i];
    const std::u32string& w = lower32[i];
    std::u32string surface = text::decode_utf8(sentence.tokens[i].surface);
    f.push_back("w=" + v.lower[i]);
    f.push_back("shape=" + word_shape(sentence.tokens[i].surface));
    for (std::size_t k = 1; k <= 3 && k <= w.size(); ++k) {
      f.push_back("p" + std::to_string(k) + "=" + text::encode_utf8(w.substr(0, k)));
      f.push_back("s" + std::to_string(k) + "=" +
                  text::encode_utf8(w.substr(w.size() - k)));
    }
    f.push_back(!surface.empty() && text::is_upper(surface[0]) ? "cap=1" : "cap=0");
    f.push_back(i == 0 ? "first=1" : "first=0");
    const long li = static_cast<long>(i);
    f.push_back("w-2=" + word_at(li - 2));
    f.push_back("w-1=" + word_at(li - 1));
    f.push_back("w+1=" + word_at(li + 1));
    f.push_back("w+2=" + word_at(li + 2));
  }
  return v;
}

void add_history(std::vector<std::string>& f, const std::string& lower,
                 std::optional<BioTag> prev) {
  std::string pt = prev ? prev->str() : "<s>";
  f.push_back("pt=" + pt);
  f.push_back("pt_w=" + pt + "|" + lower);
}

[[noreturn]] void bad_model(const std::string& what, std::size_t line) {
  throw Error(ErrorCode::kModelFormat, "NERTAG: " + what, line);
}

}  // namespace

std::string word_shape(std::string_view word) {
  std::string shape;
  for (char32_t c : text::decode_utf8(word)) {
    char cls = text::is_upper(c)   ? 'X'
               : text::is_lower(c) ? 'x'
               : text::is_digit(c) ? 'd'
                                   : 'o';
    if (shape.empty() || shape.back() != cls) shape += cls;
  }
  return shape;
}

std::vector<std::string> token_features(const text::Sentence& sentence,
                                        std::size_t i, std::optional<BioTag> prev) {
  SentenceView v = prepare(sentence);
  std::vector<std::string> f = v.base.at(i);
  add_history(f, v.lower[i], prev);
  return f;
}

TaggerModel::TaggerModel(std::vector<std::string> vocabulary,
                         std::vector<TagScores> rows, TaggerMetadata metadata)
    : metadata_(std::move(metadata)) {
  if (vocabulary.size() != rows.size())
    throw Error(ErrorCode::kModelFormat, "vocabulary/weight size mismatch");
  std::vector<std::size_t> order(vocabulary.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return vocabulary[a] < vocabulary[b]; });
  vocabulary_.reserve(order.size());
  rows_.reserve(order.size());
  for (std::size_t k : order) {
    if (!vocabulary_.empty() && vocabulary_.back() == vocabulary[k])
      throw Error(ErrorCode::kModelFormat, "duplicate feature " + vocabulary[k]);
    index_.emplace(vocabulary[k], vocabulary_.size());
    vocabulary_.push_back(std::move(vocabulary[k]));
    rows_.push_back(rows[k]);
  }
}

std::optional<std::size_t> TaggerModel::feature_index(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TagScores TaggerModel::score(const std::vector<std::string>& features) const {
  TagScores s{};
  for (const auto& f : features) {
    auto it = index_.find(f);
    if (it == index_.end()) continue;
    const TagScores& row = rows_[it->second];
    for (std::size_t t = 0; t < kTags; ++t) s[t] += row[t];
  }
  return s;
}

std::string TaggerModel::serialize() const {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "format_version=" << metadata_.format_version << '\n';
  out << "seed=" << metadata_.seed << '\n';
  out << "epochs=" << metadata_.epochs << '\n';
  out << "corpus_fingerprint=" << metadata_.corpus_fingerprint << '\n';
  out << "created=" << metadata_.created << '\n';
  out << "tags " << kTags << '\n';
  for (std::size_t t = 0; t < kTags; ++t) out << BioTag::from_index(t).str() << '\n';
  out << "vocabulary " << vocabulary_.size() << '\n';
  for (const auto& f : vocabulary_) out << f << '\n';
  std::size_t nonzero = 0;
  for (const auto& row : rows_)
    for (double w : row) nonzero += w != 0.0;
  out << "weights " << nonzero << '\n';
  for (std::size_t t = 0; t < kTags; ++t)
    for (std::size_t f = 0; f < rows_.size(); ++f)
      if (rows_[f][t] != 0.0)
        out << t << '\t' << f << '\t' << format_double(rows_[f][t]) << '\n';
  out << "end\n";
  return out.str();
}

TaggerModel TaggerModel::parse(std::string_view content) {
  std::vector<std::string_view> lines = split(content, '\n');
  std::size_t pos = 0;
  auto next = [&]() -> std::string_view {
    if (pos >= lines.size()) bad_model("unexpected end of file", pos);
    return lines[pos++];
  };
  auto count_line = [&](std::string_view key) -> std::size_t {
    std::string_view line = next();
    long long n = 0;
    if (line.substr(0, key.size() + 1) != std::string(key) + " " ||
        !parse_int(line.substr(key.size() + 1), n) || n < 0)
      bad_model("expected '" + std::string(key) + " <count>'", pos);
    return static_cast<std::size_t>(n);
  };

  if (next() != kHeader) bad_model("missing header", pos);
  TaggerMetadata meta;
  for (std::string_view key : {"format_version", "seed", "epochs",
                               "corpus_fingerprint", "created"}) {
    std::string_view line = next();
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || line.substr(0, eq) != key)
      bad_model("expected " + std::string(key) + "=...", pos);
    std::string_view value = line.substr(eq + 1);
    long long n = 0;
    if (key == "corpus_fingerprint") {
      meta.corpus_fingerprint = value;
    } else if (key == "created") {
      meta.created = value;
    } else if (!parse_int(value, n) || n < 0) {
      bad_model("bad integer for " + std::string(key), pos);
    } else if (key == "format_version") {
      meta.format_version = static_cast<int>(n);
    } else if (key == "seed") {
      meta.seed = static_cast<std::uint64_t>(n);
    } else {
      meta.epochs = static_cast<std::size_t>(n);
    }
  }
  if (meta.format_version != 1) bad_model("unsupported format_version", pos);

  if (count_line("tags") != kTags) bad_model("tag set must have 15 tags", pos);
  for (std::size_t t = 0; t < kTags; ++t)
    if (next() != BioTag::from_index(t).str()) bad_model("unexpected tag order", pos);

  std::size_t vocab_size = count_line("vocabulary");
  std::vector<std::string> vocab;
  vocab.reserve(vocab_size);
  for (std::size_t f = 0; f < vocab_size; ++f) {
    std::string_view feature = next();
    if (feature.empty()) bad_model("empty feature", pos);
    if (!vocab.empty() && !(vocab.back() < feature))
      bad_model("vocabulary not strictly sorted", pos);
    vocab.emplace_back(feature);
  }

  std::vector<TagScores> rows(vocab_size, TagScores{});
  std::size_t n_weights = count_line("weights");
  for (std::size_t k = 0; k < n_weights; ++k) {
    auto parts = split(next(), '\t');
    long long tag = 0, feat = 0;
    double w = 0;
    if (parts.size() != 3 || !parse_int(parts[0], tag) || !parse_int(parts[1], feat) ||
        !parse_double(parts[2], w))
      bad_model("malformed weight triple", pos);
    if (tag < 0 || static_cast<std::size_t>(tag) >= kTags || feat < 0 ||
        static_cast<std::size_t>(feat) >= vocab_size)
      bad_model("weight index out of range", pos);
    rows[static_cast<std::size_t>(feat)][static_cast<std::size_t>(tag)] = w;
  }
  if (next() != "end") bad_model("missing end marker", pos);
  return TaggerModel(std::move(vocab), std::move(rows), std::move(meta));
}

void TaggerModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << serialize();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

TaggerModel TaggerModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string corpus_fingerprint(const std::vector<TaggedSentence>& corpus) {
  Fingerprint fp;
  for (const auto& ex : corpus) {
    for (std::size_t i = 0; i < ex.sentence.tokens.size(); ++i) {
      fp.field(ex.sentence.tokens[i].surface);
      fp.field(i < ex.gold.size() ? ex.gold[i].str() : "");
    }
    fp.field("\n");
  }
  return fp.hex();
}

TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus,
                         std::size_t epochs, std::uint64_t seed) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty training corpus");
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& ex = corpus[s];
    if (ex.gold.size() != ex.sentence.tokens.size())
      throw Error(ErrorCode::kIllFormedGold,
                  "sentence " + std::to_string(s) + ": tag/token count mismatch");
    if (first_ill_formed(ex.gold) >= 0)
      throw Error(ErrorCode::kIllFormedGold,
                  "sentence " + std::to_string(s) + ": ill-formed BIO sequence");
  }

  std::vector<SentenceView> views;
  views.reserve(corpus.size());
  for (const auto& ex : corpus) views.push_back(prepare(ex.sentence));

  // Averaged perceptron with lazy accumulation: totals[f] holds the weight
  // sum up to stamps[f]; the average is taken over all token steps.
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> names;
  std::vector<TagScores> weights, totals;
  std::vector<std::array<std::uint64_t, kTags>> stamps;
  std::uint64_t step = 0;

  auto feature_id = [&](const std::string& f) -> std::size_t {
    auto [it, inserted] = index.emplace(f, names.size());
    if (inserted) {
      names.push_back(f);
      weights.push_back({});
      totals.push_back({});
      stamps.push_back({});
    }
    return it->second;
  };
  auto bump = [&](std::size_t f, std::size_t tag, double delta) {
    totals[f][tag] += static_cast<double>(step - stamps[f][tag]) * weights[f][tag];
    stamps[f][tag] = step;
    weights[f][tag] += delta;
  };

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> ids;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t s : order) {
      const auto& view = views[s];
      const auto& gold = corpus[s].gold;
      std::optional<BioTag> prev;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        std::vector<std::string> feats = view.base[i];
        add_history(feats, view.lower[i], prev);
        ids.clear();
        TagScores scores{};
        for (const auto& f : feats) {
          std::size_t id = feature_id(f);
          ids.push_back(id);
          for (std::size_t t = 0; t < kTags; ++t) scores[t] += weights[id][t];
        }
        ++step;
        std::size_t guess = argmax(scores);
        std::size_t truth = gold[i].index();
        if (guess != truth) {
          for (std::size_t id : ids) {
            bump(id, truth, 1.0);
            bump(id, guess, -1.0);
          }
        }
        prev = BioTag::from_index(guess);
      }
    }
  }

  std::vector<std::string> vocab;
  std::vector<TagScores> rows;
  for (std::size_t f = 0; f < names.size(); ++f) {
    TagScores avg{};
    bool nonzero = false;
    for (std::size_t t = 0; t < kTags; ++t) {
      double total = totals[f][t] + static_cast<double>(step - stamps[f][t]) * weights[f][t];
      avg[t] = step ? total / static_cast<double>(step) : 0.0;
      nonzero = nonzero || avg[t] != 0.0;
    }
    if (nonzero) {
      vocab.push_back(names[f]);
      rows.push_back(avg);
    }
  }

  TaggerMetadata meta;
  meta.seed = seed;
  meta.epochs = epochs;
  meta.corpus_fingerprint = corpus_fingerprint(corpus);
  meta.created = format_utc(reproducible_epoch_seconds());
  return TaggerModel(std::move(vocab), std::move(rows), std::move(meta));
}

TagPrediction predict_tags(const TaggerModel& model, const text::Sentence& sentence) {
  SentenceView view = prepare(sentence);
  TagPrediction out;
  std::optional<BioTag> prev;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    std::vector<std::string> feats = view.base[i];
    add_history(feats, view.lower[i], prev);
    TagScores scores = model.score(feats);
    std::size_t best = argmax(scores);
    out.tags.push_back(BioTag::from_index(best));
    out.margins.push_back(margin_of(scores, best));
    prev = out.tags.back();
  }
  return out;
}

std::vector<EntityMention> tag_sentence(const TaggerModel& model,
                                        const text::Sentence& sentence,
                                        const std::string& extractor_id) {
  TagPrediction pred = predict_tags(model, sentence);
  auto mentions = decode_bio(pred.tags, sentence, extractor_id, 1.0);
  for (auto& m : mentions) {
    double margin = 0.0;
    for (std::size_t i = m.first_token; i <= m.last_token; ++i) margin += pred.margins[i];
    double conf = 1.0 / (1.0 + std::exp(-margin));
    m.confidence = std::clamp(conf, 0.0, 1.0);
  }
  return mentions;
}

}  // namespace cner::ner
