#include "cner/relex/classifier.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "cner/common/error.h"
#include "cner/common/util.h"

namespace cner::relex {

namespace {

constexpr std::string_view kHeader = "RELEX v1";
constexpr std::size_t kNonRelIndex = static_cast<std::size_t>(RelationLabel::kNonRel);

[[noreturn]] void bad_model(const std::string& what, std::size_t line) {
  throw Error(ErrorCode::kModelFormat, "RELEX: " + what, line);
}

}  // namespace

RelexModel::RelexModel(std::vector<std::string> vocabulary, std::vector<LabelScores> rows,
                       LabelScores bias, RelexMetadata metadata)
    : bias_(bias), metadata_(std::move(metadata)) {
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

std::optional<std::size_t> RelexModel::feature_index(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabelScores RelexModel::score(const SparseFeatures& features) const {
  LabelScores s = bias_;
  for (const auto& f : features) {
    auto it = index_.find(f);
    if (it == index_.end()) continue;
    for (std::size_t k = 0; k < kNumLabels; ++k) s[k] += rows_[it->second][k];
  }
  return s;
}

std::string RelexModel::serialize() const {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "format_version=" << metadata_.format_version << '\n';
  out << "lambda=" << format_double(metadata_.lambda) << '\n';
  out << "epochs=" << metadata_.epochs << '\n';
  out << "seed=" << metadata_.seed << '\n';
  out << "corpus_fingerprint=" << metadata_.corpus_fingerprint << '\n';
  out << "created=" << metadata_.created << '\n';
  out << "labels " << kNumLabels << '\n';
  for (auto label : kAllLabels) out << to_string(label) << '\n';
  out << "vocabulary " << vocabulary_.size() << '\n';
  for (const auto& f : vocabulary_) out << f << '\n';
  std::size_t nonzero = 0;
  for (const auto& row : rows_)
    for (double w : row) nonzero += w != 0.0;
  out << "weights " << nonzero << '\n';
  for (std::size_t k = 0; k < kNumLabels; ++k)
    for (std::size_t f = 0; f < rows_.size(); ++f)
      if (rows_[f][k] != 0.0) out << k << '\t' << f << '\t' << format_double(rows_[f][k]) << '\n';
  out << "bias " << kNumLabels << '\n';
  for (double b : bias_) out << format_double(b) << '\n';
  out << "end\n";
  return out.str();
}

RelexModel RelexModel::parse(std::string_view content) {
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
  auto value_of = [&](std::string_view key) -> std::string_view {
    std::string_view line = next();
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || line.substr(0, eq) != key)
      bad_model("expected " + std::string(key) + "=...", pos);
    return line.substr(eq + 1);
  };
  auto int_of = [&](std::string_view key) -> long long {
    long long n = 0;
    if (!parse_int(value_of(key), n) || n < 0) bad_model("bad integer for " + std::string(key), pos);
    return n;
  };

  if (next() != kHeader) bad_model("missing header", pos);
  RelexMetadata meta;
  meta.format_version = static_cast<int>(int_of("format_version"));
  if (meta.format_version != 1) bad_model("unsupported format_version", pos);
  if (!parse_double(value_of("lambda"), meta.lambda) || !(meta.lambda > 0))
    bad_model("bad lambda", pos);
  meta.epochs = static_cast<std::size_t>(int_of("epochs"));
  meta.seed = static_cast<std::uint64_t>(int_of("seed"));
  meta.corpus_fingerprint = value_of("corpus_fingerprint");
  meta.created = value_of("created");

  if (count_line("labels") != kNumLabels) bad_model("label set must have 6 labels", pos);
  for (auto label : kAllLabels)
    if (next() != to_string(label)) bad_model("unexpected label order", pos);

  std::size_t vocab_size = count_line("vocabulary");
  std::vector<std::string> vocab;
  vocab.reserve(vocab_size);
  for (std::size_t f = 0; f < vocab_size; ++f) {
    std::string_view feature = next();
    if (feature.empty()) bad_model("empty feature", pos);
    if (!vocab.empty() && !(vocab.back() < feature)) bad_model("vocabulary not strictly sorted", pos);
    vocab.emplace_back(feature);
  }

  std::vector<LabelScores> rows(vocab_size, LabelScores{});
  std::size_t n_weights = count_line("weights");
  for (std::size_t i = 0; i < n_weights; ++i) {
    auto parts = split(next(), '\t');
    long long label = 0, feat = 0;
    double w = 0;
    if (parts.size() != 3 || !parse_int(parts[0], label) || !parse_int(parts[1], feat) ||
        !parse_double(parts[2], w))
      bad_model("malformed weight triple", pos);
    if (label < 0 || static_cast<std::size_t>(label) >= kNumLabels || feat < 0 ||
        static_cast<std::size_t>(feat) >= vocab_size)
      bad_model("weight index out of range", pos);
    rows[static_cast<std::size_t>(feat)][static_cast<std::size_t>(label)] = w;
  }

  if (count_line("bias") != kNumLabels) bad_model("expected 6 bias values", pos);
  LabelScores bias{};
  for (auto& b : bias)
    if (!parse_double(next(), b)) bad_model("malformed bias", pos);
  if (next() != "end") bad_model("missing end marker", pos);
  return RelexModel(std::move(vocab), std::move(rows), bias, std::move(meta));
}

void RelexModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << serialize();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

RelexModel RelexModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string relex_fingerprint(const std::vector<RelexInstance>& instances) {
  Fingerprint fp;
  for (const auto& inst : instances) {
    for (const auto& f : inst.features) fp.field(f);
    fp.field(to_string(inst.label));
    fp.field("\n");
  }
  return fp.hex();
}

double hinge_objective(const std::vector<double>& w, double b,
                       const std::vector<std::size_t>& x, int y, double lambda) {
  double norm = 0, dot = b;
  for (double v : w) norm += v * v;
  for (std::size_t j : x) dot += w[j];
  return lambda / 2 * norm + std::max(0.0, 1.0 - y * dot);
}

void hinge_subgradient(const std::vector<double>& w, double b,
                       const std::vector<std::size_t>& x, int y, double lambda,
                       std::vector<double>& grad_w, double& grad_b) {
  double dot = b;
  for (std::size_t j : x) dot += w[j];
  grad_w.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] = lambda * w[j];
  grad_b = 0;
  if (y * dot < 1.0) {
    for (std::size_t j : x) grad_w[j] -= y;
    grad_b = -y;
  }
}

RelexModel train_relex(const std::vector<RelexInstance>& instances, const TrainOptions& options) {
  if (instances.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no relation instances");
  if (!(options.lambda > 0)) throw Error(ErrorCode::kValidationError, "lambda must be positive");

  // Column ids in sorted feature order; active columns per instance.
  std::map<std::string, std::size_t> columns;
  for (const auto& inst : instances)
    for (const auto& f : inst.features) columns.emplace(f, 0);
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (auto& [name, id] : columns) {
    id = names.size();
    names.push_back(name);
  }
  std::vector<std::vector<std::size_t>> xs;
  xs.reserve(instances.size());
  for (const auto& inst : instances) {
    std::vector<std::size_t> x;
    for (const auto& f : inst.features) x.push_back(columns.at(f));
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    xs.push_back(std::move(x));
  }

  const std::size_t n = instances.size();
  const std::size_t dim = names.size();
  const double lambda = options.lambda;
  // w_k = scale * v[k]; the shrink factor is shared by all six classifiers.
  std::vector<std::vector<double>> v(kNumLabels, std::vector<double>(dim, 0.0));
  LabelScores bias{};
  double scale = 1.0;
  auto y_of = [&](std::size_t i, std::size_t k) {
    return index_of(instances[i].label) == k ? 1 : -1;
  };
  auto objective = [&]() {
    double total = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      double norm = 0;
      for (double a : v[k]) norm += a * a;
      double loss = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double dot = 0;
        for (std::size_t j : xs[i]) dot += v[k][j];
        loss += std::max(0.0, 1.0 - y_of(i, k) * (scale * dot + bias[k]));
      }
      total += lambda / 2 * scale * scale * norm + loss / static_cast<double>(n);
    }
    return total;
  };

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle_indices(order, rng);
    double epoch_objective = 0;
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      std::array<bool, kNumLabels> violated{};
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        double dot = 0;
        for (std::size_t j : xs[i]) dot += v[k][j];
        violated[k] = y_of(i, k) * (scale * dot + bias[k]) < 1.0;
      }
      double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        for (auto& row : v) std::fill(row.begin(), row.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        if (!violated[k]) continue;
        double step = eta * y_of(i, k);
        for (std::size_t j : xs[i]) v[k][j] += step / scale;
        bias[k] += step;
      }
      if (scale < 1e-9) {
        for (auto& row : v)
          for (double& a : row) a *= scale;
        scale = 1.0;
      }
      if (options.objective_trace) epoch_objective += objective();
    }
    if (options.objective_trace)
      options.objective_trace->push_back(epoch_objective / static_cast<double>(n));
  }

  std::vector<std::string> vocab;
  std::vector<LabelScores> rows;
  for (std::size_t j = 0; j < dim; ++j) {
    LabelScores row{};
    bool nonzero = false;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      row[k] = scale * v[k][j];
      nonzero = nonzero || row[k] != 0.0;
    }
    if (nonzero) {
      vocab.push_back(names[j]);
      rows.push_back(row);
    }
  }
  RelexMetadata meta;
  meta.lambda = lambda;
  meta.epochs = options.epochs;
  meta.seed = options.seed;
  meta.corpus_fingerprint = relex_fingerprint(instances);
  meta.created = format_utc(reproducible_epoch_seconds());
  return RelexModel(std::move(vocab), std::move(rows), bias, std::move(meta));
}

RelationLabel argmax_label(const LabelScores& scores) {
  double best = *std::max_element(scores.begin(), scores.end());
  if (scores[kNonRelIndex] == best) return RelationLabel::kNonRel;
  for (std::size_t k = 0; k < kNumLabels; ++k)
    if (scores[k] == best) return kAllLabels[k];
  return RelationLabel::kNonRel;
}

Classification classify_pair(const RelexModel& model, const SparseFeatures& features) {
  Classification c;
  c.scores = model.score(features);
  c.label = argmax_label(c.scores);
  return c;
}

std::vector<RelationInstance> extract_relations(const text::Sentence& sentence,
                                                const std::vector<ner::EntityMention>& mentions,
                                                const RelexModel& model,
                                                std::size_t max_token_distance) {
  std::vector<RelationInstance> out;
  for (auto& pair : generate_pairs(sentence, mentions, max_token_distance)) {
    Classification c = classify_pair(model, extract_features(pair, sentence, mentions));
    out.push_back({std::move(pair), c.label, c.scores});
  }
  return out;
}

RelexMetrics score_predictions(const std::vector<RelationLabel>& gold,
                               const std::vector<RelationLabel>& predicted) {
  if (gold.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty evaluation corpus");
  if (gold.size() != predicted.size())
    throw Error(ErrorCode::kLengthMismatch, "gold/prediction count mismatch");
  RelexMetrics m;
  m.total = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::size_t g = index_of(gold[i]), p = index_of(predicted[i]);
    ++m.confusion[g][p];
    if (g == p) {
      ++m.per_label[g].tp;
    } else {
      ++m.per_label[p].fp;
      ++m.per_label[g].fn;
    }
  }
  double f1_sum = 0;
  for (std::size_t k = 0; k < kNumSubstantiveLabels; ++k) {
    m.micro += m.per_label[k];
    f1_sum += m.per_label[k].f1();
  }
  m.macro_f1 = f1_sum / static_cast<double>(kNumSubstantiveLabels);
  m.micro_undefined = m.micro.tp + m.micro.fp + m.micro.fn == 0;
  return m;
}

RelexMetrics evaluate_relex(const RelexModel& model, const std::vector<RelexInstance>& corpus) {
  std::vector<RelationLabel> gold, predicted;
  for (const auto& inst : corpus) {
    gold.push_back(inst.label);
    predicted.push_back(classify_pair(model, inst.features).label);
  }
  return score_predictions(gold, predicted);
}

}  // namespace cner::relex
