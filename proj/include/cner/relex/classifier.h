#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cner/common/metrics.h"
#include "cner/relex/relation.h"

namespace cner::relex {

using LabelScores = std::array<double, kNumLabels>;

struct RelexMetadata {
  double lambda = 0.0;
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  std::string corpus_fingerprint;
  std::string created;  // ISO-8601 UTC
  int format_version = 1;
};

// Six one-vs-rest linear classifiers over string features. Immutable once
// built; safe for concurrent readers.
class RelexModel {
 public:
  RelexModel() = default;
  RelexModel(std::vector<std::string> vocabulary, std::vector<LabelScores> rows,
             LabelScores bias, RelexMetadata metadata);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const RelexMetadata& metadata() const { return metadata_; }
  const LabelScores& bias() const { return bias_; }
  std::optional<std::size_t> feature_index(std::string_view feature) const;
  double weight(std::size_t label, std::size_t feature) const { return rows_[feature][label]; }

  // w_k . x + b_k for each label; features outside the vocabulary are skipped.
  LabelScores score(const SparseFeatures& features) const;

  // "RELEX v1" text format. Byte-identical for identical models.
  std::string serialize() const;
  static RelexModel parse(std::string_view content);
  void save(const std::string& path) const;
  static RelexModel load(const std::string& path);

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<LabelScores> rows_;
  LabelScores bias_{};
  RelexMetadata metadata_;
};

struct RelexInstance {
  SparseFeatures features;
  RelationLabel label = RelationLabel::kNonRel;
};

std::string relex_fingerprint(const std::vector<RelexInstance>& instances);

struct TrainOptions {
  double lambda = 0.01;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
  // When set, receives one value per epoch: the summed regularized hinge
  // objective of the six classifiers, averaged over the steps of the epoch.
  std::vector<double>* objective_trace = nullptr;
};

// Stochastic subgradient descent with step 1/(lambda t). Throws
// kEmptyTrainingSet and kValidationError (lambda <= 0).
RelexModel train_relex(const std::vector<RelexInstance>& instances, const TrainOptions& options);

// Per-instance objective of one binary classifier with y in {-1, +1}:
// lambda/2 |w|^2 + max(0, 1 - y (w.x + b)), x given by its active indices.
double hinge_objective(const std::vector<double>& w, double b,
                       const std::vector<std::size_t>& x, int y, double lambda);
// Subgradient of hinge_objective, taking 0 for the hinge part at the kink.
void hinge_subgradient(const std::vector<double>& w, double b,
                       const std::vector<std::size_t>& x, int y, double lambda,
                       std::vector<double>& grad_w, double& grad_b);

// Exact ties involving NON-REL resolve to NON-REL, other ties to the lowest
// canonical index.
RelationLabel argmax_label(const LabelScores& scores);

struct Classification {
  RelationLabel label = RelationLabel::kNonRel;
  LabelScores scores{};
};

Classification classify_pair(const RelexModel& model, const SparseFeatures& features);

struct RelationInstance {
  MentionPair pair;
  RelationLabel label = RelationLabel::kNonRel;
  LabelScores scores{};
};

// NON-REL instances are kept; callers decide whether to surface them.
std::vector<RelationInstance> extract_relations(
    const text::Sentence& sentence, const std::vector<ner::EntityMention>& mentions,
    const RelexModel& model, std::size_t max_token_distance = kDefaultMaxTokenDistance);

struct RelexMetrics {
  std::array<PrfCounts, kNumLabels> per_label{};
  PrfCounts micro;  // substantive labels only
  double macro_f1 = 0.0;
  // confusion[gold][predicted]
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
  std::size_t total = 0;
  // Set when there is no substantive gold or predicted label, so micro
  // scores are 0/0 and reported as 0.
  bool micro_undefined = false;
};

// Throws kEmptyCorpus on empty input and kLengthMismatch on differing sizes.
RelexMetrics score_predictions(const std::vector<RelationLabel>& gold,
                               const std::vector<RelationLabel>& predicted);
RelexMetrics evaluate_relex(const RelexModel& model, const std::vector<RelexInstance>& corpus);

}  // namespace cner::relex
