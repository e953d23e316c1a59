#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cner/ner/bio.h"

namespace cner::ner {

struct TaggerMetadata {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::string corpus_fingerprint;
  std::string created;  // ISO-8601 UTC
  int format_version = 1;
};

using TagScores = std::array<double, BioTag::kCount>;

// Averaged-perceptron weights over string features. Immutable once built;
// safe for concurrent readers.
class TaggerModel {
 public:
  TaggerModel() = default;
  // `rows[f]` holds the weights of vocabulary[f] for every tag. Features are
  // re-sorted so that the serialized form is canonical.
  TaggerModel(std::vector<std::string> vocabulary, std::vector<TagScores> rows,
              TaggerMetadata metadata);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const TaggerMetadata& metadata() const { return metadata_; }
  std::optional<std::size_t> feature_index(std::string_view feature) const;
  double weight(std::size_t tag, std::size_t feature) const {
    return rows_[feature][tag];
  }

  // Sum of weight rows for the active features; unknown features are skipped.
  TagScores score(const std::vector<std::string>& features) const;

  // "NERTAG v1" text format. Byte-identical for identical models.
  std::string serialize() const;
  static TaggerModel parse(std::string_view content);
  void save(const std::string& path) const;
  static TaggerModel load(const std::string& path);

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<TagScores> rows_;
  TaggerMetadata metadata_;
};

struct TaggedSentence {
  text::Sentence sentence;
  TagSequence gold;
};

// Feature strings for token i given the previously predicted tag (nullopt
// at the sentence start).
std::vector<std::string> token_features(const text::Sentence& sentence,
                                        std::size_t i, std::optional<BioTag> prev);

// Character classes X, x, d, o with runs compressed: "Cali" -> "Xx",
// "3,5" -> "dod".
std::string word_shape(std::string_view word);

std::string corpus_fingerprint(const std::vector<TaggedSentence>& corpus);

// Throws kEmptyCorpus, kIllFormedGold.
TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus,
                         std::size_t epochs, std::uint64_t seed);

struct TagPrediction {
  TagSequence tags;
  std::vector<double> margins;  // best minus second-best score, per token
};

// Greedy left-to-right argmax; ties go to the lowest tag index.
TagPrediction predict_tags(const TaggerModel& model, const text::Sentence& sentence);

std::vector<EntityMention> tag_sentence(const TaggerModel& model,
                                        const text::Sentence& sentence,
                                        const std::string& extractor_id = "learned-tagger");

}  // namespace cner::ner
