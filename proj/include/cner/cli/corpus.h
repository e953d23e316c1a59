#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cner/ner/tagger.h"
#include "cner/relex/classifier.h"
#include "cner/text/segmenter.h"

namespace cner::cli {

using NerCorpus = std::vector<ner::TaggedSentence>;

// `token<TAB>tag` lines, blank lines between sentences. A line starting with
// '#' and holding no tab is a comment, so "#\tO" is still a token.
// Throws kParseError for malformed lines and kValidationError for ill-formed
// BIO, both with the line number.
NerCorpus parse_ner_corpus(std::string_view content);
NerCorpus load_ner_corpus(const std::string& path);
std::string serialize_ner_corpus(const NerCorpus& corpus);

struct RelMention {
  std::size_t start = 0;  // scalar offsets into the normalized text
  std::size_t end = 0;
  ner::EntityType type = ner::EntityType::kPER;
  friend bool operator==(const RelMention&, const RelMention&) = default;
};

struct RelLink {
  std::size_t arg1 = 0;
  std::size_t arg2 = 0;
  relex::RelationLabel label = relex::RelationLabel::kNonRel;
  friend bool operator==(const RelLink&, const RelLink&) = default;
};

struct RelRecord {
  std::string text;
  std::vector<RelMention> mentions;
  std::vector<RelLink> relations;
  std::size_t line = 0;  // source line, 0 when built in memory
  friend bool operator==(const RelRecord& a, const RelRecord& b) {
    return a.text == b.text && a.mentions == b.mentions && a.relations == b.relations;
  }
};

using RelCorpus = std::vector<RelRecord>;

// One JSON object per line:
//   {"text": ..., "mentions": [{"start","end","type"}],
//    "relations": [{"arg1","arg2","label"}]}
// Blank lines are skipped. Throws kParseError / kValidationError with the
// line number.
RelCorpus parse_re_corpus(std::string_view content);
RelCorpus load_re_corpus(const std::string& path);
std::string serialize_re_corpus(const RelCorpus& corpus);

struct RelInstances {
  std::vector<relex::RelexInstance> instances;
  // Listed relations whose pair is never generated (over the distance cap).
  std::size_t unreachable = 0;
};

// Segments every record and turns each generated mention pair into a training
// instance: the listed label, else NON-REL. Mentions must start and end on
// token boundaries inside one sentence; anything else throws
// kValidationError naming the record line and offset.
RelInstances build_re_instances(const RelCorpus& corpus, const text::Segmenter& segmenter,
                                std::size_t max_token_distance = relex::kDefaultMaxTokenDistance);

}  // namespace cner::cli
