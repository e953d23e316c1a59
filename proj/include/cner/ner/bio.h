#pragma once

#include <string>
#include <vector>

#include "cner/ner/entity.h"

namespace cner::ner {

using TagSequence = std::vector<BioTag>;

// Throws kOverlappingMentions or kMentionOutOfRange.
TagSequence encode_bio(const text::Sentence& sentence,
                       const std::vector<EntityMention>& mentions);

// Maximal B-X I-X* runs become mentions. An I-X without a B-X or I-X
// predecessor starts a new mention, so every length-correct input decodes.
// Throws kLengthMismatch.
std::vector<EntityMention> decode_bio(const TagSequence& tags,
                                      const text::Sentence& sentence,
                                      const std::string& extractor_id,
                                      double confidence);

// Index of the first position violating BIO well-formedness, or -1.
long first_ill_formed(const TagSequence& tags);

}  // namespace cner::ner
