#include "cner/ner/bio.h"

#include "cner/common/error.h"

namespace cner::ner {

TagSequence encode_bio(const text::Sentence& sentence,
                       const std::vector<EntityMention>& mentions) {
  const std::size_t n = sentence.tokens.size();
  TagSequence tags(n);
  std::vector<bool> taken(n, false);
  for (const auto& m : mentions) {
    if (m.first_token > m.last_token || m.last_token >= n)
      throw Error(ErrorCode::kMentionOutOfRange,
                  "mention [" + std::to_string(m.first_token) + "," +
                      std::to_string(m.last_token) + "] exceeds " +
                      std::to_string(n) + " tokens");
    for (std::size_t i = m.first_token; i <= m.last_token; ++i) {
      if (taken[i])
        throw Error(ErrorCode::kOverlappingMentions,
                    "token " + std::to_string(i) + " covered twice");
      taken[i] = true;
      tags[i] = i == m.first_token ? BioTag::begin(m.type) : BioTag::inside(m.type);
    }
  }
  return tags;
}

std::vector<EntityMention> decode_bio(const TagSequence& tags,
                                      const text::Sentence& sentence,
                                      const std::string& extractor_id,
                                      double confidence) {
  if (tags.size() != sentence.tokens.size())
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(tags.size()) + " tags for " +
                    std::to_string(sentence.tokens.size()) + " tokens");
  std::vector<EntityMention> out;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i].is_outside()) {
      ++i;
      continue;
    }
    // B-X or a repaired orphan I-X opens a run; continue over I-X.
    EntityType type = tags[i].type();
    std::size_t first = i++;
    while (i < tags.size() && tags[i].prefix() == BioTag::Prefix::kI &&
           tags[i].type() == type)
      ++i;
    out.push_back(make_mention(sentence, first, i - 1, type, extractor_id, confidence));
  }
  return out;
}

long first_ill_formed(const TagSequence& tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].prefix() != BioTag::Prefix::kI) continue;
    if (i == 0 || tags[i - 1].is_outside() || tags[i - 1].type() != tags[i].type())
      return static_cast<long>(i);
  }
  return -1;
}

}  // namespace cner::ner
