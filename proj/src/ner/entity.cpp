#include "cner/ner/entity.h"

#include "cner/common/error.h"

namespace cner::ner {

std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::kPER: return "PER";
    case EntityType::kORG: return "ORG";
    case EntityType::kFAC: return "FAC";
    case EntityType::kLOC: return "LOC";
    case EntityType::kGPE: return "GPE";
    case EntityType::kVEH: return "VEH";
    case EntityType::kWEA: return "WEA";
  }
  return "?";
}

std::optional<EntityType> parse_entity_type(std::string_view code) {
  for (EntityType t : kAllEntityTypes)
    if (to_string(t) == code) return t;
  return std::nullopt;
}

bool same_mention(const EntityMention& a, const EntityMention& b) {
  return a.span == b.span && a.first_token == b.first_token &&
         a.last_token == b.last_token && a.type == b.type &&
         a.sentence_index == b.sentence_index;
}

EntityMention make_mention(const text::Sentence& sentence, std::size_t first,
                           std::size_t last, EntityType type,
                           std::string extractor_id, double confidence) {
  if (first > last || last >= sentence.tokens.size())
    throw Error(ErrorCode::kMentionOutOfRange,
                "token range [" + std::to_string(first) + "," +
                    std::to_string(last) + "] outside sentence of " +
                    std::to_string(sentence.tokens.size()) + " tokens");
  EntityMention m;
  m.span = {sentence.tokens[first].span.start, sentence.tokens[last].span.end};
  m.first_token = first;
  m.last_token = last;
  m.type = type;
  m.sentence_index = sentence.index;
  m.extractor_id = std::move(extractor_id);
  m.confidence = confidence;
  return m;
}

bool mention_valid_for(const EntityMention& m, const text::Sentence& s) {
  if (m.first_token > m.last_token || m.last_token >= s.tokens.size()) return false;
  if (m.sentence_index != s.index) return false;
  if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) return false;
  return m.span.start == s.tokens[m.first_token].span.start &&
         m.span.end == s.tokens[m.last_token].span.end;
}

BioTag BioTag::from_index(std::size_t index) {
  if (index == 0) return outside();
  if (index <= kNumEntityTypes) return begin(kAllEntityTypes[index - 1]);
  return inside(kAllEntityTypes[index - 1 - kNumEntityTypes]);
}

std::optional<BioTag> BioTag::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  auto type = parse_entity_type(text.substr(2));
  if (!type) return std::nullopt;
  if (text[0] == 'B') return begin(*type);
  if (text[0] == 'I') return inside(*type);
  return std::nullopt;
}

std::size_t BioTag::index() const {
  auto t = static_cast<std::size_t>(type_);
  switch (prefix_) {
    case Prefix::kO: return 0;
    case Prefix::kB: return 1 + t;
    case Prefix::kI: return 1 + kNumEntityTypes + t;
  }
  return 0;
}

std::string BioTag::str() const {
  switch (prefix_) {
    case Prefix::kO: return "O";
    case Prefix::kB: return "B-" + std::string(to_string(type_));
    case Prefix::kI: return "I-" + std::string(to_string(type_));
  }
  return "O";
}

}  // namespace cner::ner
