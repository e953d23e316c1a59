#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "cner/text/document.h"

namespace cner::ner {

// ACE entity inventory. Declaration order is the canonical order used for tag
// indices and tie-breaking.
enum class EntityType { kPER, kORG, kFAC, kLOC, kGPE, kVEH, kWEA };

inline constexpr std::size_t kNumEntityTypes = 7;
inline constexpr std::array<EntityType, kNumEntityTypes> kAllEntityTypes = {
    EntityType::kPER, EntityType::kORG, EntityType::kFAC, EntityType::kLOC,
    EntityType::kGPE, EntityType::kVEH, EntityType::kWEA};

std::string_view to_string(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view code);

struct EntityMention {
  text::Span span;
  std::size_t first_token = 0;  // inclusive
  std::size_t last_token = 0;   // inclusive
  EntityType type = EntityType::kPER;
  std::size_t sentence_index = 0;
  std::string extractor_id;
  double confidence = 1.0;

  std::size_t token_count() const { return last_token - first_token + 1; }
  bool overlaps(const EntityMention& other) const {
    return first_token <= other.last_token && other.first_token <= last_token;
  }
};

// Same location and type; ignores attribution and confidence.
bool same_mention(const EntityMention& a, const EntityMention& b);

// Mention covering tokens [first, last] of the sentence, with the span derived
// from the token spans. Throws kMentionOutOfRange.
EntityMention make_mention(const text::Sentence& sentence, std::size_t first,
                           std::size_t last, EntityType type,
                           std::string extractor_id, double confidence);

// Checks the EntityMention invariants against its sentence: non-empty range
// within bounds and span equal to the covered tokens.
bool mention_valid_for(const EntityMention& mention, const text::Sentence& sentence);

// BIO tag. Index layout: O = 0, B-X = 1 + type, I-X = 8 + type. This is also
// the tie-break order.
class BioTag {
 public:
  enum class Prefix { kO, kB, kI };

  static constexpr std::size_t kCount = 1 + 2 * kNumEntityTypes;

  constexpr BioTag() = default;
  static constexpr BioTag outside() { return BioTag(); }
  static constexpr BioTag begin(EntityType t) { return BioTag(Prefix::kB, t); }
  static constexpr BioTag inside(EntityType t) { return BioTag(Prefix::kI, t); }
  static BioTag from_index(std::size_t index);
  static std::optional<BioTag> parse(std::string_view text);

  Prefix prefix() const { return prefix_; }
  EntityType type() const { return type_; }
  bool is_outside() const { return prefix_ == Prefix::kO; }
  std::size_t index() const;
  std::string str() const;

  friend bool operator==(const BioTag& a, const BioTag& b) {
    return a.prefix_ == b.prefix_ && (a.prefix_ == Prefix::kO || a.type_ == b.type_);
  }

 private:
  constexpr BioTag(Prefix p, EntityType t) : prefix_(p), type_(t) {}

  Prefix prefix_ = Prefix::kO;
  EntityType type_ = EntityType::kPER;
};

}  // namespace cner::ner
