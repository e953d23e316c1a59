#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cner/ner/entity.h"

namespace cner::relex {

// Canonical order; also the tie-break order after the NON-REL preference.
enum class RelationLabel { kGpeAff, kPhys, kDisc, kEmpOrg, kArt, kNonRel };

inline constexpr std::size_t kNumLabels = 6;
inline constexpr std::size_t kNumSubstantiveLabels = 5;
inline constexpr std::array<RelationLabel, kNumLabels> kAllLabels = {
    RelationLabel::kGpeAff, RelationLabel::kPhys, RelationLabel::kDisc,
    RelationLabel::kEmpOrg, RelationLabel::kArt,  RelationLabel::kNonRel};

std::string_view to_string(RelationLabel label);
std::optional<RelationLabel> parse_relation_label(std::string_view code);
inline std::size_t index_of(RelationLabel label) { return static_cast<std::size_t>(label); }

// arg1 starts strictly before arg2; the relation itself is undirected.
// arg1_index/arg2_index point into the mention list the pair came from.
struct MentionPair {
  std::size_t sentence_index = 0;
  ner::EntityMention arg1;
  ner::EntityMention arg2;
  std::size_t arg1_index = 0;
  std::size_t arg2_index = 0;

  // Tokens strictly between the two mentions.
  std::size_t gap() const { return arg2.first_token - arg1.last_token - 1; }
};

inline constexpr std::size_t kDefaultMaxTokenDistance = 50;

// All pairs of non-overlapping mentions, ordered by (arg1 start, arg2 start),
// skipping those whose gap exceeds max_token_distance.
std::vector<MentionPair> generate_pairs(const text::Sentence& sentence,
                                        const std::vector<ner::EntityMention>& mentions,
                                        std::size_t max_token_distance = kDefaultMaxTokenDistance);

// Sorted, duplicate-free set of active binary features.
using SparseFeatures = std::vector<std::string>;

// `db=` bucket label for a between-token count.
std::string distance_bucket(std::size_t between);

// Feature templates for one pair. `mentions` is the sentence's full mention
// list, used to count other mentions lying between the pair.
SparseFeatures extract_features(const MentionPair& pair, const text::Sentence& sentence,
                                const std::vector<ner::EntityMention>& mentions = {});

}  // namespace cner::relex
