#pragma once

#include <array>
#include <vector>

#include "cner/common/metrics.h"
#include "cner/ner/entity.h"

namespace cner::ner {

// Entity-level scores: a prediction counts only on exact span and type match.
struct NerMetrics {
  std::array<PrfCounts, kNumEntityTypes> per_type{};
  PrfCounts micro;

  void add(const std::vector<EntityMention>& gold,
           const std::vector<EntityMention>& predicted);
};

}  // namespace cner::ner
