#include "cner/ner/evaluate.h"

namespace cner::ner {

void NerMetrics::add(const std::vector<EntityMention>& gold,
                     const std::vector<EntityMention>& predicted) {
  std::vector<bool> matched(gold.size(), false);
  for (const auto& p : predicted) {
    auto& counts = per_type[static_cast<std::size_t>(p.type)];
    bool hit = false;
    for (std::size_t g = 0; g < gold.size() && !hit; ++g) {
      if (!matched[g] && gold[g].first_token == p.first_token &&
          gold[g].last_token == p.last_token && gold[g].type == p.type) {
        matched[g] = hit = true;
      }
    }
    hit ? ++counts.tp : ++counts.fp;
  }
  for (std::size_t g = 0; g < gold.size(); ++g)
    if (!matched[g]) ++per_type[static_cast<std::size_t>(gold[g].type)].fn;

  micro = {};
  for (const auto& c : per_type) micro += c;
}

}  // namespace cner::ner
