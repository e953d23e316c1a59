#include "cner/relex/relation.h"

#include <algorithm>
#include <numeric>

#include "cner/text/unicode.h"

namespace cner::relex {

namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "GPE-AFF", "PHYS", "DISC", "EMP-ORG", "ART", "NON-REL"};

constexpr std::string_view kNone = "⊥";

}  // namespace

std::string_view to_string(RelationLabel label) { return kLabelNames[index_of(label)]; }

std::optional<RelationLabel> parse_relation_label(std::string_view code) {
  for (std::size_t k = 0; k < kNumLabels; ++k)
    if (kLabelNames[k] == code) return kAllLabels[k];
  return std::nullopt;
}

std::vector<MentionPair> generate_pairs(const text::Sentence& sentence,
                                        const std::vector<ner::EntityMention>& mentions,
                                        std::size_t max_token_distance) {
  std::vector<std::size_t> order(mentions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mentions[a].first_token < mentions[b].first_token;
  });
  std::vector<MentionPair> pairs;
  for (std::size_t x = 0; x < order.size(); ++x) {
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      const auto& a = mentions[order[x]];
      const auto& b = mentions[order[y]];
      if (a.overlaps(b) || a.first_token >= b.first_token) continue;
      MentionPair p{sentence.index, a, b, order[x], order[y]};
      if (p.gap() > max_token_distance) continue;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

std::string distance_bucket(std::size_t between) {
  if (between <= 2) return std::to_string(between);
  if (between <= 5) return "3-5";
  if (between <= 10) return "6-10";
  return ">10";
}

SparseFeatures extract_features(const MentionPair& pair, const text::Sentence& sentence,
                                const std::vector<ner::EntityMention>& mentions) {
  const auto& toks = sentence.tokens;
  auto lower = [&](std::size_t i) { return text::lowercase(toks.at(i).surface); };

  std::string tp = std::string(ner::to_string(pair.arg1.type)) + "~" +
                   std::string(ner::to_string(pair.arg2.type));
  std::string h1 = lower(pair.arg1.last_token);
  std::string h2 = lower(pair.arg2.last_token);
  std::string db = distance_bucket(pair.gap());

  std::size_t between = 0;
  for (const auto& m : mentions)
    if (m.first_token > pair.arg1.last_token && m.last_token < pair.arg2.first_token) ++between;

  SparseFeatures f = {
      "tp=" + tp,
      "h1=" + h1,
      "h2=" + h2,
      "hh=" + h1 + "~" + h2,
      "db=" + db,
      "mb=" + std::to_string(std::min<std::size_t>(between, 3)),
      "wb1=" + (pair.arg1.first_token > 0 ? toks[pair.arg1.first_token - 1].surface
                                          : std::string(kNone)),
      "wa2=" + (pair.arg2.last_token + 1 < toks.size() ? toks[pair.arg2.last_token + 1].surface
                                                       : std::string(kNone)),
      "tpdb=" + tp + "~" + db,
  };
  for (std::size_t i = pair.arg1.last_token + 1; i < pair.arg2.first_token; ++i)
    f.push_back("bw=" + lower(i));

  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

}  // namespace cner::relex
