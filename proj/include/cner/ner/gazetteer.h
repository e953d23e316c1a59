#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cner/ner/entity.h"

namespace cner::ner {

// Token-sequence lookup list. Immutable after construction.
class Gazetteer {
 public:
  using Entry = std::pair<std::vector<std::string>, EntityType>;

  Gazetteer() = default;
  // Throws kValidationError on empty or duplicate token sequences.
  Gazetteer(std::string name, const std::vector<Entry>& entries);

  // `TYPE<TAB>token token ...` per line, '#' comments.
  static Gazetteer parse(std::string_view content, std::string name = "gazetteer");
  static Gazetteer load(const std::string& path);

  const std::string& name() const { return name_; }
  std::size_t size() const { return exact_.size(); }
  bool empty() const { return exact_.empty(); }
  std::size_t max_length() const { return max_length_; }

  // Type for tokens [first, first+len) of `tokens`. The token at sentence
  // position 0 compares case-insensitively, the rest case-sensitively.
  const EntityType* find(const std::vector<text::Token>& tokens, std::size_t first,
                         std::size_t len) const;

 private:
  std::string name_;
  std::map<std::string, EntityType> exact_;
  // Keyed with the first token lowercased; first-loaded entry wins.
  std::map<std::string, EntityType> folded_first_;
  std::size_t max_length_ = 0;
};

struct GazetteerOptions {
  // Emit maximal runs of uncovered capitalized tokens as PER (confidence 0.5).
  bool heuristic_caps = false;
};

std::vector<EntityMention> gazetteer_extract(const text::Sentence& sentence,
                                             const Gazetteer& gazetteer,
                                             const GazetteerOptions& options = {},
                                             const std::string& extractor_id = "rule-gazetteer");

}  // namespace cner::ner
