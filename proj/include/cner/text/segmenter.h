#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cner/text/document.h"

namespace cner::text {

// Protected abbreviations: a '.' that closes one of these never ends a
// sentence and is never split off as its own token. Entries keep their
// trailing '.' and match case-sensitively.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::vector<std::string> entries);

  static AbbreviationList defaults();
  // One abbreviation per line, '#' comments, trailing '.' required.
  static AbbreviationList parse(std::string_view content);
  static AbbreviationList load(const std::string& path);

  bool contains(std::u32string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<std::u32string, std::less<>> entries_;
};

// CRLF and lone CR become LF, then canonical composition. Idempotent.
std::string normalize_text(std::string_view raw);

class Segmenter {
 public:
  Segmenter() : Segmenter(AbbreviationList::defaults()) {}
  explicit Segmenter(AbbreviationList abbreviations)
      : abbreviations_(std::move(abbreviations)) {}

  // Sentence spans over normalized text.
  std::vector<Span> split_sentences(std::string_view text) const;
  std::vector<Span> split_sentences(std::u32string_view text) const;

  // Tokens of one sentence; spans are offset by base_offset.
  std::vector<Token> tokenize(std::string_view sentence_text,
                              std::size_t base_offset) const;
  std::vector<Token> tokenize(std::u32string_view sentence_text,
                              std::size_t base_offset) const;

  Document segment(std::string_view raw, std::string id,
                   std::string source) const;

  const AbbreviationList& abbreviations() const { return abbreviations_; }

 private:
  bool protected_period(std::u32string_view text, std::size_t word_start,
                        std::size_t period) const;

  AbbreviationList abbreviations_;
};

}  // namespace cner::text
