#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cner::text {

// Half-open range [start, end) in Unicode scalar values.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  Span span;
  std::string surface;  // UTF-8
  std::size_t index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  Span span;
  std::vector<Token> tokens;
  std::size_t index = 0;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  std::string text;  // normalized, UTF-8
  std::string language = "es";
  std::string source;
  std::vector<Sentence> sentences;

  friend bool operator==(const Document&, const Document&) = default;
};

// Builds a standalone sentence from pre-tokenized surfaces joined by single
// spaces. Used for corpora that carry tokens without the original text.
Sentence sentence_from_tokens(const std::vector<std::string>& surfaces,
                              std::size_t index = 0);

}  // namespace cner::text
