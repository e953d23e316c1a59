#include "cner/text/segmenter.h"

#include <fstream>
#include <sstream>

#include "cner/common/error.h"
#include "cner/common/util.h"
#include "cner/text/unicode.h"

namespace cner::text {

namespace {

bool is_leading_punct(char32_t c) {
  switch (c) {
    case U'¿': case U'¡': case U'(': case U'[': case U'{': case U'«':
    case U'"': case U'\'':
      return true;
    default:
      return false;
  }
}

bool is_trailing_punct(char32_t c) {
  switch (c) {
    case U'?': case U'!': case U')': case U']': case U'}': case U'»':
    case U'"': case U'\'': case U',': case U';': case U':': case U'.':
    case U'…':
      return true;
    default:
      return false;
  }
}

bool is_terminator(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == U'…';
}

bool opens_sentence(char32_t c) {
  return is_upper(c) || c == U'¿' || c == U'¡' || is_digit(c);
}

}  // namespace

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
  for (const auto& e : entries) entries_.insert(decode_utf8(e));
}

AbbreviationList AbbreviationList::defaults() {
  return AbbreviationList({
      "Sr.", "Sra.", "Srta.", "Sres.", "Dr.", "Dra.", "Prof.", "Profa.",
      "Lic.", "Ing.", "Arq.", "Gral.", "Cnel.", "Av.", "Avda.", "Cía.",
      "S.A.", "Ud.", "Uds.", "Vd.", "Vds.", "etc.", "EE.UU.", "pág.",
      "págs.", "núm.", "art.", "cap.", "vol.", "ej.", "aprox.", "tel.",
      "dpto.", "Mr.", "Mrs.", "St.",
  });
}

AbbreviationList AbbreviationList::parse(std::string_view content) {
  std::vector<std::string> entries;
  std::size_t line_no = 0;
  for (std::string_view line : split(content, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.back() != '.')
      throw Error(ErrorCode::kParseError,
                  "abbreviation must end with '.': " + std::string(line), line_no);
    if (!is_valid_utf8(line))
      throw Error(ErrorCode::kParseError, "invalid UTF-8", line_no);
    for (char32_t c : decode_utf8(line))
      if (is_whitespace(c))
        throw Error(ErrorCode::kParseError,
                    "abbreviation contains whitespace: " + std::string(line),
                    line_no);
    entries.emplace_back(line);
  }
  return AbbreviationList(std::move(entries));
}

AbbreviationList AbbreviationList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open abbreviation file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool AbbreviationList::contains(std::u32string_view word) const {
  return entries_.find(word) != entries_.end();
}

std::string normalize_text(std::string_view raw) {
  std::u32string chars = decode_utf8(raw);
  std::u32string unified;
  unified.reserve(chars.size());
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (chars[i] == U'\r') {
      unified += U'\n';
      if (i + 1 < chars.size() && chars[i + 1] == U'\n') ++i;
    } else {
      unified += chars[i];
    }
  }
  return encode_utf8(compose(unified));
}

bool Segmenter::protected_period(std::u32string_view text,
                                 std::size_t word_start,
                                 std::size_t period) const {
  if (period > 0 && period + 1 < text.size() && is_digit(text[period - 1]) &&
      is_digit(text[period + 1]))
    return true;
  std::size_t b = word_start;
  while (b < period && is_leading_punct(text[b])) ++b;
  std::u32string_view word = text.substr(b, period + 1 - b);
  if (abbreviations_.contains(word)) return true;
  // Initial: one uppercase letter followed by '.'.
  return word.size() == 2 && is_upper(word[0]);
}

std::vector<Span> Segmenter::split_sentences(std::string_view text) const {
  return split_sentences(std::u32string_view(decode_utf8(text)));
}

std::vector<Span> Segmenter::split_sentences(std::u32string_view t) const {
  std::vector<Span> out;
  const std::size_t n = t.size();
  bool open = false;
  std::size_t start = 0;
  std::size_t last_end = 0;     // end of the last non-whitespace char seen
  std::size_t word_start = 0;   // first char after the latest whitespace
  std::size_t newlines = 0;     // '\n' count in the current whitespace run

  auto close = [&] {
    out.push_back({start, last_end});
    open = false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    char32_t c = t[i];
    if (is_whitespace(c)) {
      if (c == U'\n') ++newlines;
      if (open && newlines >= 2) close();
      word_start = i + 1;
      continue;
    }
    newlines = 0;
    if (!open) {
      open = true;
      start = i;
    }
    last_end = i + 1;
    if (!is_terminator(c)) continue;
    if (c == U'.' && protected_period(t, word_start, i)) continue;

    std::size_t j = i + 1;
    if (j < n && !is_whitespace(t[j])) continue;
    while (j < n && is_whitespace(t[j])) ++j;
    if (j == n || opens_sentence(t[j])) close();
  }
  if (open) close();
  return out;
}

std::vector<Token> Segmenter::tokenize(std::string_view sentence_text,
                                       std::size_t base_offset) const {
  return tokenize(std::u32string_view(decode_utf8(sentence_text)), base_offset);
}

std::vector<Token> Segmenter::tokenize(std::u32string_view t,
                                       std::size_t base_offset) const {
  std::vector<Token> out;
  auto emit = [&](std::size_t a, std::size_t b) {
    Token tok;
    tok.span = {base_offset + a, base_offset + b};
    tok.surface = encode_utf8(t.substr(a, b - a));
    tok.index = out.size();
    out.push_back(std::move(tok));
  };

  const std::size_t n = t.size();
  std::size_t i = 0;
  while (i < n) {
    if (is_whitespace(t[i])) {
      ++i;
      continue;
    }
    std::size_t a = i;
    while (i < n && !is_whitespace(t[i])) ++i;
    std::size_t b = i;

    while (a < b && is_leading_punct(t[a])) {
      emit(a, a + 1);
      ++a;
    }
    std::vector<std::size_t> trailing;
    while (b > a && is_trailing_punct(t[b - 1])) {
      if (t[b - 1] == U'.') {
        if (abbreviations_.contains(t.substr(a, b - a))) break;
        if (b >= 2 && b < n && is_digit(t[b - 2]) && is_digit(t[b])) break;
      }
      trailing.push_back(b - 1);
      --b;
    }
    if (a < b) emit(a, b);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it)
      emit(*it, *it + 1);
  }
  return out;
}

Document Segmenter::segment(std::string_view raw, std::string id,
                            std::string source) const {
  Document doc;
  doc.id = std::move(id);
  doc.source = std::move(source);
  doc.text = normalize_text(raw);
  std::u32string chars = decode_utf8(doc.text);
  std::u32string_view view(chars);
  for (const Span& span : split_sentences(view)) {
    Sentence s;
    s.span = span;
    s.index = doc.sentences.size();
    s.tokens = tokenize(view.substr(span.start, span.length()), span.start);
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

Sentence sentence_from_tokens(const std::vector<std::string>& surfaces,
                              std::size_t index) {
  Sentence s;
  s.index = index;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    std::size_t len = char_length(surfaces[i]);
    s.tokens.push_back({{offset, offset + len}, surfaces[i], i});
    offset += len + 1;
  }
  s.span = {0, surfaces.empty() ? 0 : offset - 1};
  return s;
}

}  // namespace cner::text
