#include "cner/text/unicode.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace cner::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one scalar value at bytes[i]; returns the number of bytes consumed
// (at least 1) and writes kReplacement on malformed input.
std::size_t decode_one(std::string_view bytes, std::size_t i, char32_t& out) {
  auto b0 = static_cast<unsigned char>(bytes[i]);
  if (b0 < 0x80) {
    out = b0;
    return 1;
  }
  std::size_t len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; cp = b0 & 0x07; min = 0x10000;
  } else {
    out = kReplacement;
    return 1;
  }
  if (i + len > bytes.size()) {
    out = kReplacement;
    return 1;
  }
  for (std::size_t k = 1; k < len; ++k) {
    auto b = static_cast<unsigned char>(bytes[i + k]);
    if ((b & 0xC0) != 0x80) {
      out = kReplacement;
      return 1;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    out = kReplacement;
    return 1;
  }
  out = cp;
  return len;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
}

}  // namespace

std::u32string decode_utf8(std::string_view bytes, bool* had_errors) {
  std::u32string out;
  out.reserve(bytes.size());
  bool errors = false;
  for (std::size_t i = 0; i < bytes.size();) {
    char32_t c;
    std::size_t n = decode_one(bytes, i, c);
    // A literal U+FFFD in the input is three bytes, so n == 1 flags an error.
    if (c == kReplacement && n == 1) errors = true;
    out += c;
    i += n;
  }
  if (had_errors) *had_errors = errors;
  return out;
}

std::string encode_utf8(std::u32string_view chars) {
  std::string out;
  out.reserve(chars.size());
  for (char32_t c : chars) append_utf8(out, c);
  return out;
}

bool is_valid_utf8(std::string_view bytes) {
  bool errors = false;
  decode_utf8(bytes, &errors);
  return !errors;
}

std::string latin1_to_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) append_utf8(out, c);
  return out;
}

std::size_t char_length(std::string_view utf8) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < utf8.size();) {
    char32_t c;
    i += decode_one(utf8, i, c);
    ++n;
  }
  return n;
}

std::string slice_chars(std::string_view utf8, std::size_t start, std::size_t end) {
  if (start > end) return {};
  constexpr std::size_t npos = std::string_view::npos;
  std::size_t byte_start = npos;
  std::size_t byte_end = npos;
  std::size_t idx = 0;
  std::size_t i = 0;
  while (true) {
    if (idx == start) byte_start = i;
    if (idx == end) {
      byte_end = i;
      break;
    }
    if (i >= utf8.size()) break;
    char32_t c;
    i += decode_one(utf8, i, c);
    ++idx;
  }
  if (byte_start == npos || byte_end == npos) return {};
  return std::string(utf8.substr(byte_start, byte_end - byte_start));
}

std::u32string compose(std::u32string_view chars) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  icu::UnicodeString src = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(chars.data()),
      static_cast<int32_t>(chars.size()));
  if (nfc->isNormalized(src, status) && U_SUCCESS(status))
    return std::u32string(chars);
  status = U_ZERO_ERROR;
  icu::UnicodeString dst = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");

  std::u32string out(static_cast<std::size_t>(dst.countChar32()), U'\0');
  status = U_ZERO_ERROR;
  dst.toUTF32(reinterpret_cast<UChar32*>(out.data()),
              static_cast<int32_t>(out.size()), status);
  if (U_FAILURE(status)) throw std::runtime_error("UTF-32 conversion failed");
  return out;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_upper(char32_t c) { return u_isupper(static_cast<UChar32>(c)); }
bool is_lower(char32_t c) { return u_islower(static_cast<UChar32>(c)); }
bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }
bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }
char32_t to_lower(char32_t c) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
}

std::u32string lowercase(std::u32string_view chars) {
  std::u32string out(chars);
  for (char32_t& c : out) c = to_lower(c);
  return out;
}

std::string lowercase(std::string_view utf8) {
  return encode_utf8(lowercase(decode_utf8(utf8)));
}

}  // namespace cner::text
