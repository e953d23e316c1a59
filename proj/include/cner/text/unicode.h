#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cner::text {

// UTF-8 <-> UTF-32. Invalid sequences decode to U+FFFD; `had_errors` reports
// whether any replacement happened.
std::u32string decode_utf8(std::string_view bytes, bool* had_errors = nullptr);
std::string encode_utf8(std::u32string_view chars);
bool is_valid_utf8(std::string_view bytes);
std::string latin1_to_utf8(std::string_view bytes);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t char_length(std::string_view utf8);
// Substring [start, end) in scalar-value offsets.
std::string slice_chars(std::string_view utf8, std::size_t start, std::size_t end);

// Canonical composition (NFC).
std::u32string compose(std::u32string_view chars);

bool is_whitespace(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
bool is_letter(char32_t c);
bool is_digit(char32_t c);
char32_t to_lower(char32_t c);

std::u32string lowercase(std::u32string_view chars);
std::string lowercase(std::string_view utf8);

}  // namespace cner::text
