#pragma once

// Random Spanish-like text for property tests: accented words, abbreviations,
// decimals, punctuation, quotes and varied whitespace.

#include <random>
#include <string>
#include <vector>

namespace cner::testing {

inline std::string random_spanish_text(std::mt19937_64& rng, int max_words = 40) {
  static const std::vector<std::string> words = {
      "Juan", "María", "vive", "en", "Cali", "Bogotá", "la", "Universidad",
      "del", "Valle", "señor", "niño", "acción", "está", "pingüino", "Ñandú",
      "él", "dámelo", "anti-inflamatorio", "exportó", "toneladas", "y",
      "Medellín", "Á", "corazón", "cafés", "Colombia", "año", "José"};
  static const std::vector<std::string> abbrevs = {
      "Sr.", "Sra.", "Dr.", "Dra.", "Prof.", "etc.", "EE.UU.", "pág.", "núm."};
  static const std::vector<std::string> numbers = {
      "3.50", "3,5", "1.000.000", "42", "0,25", "2024", "7."};
  static const std::vector<std::string> lead = {"¿", "¡", "(", "[", "«", "\"", "'"};
  static const std::vector<std::string> trail = {
      "?", "!", ")", "]", "»", "\"", "'", ",", ";", ":", ".", "…", "..."};
  static const std::vector<std::string> spaces = {
      " ", " ", " ", "  ", "\n", "\t", "\n\n", "\r\n", "  "};

  auto pick = [&](const std::vector<std::string>& v) -> const std::string& {
    return v[rng() % v.size()];
  };
  std::string out;
  int n = static_cast<int>(rng() % (max_words + 1));
  for (int i = 0; i < n; ++i) {
    if (i > 0 || rng() % 4 == 0) out += pick(spaces);
    if (rng() % 8 == 0) out += pick(lead);
    switch (rng() % 10) {
      case 0: out += pick(abbrevs); break;
      case 1: out += pick(numbers); break;
      case 2: out += "Cali\xcc\x81"; break;  // decomposed accent
      default: out += pick(words); break;
    }
    if (rng() % 5 == 0) out += pick(trail);
  }
  if (rng() % 3 == 0) out += pick(spaces);
  return out;
}

}  // namespace cner::testing
