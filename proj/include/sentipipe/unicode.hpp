#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sentipipe::uni {

// Minimal UTF-8 layer for tweet-scale text. Invalid byte sequences decode to
// U+FFFD so every pipeline stage is total over arbitrary byte strings.

std::vector<char32_t> decode(std::string_view utf8);
void append_utf8(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

// Case folding table: ASCII, Latin-1, Cyrillic (incl. Ё and the U+0400 row).
// Everything else is returned unchanged.
char32_t to_lower(char32_t cp);

// Character classes used by the normalizer. The ranges are fixed here rather
// than pulled from full Unicode tables: ASCII, Latin-1/Extended-A/B letters,
// Cyrillic + supplement. Digits are ASCII 0-9 only.
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);

// "Punctuation" kept by the StripSpecial step: all ASCII punctuation
// (including =, +, | and friends) plus the common general-punctuation block
// U+2010..U+205E, guillemets, and the inverted ?/!.
bool is_punct(char32_t cp);

inline bool is_word_char(char32_t cp) {
  return is_letter(cp) || is_digit(cp) || cp == U'_';
}

std::string lowercase(std::string_view utf8);

}  // namespace sentipipe::uni
