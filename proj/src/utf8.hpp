#pragma once

// Minimal UTF-8 helpers for the tokenizer. Letter classification covers the
// scripts that show up in tweet corpora (Latin, Greek, Cyrillic, Armenian,
// Hebrew, Arabic, Indic, Thai, Georgian, Hangul, kana, CJK). Case folding is
// the simple one-to-one mapping for Latin-1, Latin Extended-A, Greek and
// Cyrillic; other letters are returned unchanged.

#include <cstddef>
#include <string>
#include <string_view>

namespace offd::utf8 {

constexpr char32_t replacement = 0xFFFD;

/// Decodes one code point starting at `pos`, advancing `pos`. Invalid
/// sequences yield U+FFFD and consume a single byte.
char32_t decode(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

bool is_letter(char32_t cp);
bool is_apostrophe(char32_t cp);
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);

}  // namespace offd::utf8
