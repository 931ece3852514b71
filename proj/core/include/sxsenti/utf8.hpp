#pragma once

#include <string>
#include <string_view>

namespace sxsenti::utf8 {

/// Decodes UTF-8; invalid bytes are passed through as individual code points
/// in the U+DC80..U+DCFF range so that encode(decode(s)) == s for any input.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);

bool is_letter(char32_t c) noexcept;
bool is_upper(char32_t c) noexcept;
bool is_digit(char32_t c) noexcept;
/// ASCII punctuation only; emoji and other symbols are not punctuation.
bool is_punct(char32_t c) noexcept;
char32_t to_lower(char32_t c) noexcept;

/// Lowercases ASCII and the Latin-1 / Latin Extended-A letters used in Spanish text.
std::string to_lower(std::string_view text);

/// True when every code point is a letter (non-empty input).
bool is_alphabetic(std::string_view text);

}  // namespace sxsenti::utf8
