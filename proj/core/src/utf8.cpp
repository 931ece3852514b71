#include "sxsenti/utf8.hpp"

namespace sxsenti::utf8 {

namespace {

constexpr char32_t kRawByteBase = 0xDC00;

bool in_range(char32_t c, char32_t lo, char32_t hi) noexcept { return c >= lo && c <= hi; }

// Latin Extended-A pairs: which member of each upper/lower pair is uppercase.
bool latin_ext_a_upper(char32_t c) noexcept {
  if (in_range(c, 0x0100, 0x0137) || in_range(c, 0x014A, 0x0177)) return c % 2 == 0;
  if (in_range(c, 0x0139, 0x0148) || in_range(c, 0x0179, 0x017E)) return c % 2 == 1;
  return c == 0x0178;
}

}  // namespace

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    // Reject overlong forms so that re-encoding reproduces the input bytes.
    if (ok && ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
               cp > 0x10FFFF || in_range(cp, 0xD800, 0xDFFF))) {
      ok = false;
    }
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(kRawByteBase + b0);
      ++i;
    }
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (in_range(c, kRawByteBase + 0x80, kRawByteBase + 0xFF)) {
      out.push_back(static_cast<char>(c - kRawByteBase));
    } else if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

bool is_letter(char32_t c) noexcept {
  if (in_range(c, U'a', U'z') || in_range(c, U'A', U'Z')) return true;
  if (in_range(c, 0x00C0, 0x00FF)) return c != 0x00D7 && c != 0x00F7;
  return in_range(c, 0x0100, 0x024F) || in_range(c, 0x0370, 0x03FF) || in_range(c, 0x0400, 0x052F);
}

bool is_upper(char32_t c) noexcept {
  if (in_range(c, U'A', U'Z')) return true;
  if (in_range(c, 0x00C0, 0x00DE)) return c != 0x00D7;
  if (in_range(c, 0x0391, 0x03AB)) return true;
  if (in_range(c, 0x0400, 0x042F)) return true;
  return latin_ext_a_upper(c);
}

bool is_digit(char32_t c) noexcept { return in_range(c, U'0', U'9'); }

bool is_punct(char32_t c) noexcept {
  return in_range(c, 0x21, 0x2F) || in_range(c, 0x3A, 0x40) || in_range(c, 0x5B, 0x60) ||
         in_range(c, 0x7B, 0x7E);
}

char32_t to_lower(char32_t c) noexcept {
  if (in_range(c, U'A', U'Z')) return c + 32;
  if (in_range(c, 0x00C0, 0x00DE) && c != 0x00D7) return c + 32;
  if (in_range(c, 0x0391, 0x03AB)) return c + 32;
  if (in_range(c, 0x0410, 0x042F)) return c + 32;
  if (in_range(c, 0x0400, 0x040F)) return c + 80;
  if (c == 0x0178) return 0x00FF;
  if (latin_ext_a_upper(c)) return c + 1;
  return c;
}

std::string to_lower(std::string_view text) {
  bool ascii = true;
  for (char ch : text) {
    if (static_cast<unsigned char>(ch) >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) {
    std::string out(text);
    for (char& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
    }
    return out;
  }
  std::u32string cps = decode(text);
  for (char32_t& c : cps) c = to_lower(c);
  return encode(cps);
}

bool is_alphabetic(std::string_view text) {
  if (text.empty()) return false;
  for (char32_t c : decode(text)) {
    if (!is_letter(c)) return false;
  }
  return true;
}

}  // namespace sxsenti::utf8
