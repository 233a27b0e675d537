#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>

#include "folkbangla/error.hpp"

namespace folkbangla::utf8 {

/// One decoded code point and the byte range it occupies in its source.
struct CodePoint {
  char32_t value;
  std::size_t start;
  std::size_t end;
};

namespace detail {

inline bool is_continuation(unsigned char c) { return (c & 0xC0u) == 0x80u; }

}  // namespace detail

/// Decodes the code point starting at `pos`. Returns nullopt on malformed input.
inline std::optional<CodePoint> decode_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80u) {
    return CodePoint{b0, pos, pos + 1};
  } else if ((b0 & 0xE0u) == 0xC0u) {
    len = 2;
    cp = b0 & 0x1Fu;
  } else if ((b0 & 0xF0u) == 0xE0u) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if ((b0 & 0xF8u) == 0xF0u) {
    len = 4;
    cp = b0 & 0x07u;
  } else {
    return std::nullopt;
  }
  if (pos + len > s.size()) return std::nullopt;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if (!detail::is_continuation(b)) return std::nullopt;
    cp = (cp << 6) | (b & 0x3Fu);
  }
  // overlong forms, surrogates, out of range
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
    return std::nullopt;
  }
  return CodePoint{cp, pos, pos + len};
}

/// Byte offset of the first malformed sequence, or nullopt if `s` is valid UTF-8.
inline std::optional<std::size_t> find_invalid(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto cp = decode_at(s, pos);
    if (!cp) return pos;
    pos = cp->end;
  }
  return std::nullopt;
}

inline void validate(std::string_view s) {
  if (auto bad = find_invalid(s)) throw DecodeError("invalid UTF-8", *bad);
}

/// Decodes a whole string. Throws DecodeError on malformed input.
inline std::vector<CodePoint> code_points(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto cp = decode_at(s, pos);
    if (!cp) throw DecodeError("invalid UTF-8", pos);
    out.push_back(*cp);
    pos = cp->end;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

inline std::size_t length(std::string_view s) { return code_points(s).size(); }

inline bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

inline bool is_alphabetic(char32_t cp) {
  return u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_ALPHABETIC) != 0;
}

/// ASCII 0-9 and Bengali ০-৯.
inline bool is_digit(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x09E6 && cp <= 0x09EF);
}

inline bool is_bengali(char32_t cp) { return cp >= 0x0980 && cp <= 0x09FF; }

}  // namespace folkbangla::utf8
