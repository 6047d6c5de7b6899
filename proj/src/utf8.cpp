#include "utf8.hpp"

#include "error.hpp"

namespace cognate::utf8 {

namespace {

[[noreturn]] void bad_byte(std::size_t offset) {
  raise(ErrorCode::Parse,
        "invalid UTF-8 sequence at byte offset " + std::to_string(offset));
}

}  // namespace

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      bad_byte(i);
    }
    if (i + len > n) bad_byte(i);
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(text[i + k]);
      if ((bk & 0xC0) != 0x80) bad_byte(i);
      cp = (cp << 6) | (bk & 0x3F);
    }
    // Reject overlong forms, surrogates, and out-of-range values.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMin[len]) bad_byte(i);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) bad_byte(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode(char32_t cp) {
  std::string out;
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
  return out;
}

std::string encode(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 3);
  for (char32_t cp : codepoints) out += encode(cp);
  return out;
}

std::size_t length(std::string_view text) { return decode(text).size(); }

}  // namespace cognate::utf8
