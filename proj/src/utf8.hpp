#pragma once

#include <string>
#include <string_view>

namespace cognate::utf8 {

// Decodes UTF-8 into codepoints. Malformed input raises Parse with the byte
// offset of the offending sequence.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view codepoints);
std::string encode(char32_t codepoint);

// Codepoint count of a UTF-8 string.
std::size_t length(std::string_view text);

}  // namespace cognate::utf8
