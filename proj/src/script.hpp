#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace cognate::script {

// Nine Brahmic Unicode blocks, each 0x80 codepoints wide, laid out at fixed
// offsets from Devanagari (U+0900 + k * 0x80).
struct ScriptBlock {
  std::string_view name;
  char32_t block_start;
};

inline constexpr std::size_t kBlockLength = 0x80;

inline constexpr std::array<ScriptBlock, 9> kBrahmicBlocks = {{
    {"Devanagari", 0x0900},
    {"Bengali", 0x0980},
    {"Gurmukhi", 0x0A00},
    {"Gujarati", 0x0A80},
    {"Oriya", 0x0B00},
    {"Tamil", 0x0B80},
    {"Telugu", 0x0C00},
    {"Kannada", 0x0C80},
    {"Malayalam", 0x0D00},
}};

// Index into kBrahmicBlocks, or kNoBlock when the codepoint is not Brahmic.
inline constexpr std::size_t kNoBlock = static_cast<std::size_t>(-1);

constexpr std::size_t block_of(char32_t cp) {
  if (cp < 0x0900 || cp >= 0x0D80) return kNoBlock;
  return static_cast<std::size_t>(cp - 0x0900) / kBlockLength;
}

// Script whose block holds the plurality of the text's Brahmic codepoints;
// "unknown" when none fall in any Brahmic block. Ties go to the lower block.
std::string_view detect_script(std::string_view utf8_text);

struct TransliteratedText {
  std::string text;
  std::string source_script;         // detect_script of the input
  std::size_t passthrough_count = 0;  // codepoints outside every Brahmic block
};

// Maps each Brahmic codepoint to U+0900 + (cp - block_start); everything else
// passes through untouched. Identity on Devanagari.
char32_t to_devanagari(char32_t cp);
TransliteratedText to_devanagari(std::string_view utf8_text);

}  // namespace cognate::script
