#include "script.hpp"

#include <algorithm>

#include "utf8.hpp"

namespace cognate::script {

std::string_view detect_script(std::string_view utf8_text) {
  std::array<std::size_t, kBrahmicBlocks.size()> counts{};
  for (char32_t cp : utf8::decode(utf8_text)) {
    const std::size_t b = block_of(cp);
    if (b != kNoBlock) ++counts[b];
  }
  std::size_t best = kNoBlock;
  std::size_t best_count = 0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] > best_count) {
      best = b;
      best_count = counts[b];
    }
  }
  if (best == kNoBlock) return "unknown";
  return kBrahmicBlocks[best].name;
}

char32_t to_devanagari(char32_t cp) {
  const std::size_t b = block_of(cp);
  if (b == kNoBlock) return cp;
  return 0x0900 + (cp - kBrahmicBlocks[b].block_start);
}

TransliteratedText to_devanagari(std::string_view utf8_text) {
  TransliteratedText result;
  result.source_script = std::string(detect_script(utf8_text));
  std::u32string mapped;
  const std::u32string input = utf8::decode(utf8_text);
  mapped.reserve(input.size());
  for (char32_t cp : input) {
    if (block_of(cp) == kNoBlock) ++result.passthrough_count;
    mapped.push_back(to_devanagari(cp));
  }
  result.text = utf8::encode(mapped);
  return result;
}

}  // namespace cognate::script
