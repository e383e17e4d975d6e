#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers. All text offsets in the toolkit count Unicode
// scalar values, not bytes.
namespace absa::utf8 {

// Decodes `s`. Invalid sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
void append(std::string& out, char32_t cp);

// Number of scalar values in `s`.
std::size_t length(std::string_view s);

// Byte offset of every scalar value in `s`, plus s.size() as a final entry.
std::vector<std::size_t> byte_offsets(std::string_view s);

// Substring by scalar-value offsets [start, end). Clamped to the text.
std::string substr(std::string_view s, std::size_t start, std::size_t end);

bool is_space(char32_t cp);
// Letters and digits. Non-ASCII code points count as word characters unless
// they fall in a known punctuation, symbol or space block.
bool is_word(char32_t cp);

// Simple case folding covering ASCII, Latin-1, Latin Extended-A and the
// basic Greek and Cyrillic blocks.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

// Strips is_space() characters from both ends.
std::string trim(std::string_view s);

}  // namespace absa::utf8
