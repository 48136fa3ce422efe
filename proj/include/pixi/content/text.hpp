#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pixi::content {

// Splits on ASCII whitespace. Punctuation stays attached to its word so that
// excerpts render the original prose verbatim.
std::vector<std::string> tokenize(std::string_view text);

// Removes leading and trailing punctuation code points, keeping internal
// characters ("don't" stays intact). Case is preserved.
std::string strip_punctuation(std::string_view raw);

// Removes every punctuation code point, wherever it occurs.
std::string remove_punctuation(std::string_view raw);

// Simple Unicode case folding for Latin, Greek and Cyrillic scripts.
// Bytes that are not valid UTF-8 pass through unchanged.
std::string case_fold(std::string_view text);

// The matching key used by search, indexing and keyword comparison:
// case_fold(strip_punctuation(raw)). All-punctuation input yields "".
std::string normalize_word(std::string_view raw);

// Number of code points in a UTF-8 string (invalid bytes count as one each).
std::size_t utf8_length(std::string_view text);

}  // namespace pixi::content
