#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pixi::strength {

enum class PatternKind { Dictionary, Spatial, Repeat, Sequence, Regex, Date, Bruteforce };

std::string_view to_string(PatternKind kind);

struct MatchSpan {
  PatternKind pattern = PatternKind::Bruteforce;
  std::size_t begin = 0;  // byte range [begin, end)
  std::size_t end = 0;
  double log10_guesses = 0.0;
  std::string dictionary_name;  // dictionary matches only
  bool reversed = false;
  bool l33t = false;
};

struct StrengthReport {
  std::size_t password_length = 0;  // code points
  double log10_guesses = 0.0;
  int score = 0;
  std::vector<MatchSpan> match_spans;
};

// zxcvbn-style estimate: dictionary (plain, reversed, l33t), keyboard,
// repeat, sequence, year and date matchers, then the minimum-guesses
// segmentation. The password is matched as a byte string. Entries of
// `user_dictionary` count as rank-1 dictionary words.
StrengthReport estimate_guesses(std::string_view password,
                                std::span<const std::string> user_dictionary = {});

// Bands: <1e3 -> 0, <1e6 -> 1, <1e8 -> 2, <1e10 -> 3, else 4.
int score_from_guesses(double guesses);
int score_from_log10(double log10_guesses);

enum class GuessabilityClass { OnlineUnsafe, OfflineUnsafe, Safe };

std::string_view to_string(GuessabilityClass c);

struct Thresholds {
  double online = 1e6;
  double offline = 1e14;
};

GuessabilityClass classify(double guesses, const Thresholds& thresholds = {});
GuessabilityClass classify_log10(double log10_guesses, const Thresholds& thresholds = {});

enum class KeywordMatch { None, Variant, Direct };

std::string_view to_string(KeywordMatch m);

struct KeywordUsage {
  std::vector<KeywordMatch> flags;  // parallel to the keywords
  bool any_used = false;
};

// Direct: keyword is a case-sensitive substring of the password. Variant: it
// is a substring once both are case-folded and stripped of punctuation.
KeywordUsage detect_keyword_usage(std::string_view password, std::span<const std::string> keywords);

nlohmann::ordered_json to_json(const StrengthReport& report);

// True if `password` (lowercased) is among the `top_n` most common entries
// of the bundled password list.
bool is_common_password(std::string_view password, std::size_t top_n = 1000);

// Word counts of the bundled frequency lists, for documentation and tests.
struct DictionaryInfo {
  std::string name;
  std::size_t size = 0;
};
std::vector<DictionaryInfo> bundled_dictionaries();

}  // namespace pixi::strength
