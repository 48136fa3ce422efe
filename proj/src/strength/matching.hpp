#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pixi/strength/strength.hpp"

namespace pixi::strength::detail {

struct RankedDictionary {
  std::string name;
  std::unordered_map<std::string_view, int> ranks;
  std::size_t max_length = 0;
  std::vector<std::unique_ptr<std::string>> owned;  // backing store for user words

  void add(std::string_view word, int rank);
};

using AdjacencyGraph = std::map<std::string, std::vector<std::string>>;

// Lists in the reference order: passwords, english_wikipedia, female_names,
// surnames, us_tv_and_film, male_names.
const std::vector<RankedDictionary>& default_dictionaries();

struct Graphs {
  const AdjacencyGraph* qwerty;
  const AdjacencyGraph* dvorak;
  const AdjacencyGraph* keypad;
  const AdjacencyGraph* mac_keypad;
};
const Graphs& graphs();

struct Match {
  PatternKind pattern = PatternKind::Bruteforce;
  std::size_t i = 0;  // inclusive byte range [i, j]
  std::size_t j = 0;
  std::string token;

  // dictionary
  std::string matched_word;
  int rank = 0;
  std::string dictionary_name;
  bool reversed = false;
  bool l33t = false;
  std::vector<std::pair<char, char>> sub;  // l33t char -> letter

  // spatial
  std::string graph;
  int turns = 0;
  int shifted_count = 0;

  // repeat
  std::string base_token;
  long double base_guesses = 0;
  double repeat_count = 0;

  // sequence
  bool ascending = true;

  // regex (recent_year) and date
  int year = 0;
  int month = 0;
  int day = 0;
  std::string separator;

  long double guesses = 0;  // cached estimate, 0 until computed
};

using Dictionaries = std::vector<const RankedDictionary*>;

std::vector<Match> omnimatch(std::string_view password, const Dictionaries& dicts);

std::vector<Match> dictionary_match(std::string_view password, const Dictionaries& dicts);
std::vector<Match> reverse_dictionary_match(std::string_view password, const Dictionaries& dicts);
std::vector<Match> l33t_match(std::string_view password, const Dictionaries& dicts);
std::vector<Match> spatial_match(std::string_view password);
std::vector<Match> repeat_match(std::string_view password, const Dictionaries& dicts);
std::vector<Match> sequence_match(std::string_view password);
std::vector<Match> regex_match(std::string_view password);
std::vector<Match> date_match(std::string_view password);

// Exposed for tests: all l33t substitution maps for the relevant subtable.
std::vector<std::vector<std::pair<char, char>>> enumerate_l33t_subs(
    const std::vector<std::pair<char, std::vector<char>>>& table);

struct Segmentation {
  long double guesses = 1;
  std::vector<Match> sequence;
};

Segmentation most_guessable_match_sequence(std::string_view password, std::vector<Match> matches);

long double estimate_match_guesses(Match& match, std::size_t password_length);

inline constexpr int kReferenceYear = 2017;
inline constexpr int kMinYearSpace = 20;

}  // namespace pixi::strength::detail
