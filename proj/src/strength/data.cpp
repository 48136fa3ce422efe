#include <string_view>

#include "matching.hpp"

namespace pixi::strength::detail {

namespace {

#include "frequency_lists.inc"
#include "adjacency_graphs.inc"

template <std::size_t N>
RankedDictionary build(std::string name, const char (&literal)[N]) {
  const std::string_view words(literal, N - 1);
  RankedDictionary dict;
  dict.name = std::move(name);
  int rank = 1;
  std::size_t pos = 0;
  while (pos < words.size()) {
    auto end = words.find('\n', pos);
    if (end == std::string_view::npos) end = words.size();
    if (end > pos) dict.add(words.substr(pos, end - pos), rank++);
    pos = end + 1;
  }
  return dict;
}

}  // namespace

void RankedDictionary::add(std::string_view word, int rank) {
  // Like a dict comprehension over an ordered list, a repeated word keeps
  // the rank of its last occurrence.
  ranks[word] = rank;
  if (word.size() > max_length) max_length = word.size();
}

const std::vector<RankedDictionary>& default_dictionaries() {
  static const std::vector<RankedDictionary> dicts = [] {
    std::vector<RankedDictionary> d;
    d.push_back(build("passwords", k_passwords_words));
    d.push_back(build("english_wikipedia", k_english_wikipedia_words));
    d.push_back(build("female_names", k_female_names_words));
    d.push_back(build("surnames", k_surnames_words));
    d.push_back(build("us_tv_and_film", k_us_tv_and_film_words));
    d.push_back(build("male_names", k_male_names_words));
    return d;
  }();
  return dicts;
}

const Graphs& graphs() {
  static const Graphs g{&k_qwerty_graph, &k_dvorak_graph, &k_keypad_graph, &k_mac_keypad_graph};
  return g;
}

}  // namespace pixi::strength::detail
