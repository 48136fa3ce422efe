#include "matching.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <set>

namespace pixi::strength::detail {

namespace {

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_of(std::string_view s, bool (*pred)(char)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), pred);
}

void sort_by_span(std::vector<Match>& matches) {
  std::stable_sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
}

void append(std::vector<Match>& out, std::vector<Match>&& more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

const std::vector<std::pair<char, std::vector<char>>>& l33t_table() {
  static const std::vector<std::pair<char, std::vector<char>>> table = {
      {'a', {'4', '@'}},      {'b', {'8'}},      {'c', {'(', '{', '[', '<'}},
      {'e', {'3'}},           {'g', {'6', '9'}}, {'i', {'1', '!', '|'}},
      {'l', {'1', '|', '7'}}, {'o', {'0'}},      {'s', {'$', '5'}},
      {'t', {'+', '7'}},      {'x', {'%'}},      {'z', {'2'}},
  };
  return table;
}

}  // namespace

std::vector<Match> dictionary_match(std::string_view password, const Dictionaries& dicts) {
  std::vector<Match> matches;
  const auto n = password.size();
  const auto lowered = lower(password);
  const std::string_view pl(lowered);
  for (const auto* dict : dicts) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto last = std::min(n, i + dict->max_length);
      for (std::size_t j = i; j < last; ++j) {
        const auto word = pl.substr(i, j - i + 1);
        const auto it = dict->ranks.find(word);
        if (it == dict->ranks.end()) continue;
        Match m;
        m.pattern = PatternKind::Dictionary;
        m.i = i;
        m.j = j;
        m.token = std::string(password.substr(i, j - i + 1));
        m.matched_word = std::string(word);
        m.rank = it->second;
        m.dictionary_name = dict->name;
        matches.push_back(std::move(m));
      }
    }
  }
  sort_by_span(matches);
  return matches;
}

std::vector<Match> reverse_dictionary_match(std::string_view password, const Dictionaries& dicts) {
  const std::string reversed(password.rbegin(), password.rend());
  auto matches = dictionary_match(reversed, dicts);
  const auto n = password.size();
  for (auto& m : matches) {
    std::reverse(m.token.begin(), m.token.end());
    m.reversed = true;
    const auto i = n - 1 - m.j;
    const auto j = n - 1 - m.i;
    m.i = i;
    m.j = j;
  }
  sort_by_span(matches);
  return matches;
}

std::vector<std::vector<std::pair<char, char>>> enumerate_l33t_subs(
    const std::vector<std::pair<char, std::vector<char>>>& table) {
  using Sub = std::vector<std::pair<char, char>>;  // (l33t char, letter)
  std::vector<Sub> subs{Sub{}};
  for (const auto& [letter, chars] : table) {
    std::vector<Sub> next;
    for (char l33t : chars) {
      for (const auto& sub : subs) {
        auto dup = std::find_if(sub.begin(), sub.end(), [&](const auto& p) { return p.first == l33t; });
        if (dup == sub.end()) {
          auto extension = sub;
          extension.emplace_back(l33t, letter);
          next.push_back(std::move(extension));
        } else {
          auto alternative = sub;
          alternative.erase(alternative.begin() + (dup - sub.begin()));
          alternative.emplace_back(l33t, letter);
          next.push_back(sub);
          next.push_back(std::move(alternative));
        }
      }
    }
    // Deduplicate on the sorted (letter, l33t char) pairs, keeping first seen.
    std::set<std::vector<std::pair<char, char>>> seen;
    subs.clear();
    for (auto& sub : next) {
      std::vector<std::pair<char, char>> label;
      for (const auto& [l33t, l] : sub) label.emplace_back(l, l33t);
      std::sort(label.begin(), label.end());
      if (seen.insert(label).second) subs.push_back(std::move(sub));
    }
  }
  // Converting to a map keeps the last letter for a repeated l33t char.
  std::vector<Sub> out;
  for (const auto& sub : subs) {
    Sub dict;
    for (const auto& [l33t, letter] : sub) {
      auto it = std::find_if(dict.begin(), dict.end(), [&](const auto& p) { return p.first == l33t; });
      if (it == dict.end()) {
        dict.emplace_back(l33t, letter);
      } else {
        it->second = letter;
      }
    }
    out.push_back(std::move(dict));
  }
  return out;
}

std::vector<Match> l33t_match(std::string_view password, const Dictionaries& dicts) {
  std::vector<std::pair<char, std::vector<char>>> subtable;
  for (const auto& [letter, chars] : l33t_table()) {
    std::vector<char> relevant;
    for (char c : chars) {
      if (password.find(c) != std::string_view::npos) relevant.push_back(c);
    }
    if (!relevant.empty()) subtable.emplace_back(letter, std::move(relevant));
  }

  std::vector<Match> matches;
  for (const auto& sub : enumerate_l33t_subs(subtable)) {
    if (sub.empty()) break;
    std::string subbed(password);
    for (auto& c : subbed) {
      for (const auto& [l33t, letter] : sub) {
        if (c == l33t) {
          c = letter;
          break;
        }
      }
    }
    for (auto& m : dictionary_match(subbed, dicts)) {
      const auto token = std::string(password.substr(m.i, m.j - m.i + 1));
      if (lower(token) == m.matched_word) continue;  // no actual substitution
      std::vector<std::pair<char, char>> used;
      for (const auto& [l33t, letter] : sub) {
        if (token.find(l33t) != std::string::npos) used.emplace_back(l33t, letter);
      }
      m.l33t = true;
      m.token = token;
      m.sub = std::move(used);
      matches.push_back(std::move(m));
    }
  }
  std::erase_if(matches, [](const Match& m) { return m.token.size() <= 1; });
  sort_by_span(matches);
  return matches;
}

namespace {

bool is_shifted(char c) {
  static constexpr std::string_view shifted = "~!@#$%^&*()_+QWERTYUIOP{}|ASDFGHJKL:\"ZXCVBNM<>?";
  return shifted.find(c) != std::string_view::npos;
}

std::vector<Match> spatial_match_helper(std::string_view password, const AdjacencyGraph& graph,
                                        const std::string& graph_name) {
  std::vector<Match> matches;
  const bool keyboard = graph_name == "qwerty" || graph_name == "dvorak";
  std::size_t i = 0;
  while (i + 1 < password.size()) {
    std::size_t j = i + 1;
    int last_direction = -2;  // none yet
    int turns = 0;
    int shifted_count = (keyboard && is_shifted(password[i])) ? 1 : 0;
    while (true) {
      const auto it = graph.find(std::string(1, password[j - 1]));
      bool found = false;
      if (j < password.size() && it != graph.end()) {
        const char cur = password[j];
        int direction = -1;
        for (const auto& adj : it->second) {
          ++direction;
          const auto pos = adj.find(cur);
          if (!adj.empty() && pos != std::string::npos) {
            found = true;
            if (pos == 1) ++shifted_count;
            if (last_direction != direction) {
              ++turns;
              last_direction = direction;
            }
            break;
          }
        }
      }
      if (found) {
        ++j;
      } else {
        if (j - i > 2) {
          Match m;
          m.pattern = PatternKind::Spatial;
          m.i = i;
          m.j = j - 1;
          m.token = std::string(password.substr(i, j - i));
          m.graph = graph_name;
          m.turns = turns;
          m.shifted_count = shifted_count;
          matches.push_back(std::move(m));
        }
        i = j;
        break;
      }
    }
  }
  return matches;
}

}  // namespace

std::vector<Match> spatial_match(std::string_view password) {
  const auto& g = graphs();
  std::vector<Match> matches;
  append(matches, spatial_match_helper(password, *g.qwerty, "qwerty"));
  append(matches, spatial_match_helper(password, *g.dvorak, "dvorak"));
  append(matches, spatial_match_helper(password, *g.keypad, "keypad"));
  append(matches, spatial_match_helper(password, *g.mac_keypad, "mac_keypad"));
  sort_by_span(matches);
  return matches;
}

namespace {

struct RepeatHit {
  std::size_t start = 0;
  std::size_t length = 0;  // whole repeated run
  std::size_t base = 0;    // length of the repeated unit
};

// Emulates a regex search for (.+)\1+ (greedy) or (.+?)\1+ (lazy) from `pos`.
std::optional<RepeatHit> search_repeat(std::string_view s, std::size_t pos, bool lazy) {
  const auto n = s.size();
  for (std::size_t start = pos; start < n; ++start) {
    std::size_t run = 0;  // '.' does not match a newline
    while (start + run < n && s[start + run] != '\n') ++run;
    const std::size_t max_base = run / 2;
    auto try_base = [&](std::size_t b) -> std::optional<RepeatHit> {
      if (s.substr(start + b, b) != s.substr(start, b)) return std::nullopt;
      std::size_t len = 2 * b;
      while (start + len + b <= n && s.substr(start + len, b) == s.substr(start, b)) len += b;
      return RepeatHit{start, len, b};
    };
    if (lazy) {
      for (std::size_t b = 1; b <= max_base; ++b) {
        if (auto hit = try_base(b)) return hit;
      }
    } else {
      for (std::size_t b = max_base; b >= 1; --b) {
        if (auto hit = try_base(b)) return hit;
      }
    }
  }
  return std::nullopt;
}

// Shortest unit u such that s == u repeated at least twice.
std::size_t shortest_period(std::string_view s) {
  for (std::size_t b = 1; b <= s.size() / 2; ++b) {
    if (s.size() % b != 0) continue;
    bool ok = true;
    for (std::size_t k = b; k < s.size() && ok; k += b) ok = s.substr(k, b) == s.substr(0, b);
    if (ok) return b;
  }
  return s.size();
}

}  // namespace

std::vector<Match> repeat_match(std::string_view password, const Dictionaries& dicts) {
  std::vector<Match> matches;
  std::size_t last_index = 0;
  while (last_index < password.size()) {
    const auto greedy = search_repeat(password, last_index, false);
    if (!greedy) break;
    const auto lazy = search_repeat(password, last_index, true);
    RepeatHit hit;
    std::string base_token;
    if (greedy->length > lazy->length) {
      // greedy wins for 'aabaab'; its unit may itself repeat
      hit = *greedy;
      const auto whole = password.substr(hit.start, hit.length);
      base_token = std::string(whole.substr(0, shortest_period(whole)));
    } else {
      hit = *lazy;
      base_token = std::string(password.substr(hit.start, hit.base));
    }
    auto base = most_guessable_match_sequence(base_token, omnimatch(base_token, dicts));
    Match m;
    m.pattern = PatternKind::Repeat;
    m.i = hit.start;
    m.j = hit.start + hit.length - 1;
    m.token = std::string(password.substr(hit.start, hit.length));
    m.base_guesses = base.guesses;
    m.repeat_count = static_cast<double>(hit.length) / static_cast<double>(base_token.size());
    m.base_token = std::move(base_token);
    matches.push_back(std::move(m));
    last_index = hit.start + hit.length;
  }
  return matches;
}

std::vector<Match> sequence_match(std::string_view password) {
  constexpr int kMaxDelta = 5;
  std::vector<Match> result;
  if (password.size() <= 1) return result;

  auto update = [&](std::size_t i, std::size_t j, int delta) {
    if (!(j - i > 1 || std::abs(delta) == 1)) return;
    if (!(std::abs(delta) > 0 && std::abs(delta) <= kMaxDelta)) return;
    Match m;
    m.pattern = PatternKind::Sequence;
    m.i = i;
    m.j = j;
    m.token = std::string(password.substr(i, j - i + 1));
    m.ascending = delta > 0;
    result.push_back(std::move(m));
  };

  auto code = [&](std::size_t k) { return static_cast<int>(static_cast<unsigned char>(password[k])); };
  std::size_t i = 0;
  std::optional<int> last_delta;
  for (std::size_t k = 1; k < password.size(); ++k) {
    const int delta = code(k) - code(k - 1);
    if (!last_delta) last_delta = delta;
    if (delta == *last_delta) continue;
    const auto j = k - 1;
    update(i, j, *last_delta);
    i = j;
    last_delta = delta;
  }
  update(i, password.size() - 1, *last_delta);
  return result;
}

std::vector<Match> regex_match(std::string_view password) {
  // recent_year: 19\d\d|200\d|201\d, non-overlapping, leftmost first
  std::vector<Match> matches;
  std::size_t p = 0;
  while (p + 4 <= password.size()) {
    const auto t = password.substr(p, 4);
    const bool hit = (t[0] == '1' && t[1] == '9' && is_digit(t[2]) && is_digit(t[3])) ||
                     (t[0] == '2' && t[1] == '0' && (t[2] == '0' || t[2] == '1') && is_digit(t[3]));
    if (!hit) {
      ++p;
      continue;
    }
    Match m;
    m.pattern = PatternKind::Regex;
    m.i = p;
    m.j = p + 3;
    m.token = std::string(t);
    m.year = std::stoi(m.token);
    matches.push_back(std::move(m));
    p += 4;
  }
  return matches;
}

namespace {

constexpr int kDateMinYear = 1000;
constexpr int kDateMaxYear = 2050;

struct Dmy {
  int year;
  int month;
  int day;
};

std::optional<std::pair<int, int>> map_ints_to_dm(int a, int b) {
  for (auto [d, m] : {std::pair{a, b}, std::pair{b, a}}) {
    if (d >= 1 && d <= 31 && m >= 1 && m <= 12) return std::pair{d, m};
  }
  return std::nullopt;
}

int two_to_four_digit_year(int year) {
  if (year > 99) return year;
  if (year > 50) return year + 1900;
  return year + 2000;
}

std::optional<Dmy> map_ints_to_dmy(std::array<int, 3> ints) {
  if (ints[1] > 31 || ints[1] <= 0) return std::nullopt;
  int over_12 = 0, over_31 = 0, under_1 = 0;
  for (int v : ints) {
    if ((v > 99 && v < kDateMinYear) || v > kDateMaxYear) return std::nullopt;
    if (v > 31) ++over_31;
    if (v > 12) ++over_12;
    if (v <= 0) ++under_1;
  }
  if (over_31 >= 2 || over_12 == 3 || under_1 >= 2) return std::nullopt;

  const std::array<std::pair<int, std::pair<int, int>>, 2> splits = {
      std::pair{ints[2], std::pair{ints[0], ints[1]}},
      std::pair{ints[0], std::pair{ints[1], ints[2]}},
  };
  for (const auto& [y, rest] : splits) {
    if (y >= kDateMinYear && y <= kDateMaxYear) {
      if (auto dm = map_ints_to_dm(rest.first, rest.second)) return Dmy{y, dm->second, dm->first};
      return std::nullopt;
    }
  }
  for (const auto& [y, rest] : splits) {
    if (auto dm = map_ints_to_dm(rest.first, rest.second)) {
      return Dmy{two_to_four_digit_year(y), dm->second, dm->first};
    }
  }
  return std::nullopt;
}

bool is_date_separator(char c) {
  return c == ' ' || (c >= '\t' && c <= '\r') || (c >= '\x1c' && c <= '\x1f') || c == '/' ||
         c == '\\' || c == '_' || c == '.' || c == '-';
}

int to_int(std::string_view digits) { return std::stoi(std::string(digits)); }

}  // namespace

std::vector<Match> date_match(std::string_view password) {
  static const std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> splits = {
      {4, {{1, 2}, {2, 3}}},
      {5, {{1, 3}, {2, 3}}},
      {6, {{1, 2}, {2, 4}, {4, 5}}},
      {7, {{1, 3}, {2, 3}, {4, 5}, {4, 6}}},
      {8, {{2, 4}, {4, 6}}},
  };
  std::vector<Match> matches;
  const auto n = password.size();

  // without separators: 4 to 8 digits
  for (std::size_t i = 0; i + 3 < n; ++i) {
    for (std::size_t j = i + 3; j < i + 8 && j < n; ++j) {
      const auto token = password.substr(i, j - i + 1);
      if (!all_of(token, is_digit)) continue;
      std::vector<Dmy> candidates;
      for (const auto& [k, l] : splits.at(token.size())) {
        if (auto dmy = map_ints_to_dmy({to_int(token.substr(0, k)), to_int(token.substr(k, l - k)),
                                        to_int(token.substr(l))})) {
          candidates.push_back(*dmy);
        }
      }
      if (candidates.empty()) continue;
      // prefer the year closest to the reference year
      auto best = candidates[0];
      int min_distance = std::abs(best.year - kReferenceYear);
      for (std::size_t c = 1; c < candidates.size(); ++c) {
        const int distance = std::abs(candidates[c].year - kReferenceYear);
        if (distance < min_distance) {
          best = candidates[c];
          min_distance = distance;
        }
      }
      Match m;
      m.pattern = PatternKind::Date;
      m.i = i;
      m.j = j;
      m.token = std::string(token);
      m.year = best.year;
      m.month = best.month;
      m.day = best.day;
      matches.push_back(std::move(m));
    }
  }

  // with separators: d{1,4} sep d{1,2} sep d{1,4}, length 6 to 10
  for (std::size_t i = 0; i + 5 < n; ++i) {
    for (std::size_t j = i + 5; j < i + 10 && j < n; ++j) {
      const auto token = password.substr(i, j - i + 1);
      std::size_t a = 0;
      while (a < token.size() && is_digit(token[a])) ++a;
      if (a < 1 || a > 4 || a >= token.size() || !is_date_separator(token[a])) continue;
      const char sep = token[a];
      std::size_t b = a + 1;
      while (b < token.size() && is_digit(token[b])) ++b;
      if (b - a - 1 < 1 || b - a - 1 > 2 || b >= token.size() || token[b] != sep) continue;
      const auto last = token.substr(b + 1);
      if (last.size() < 1 || last.size() > 4 || !all_of(last, is_digit)) continue;
      auto dmy = map_ints_to_dmy(
          {to_int(token.substr(0, a)), to_int(token.substr(a + 1, b - a - 1)), to_int(last)});
      if (!dmy) continue;
      Match m;
      m.pattern = PatternKind::Date;
      m.i = i;
      m.j = j;
      m.token = std::string(token);
      m.separator = std::string(1, sep);
      m.year = dmy->year;
      m.month = dmy->month;
      m.day = dmy->day;
      matches.push_back(std::move(m));
    }
  }

  // drop dates strictly inside other dates
  std::vector<Match> kept;
  for (const auto& m : matches) {
    const bool submatch = std::any_of(matches.begin(), matches.end(), [&](const Match& o) {
      if (o.i == m.i && o.j == m.j) return false;
      return o.i <= m.i && o.j >= m.j;
    });
    if (!submatch) kept.push_back(m);
  }
  sort_by_span(kept);
  return kept;
}

std::vector<Match> omnimatch(std::string_view password, const Dictionaries& dicts) {
  std::vector<Match> matches;
  append(matches, dictionary_match(password, dicts));
  append(matches, reverse_dictionary_match(password, dicts));
  append(matches, l33t_match(password, dicts));
  append(matches, spatial_match(password));
  append(matches, repeat_match(password, dicts));
  append(matches, sequence_match(password));
  append(matches, regex_match(password));
  append(matches, date_match(password));
  sort_by_span(matches);
  return matches;
}

}  // namespace pixi::strength::detail
