#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "matching.hpp"

namespace pixi::strength::detail {

namespace {

constexpr long double kBruteforceCardinality = 10;
constexpr long double kMinGuessesBeforeGrowingSequence = 10000;
constexpr long double kMinSubmatchGuessesSingleChar = 10;
constexpr long double kMinSubmatchGuessesMultiChar = 50;

// Same float arithmetic as the reference (multiply, then divide).
double n_choose_k(double n, double k) {
  if (k > n) return 0;
  if (k == 0) return 1;
  double r = 1;
  for (double d = 1; d <= k; ++d) {
    r *= n;
    r /= d;
    n -= 1;
  }
  return r;
}

struct GraphStats {
  double starting_positions;
  double average_degree;
};

GraphStats stats(const AdjacencyGraph& graph) {
  double total = 0;
  for (const auto& [key, neighbors] : graph) {
    total += static_cast<double>(std::count_if(neighbors.begin(), neighbors.end(),
                                               [](const std::string& s) { return !s.empty(); }));
  }
  return {static_cast<double>(graph.size()), total / static_cast<double>(graph.size())};
}

const GraphStats& keyboard_stats() {
  static const GraphStats s = stats(*graphs().qwerty);
  return s;
}

const GraphStats& keypad_stats() {
  static const GraphStats s = stats(*graphs().keypad);
  return s;
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

double uppercase_variations(const std::string& word) {
  const auto upper = std::count_if(word.begin(), word.end(), is_upper);
  if (upper == 0) return 1;
  const auto n = word.size();
  const bool start_upper = n >= 2 && is_upper(word[0]) && upper == 1;
  const bool end_upper = n >= 2 && is_upper(word[n - 1]) && upper == 1;
  const bool all_upper = std::none_of(word.begin(), word.end(), is_lower);
  if (start_upper || end_upper || all_upper) return 2;
  const auto lower = std::count_if(word.begin(), word.end(), is_lower);
  double variations = 0;
  for (long i = 1; i <= std::min<long>(upper, lower); ++i) {
    variations += n_choose_k(static_cast<double>(upper + lower), static_cast<double>(i));
  }
  return variations;
}

double l33t_variations(const Match& m) {
  if (!m.l33t) return 1;
  std::string chars = m.token;
  for (auto& c : chars) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  double variations = 1;
  for (const auto& [subbed, unsubbed] : m.sub) {
    const auto s = std::count(chars.begin(), chars.end(), subbed);
    const auto u = std::count(chars.begin(), chars.end(), unsubbed);
    if (s == 0 || u == 0) {
      variations *= 2;
    } else {
      double possibilities = 0;
      for (long i = 1; i <= std::min(u, s); ++i) {
        possibilities += n_choose_k(static_cast<double>(u + s), static_cast<double>(i));
      }
      variations *= possibilities;
    }
  }
  return variations;
}

long double bruteforce_guesses(const Match& m) {
  const auto len = m.token.size();
  const long double guesses = std::pow(kBruteforceCardinality, static_cast<long double>(len));
  const long double min_guesses =
      (len == 1 ? kMinSubmatchGuessesSingleChar : kMinSubmatchGuessesMultiChar) + 1;
  return std::max(guesses, min_guesses);
}

long double dictionary_guesses(const Match& m) {
  const double reversed = m.reversed ? 2 : 1;
  return static_cast<long double>(m.rank * uppercase_variations(m.token) * l33t_variations(m) *
                                  reversed);
}

long double spatial_guesses(const Match& m) {
  const auto& st = (m.graph == "qwerty" || m.graph == "dvorak") ? keyboard_stats() : keypad_stats();
  double guesses = 0;
  const auto len = static_cast<int>(m.token.size());
  for (int i = 2; i <= len; ++i) {
    const int possible_turns = std::min(m.turns, i - 1) + 1;
    for (int j = 1; j < possible_turns; ++j) {
      guesses += n_choose_k(i - 1, j - 1) * st.starting_positions * std::pow(st.average_degree, j);
    }
  }
  if (m.shifted_count > 0) {
    const int s = m.shifted_count;
    const int u = len - s;
    if (u == 0) {
      guesses *= 2;
    } else {
      double variations = 0;
      for (int i = 1; i <= std::min(s, u); ++i) variations += n_choose_k(s + u, i);
      guesses *= variations;
    }
  }
  return guesses;
}

long double sequence_guesses(const Match& m) {
  const char first = m.token[0];
  long double base;
  if (first == 'a' || first == 'A' || first == 'z' || first == 'Z' || first == '0' ||
      first == '1' || first == '9') {
    base = 4;
  } else if (first >= '0' && first <= '9') {
    base = 10;
  } else {
    base = 26;
  }
  if (!m.ascending) base *= 2;
  return base * static_cast<long double>(m.token.size());
}

long double year_guesses(int year) {
  return std::max(std::abs(year - kReferenceYear), kMinYearSpace);
}

long double date_guesses(const Match& m) {
  long double guesses = year_guesses(m.year) * 365;
  if (!m.separator.empty()) guesses *= 4;
  return guesses;
}

}  // namespace

long double estimate_match_guesses(Match& m, std::size_t password_length) {
  if (m.guesses > 0) return m.guesses;
  long double min_guesses = 1;
  if (m.token.size() < password_length) {
    min_guesses = m.token.size() == 1 ? kMinSubmatchGuessesSingleChar : kMinSubmatchGuessesMultiChar;
  }
  long double guesses = 0;
  switch (m.pattern) {
    case PatternKind::Bruteforce: guesses = bruteforce_guesses(m); break;
    case PatternKind::Dictionary: guesses = dictionary_guesses(m); break;
    case PatternKind::Spatial: guesses = spatial_guesses(m); break;
    case PatternKind::Repeat: guesses = m.base_guesses * static_cast<long double>(m.repeat_count); break;
    case PatternKind::Sequence: guesses = sequence_guesses(m); break;
    case PatternKind::Regex: guesses = year_guesses(m.year); break;
    case PatternKind::Date: guesses = date_guesses(m); break;
  }
  m.guesses = std::max(guesses, min_guesses);
  return m.guesses;
}

namespace {

struct Candidate {
  std::size_t l;
  long double g;
  long double pi;
  Match* m;
};

// Candidates per prefix end, kept in first-insertion order like the
// reference's dicts so ties resolve the same way.
struct Optimal {
  std::vector<std::vector<Candidate>> at;

  const Candidate* find(std::size_t k, std::size_t l) const {
    for (const auto& c : at[k]) {
      if (c.l == l) return &c;
    }
    return nullptr;
  }
};

long double factorial(std::size_t l) {
  long double f = 1;
  for (std::size_t i = 2; i <= l; ++i) f *= static_cast<long double>(i);
  return f;
}

}  // namespace

Segmentation most_guessable_match_sequence(std::string_view password, std::vector<Match> matches) {
  const auto n = password.size();
  if (n == 0) return {};

  std::vector<std::vector<Match*>> by_j(n);
  for (auto& m : matches) by_j[m.j].push_back(&m);
  for (auto& list : by_j) {
    std::stable_sort(list.begin(), list.end(), [](const Match* a, const Match* b) { return a->i < b->i; });
  }

  Optimal optimal;
  optimal.at.resize(n);
  std::deque<Match> bruteforce;  // stable storage for generated matches

  auto update = [&](Match& m, std::size_t l) {
    const auto k = m.j;
    long double pi = estimate_match_guesses(m, n);
    if (l > 1) pi *= optimal.find(m.i - 1, l - 1)->pi;
    const long double g =
        factorial(l) * pi + std::pow(kMinGuessesBeforeGrowingSequence, static_cast<long double>(l - 1));
    for (const auto& c : optimal.at[k]) {
      if (c.l > l) continue;
      if (c.g <= g) return;
    }
    for (auto& c : optimal.at[k]) {
      if (c.l == l) {
        c = {l, g, pi, &m};
        return;
      }
    }
    optimal.at[k].push_back({l, g, pi, &m});
  };

  auto make_bruteforce = [&](std::size_t i, std::size_t j) -> Match& {
    Match m;
    m.pattern = PatternKind::Bruteforce;
    m.i = i;
    m.j = j;
    m.token = std::string(password.substr(i, j - i + 1));
    bruteforce.push_back(std::move(m));
    return bruteforce.back();
  };

  for (std::size_t k = 0; k < n; ++k) {
    for (Match* m : by_j[k]) {
      if (m->i > 0) {
        const auto before = optimal.at[m->i - 1];  // copy: ls to extend
        for (const auto& c : before) update(*m, c.l + 1);
      } else {
        update(*m, 1);
      }
    }
    update(make_bruteforce(0, k), 1);
    for (std::size_t i = 1; i <= k; ++i) {
      Match& m = make_bruteforce(i, k);
      const auto before = optimal.at[i - 1];
      for (const auto& c : before) {
        // two adjacent bruteforce matches are never optimal
        if (c.m->pattern == PatternKind::Bruteforce) continue;
        update(m, c.l + 1);
      }
    }
  }

  // unwind from the best final candidate
  std::size_t l = 0;
  long double g = std::numeric_limits<long double>::infinity();
  for (const auto& c : optimal.at[n - 1]) {
    if (c.g < g) {
      l = c.l;
      g = c.g;
    }
  }
  Segmentation result;
  result.guesses = g;
  std::vector<Match> sequence;
  std::ptrdiff_t k = static_cast<std::ptrdiff_t>(n) - 1;
  while (k >= 0) {
    const Match* m = optimal.find(static_cast<std::size_t>(k), l)->m;
    sequence.push_back(*m);
    k = static_cast<std::ptrdiff_t>(m->i) - 1;
    --l;
  }
  std::reverse(sequence.begin(), sequence.end());
  result.sequence = std::move(sequence);
  return result;
}

}  // namespace pixi::strength::detail
