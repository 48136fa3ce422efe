#include "pixi/strength/strength.hpp"

#include <cmath>

#include "matching.hpp"
#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"

namespace pixi::strength {

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::Dictionary: return "dictionary";
    case PatternKind::Spatial: return "spatial";
    case PatternKind::Repeat: return "repeat";
    case PatternKind::Sequence: return "sequence";
    case PatternKind::Regex: return "regex";
    case PatternKind::Date: return "date";
    case PatternKind::Bruteforce: return "bruteforce";
  }
  return "bruteforce";
}

std::string_view to_string(GuessabilityClass c) {
  switch (c) {
    case GuessabilityClass::OnlineUnsafe: return "online_unsafe";
    case GuessabilityClass::OfflineUnsafe: return "offline_unsafe";
    case GuessabilityClass::Safe: return "safe";
  }
  return "safe";
}

std::string_view to_string(KeywordMatch m) {
  switch (m) {
    case KeywordMatch::None: return "none";
    case KeywordMatch::Variant: return "variant";
    case KeywordMatch::Direct: return "direct";
  }
  return "none";
}

StrengthReport estimate_guesses(std::string_view password, std::span<const std::string> user_dictionary) {
  if (password.empty()) throw Error(ErrorCode::InvalidArgument, "password must not be empty");

  detail::Dictionaries dicts;
  for (const auto& d : detail::default_dictionaries()) dicts.push_back(&d);
  detail::RankedDictionary user;
  user.name = "user_inputs";
  for (const auto& word : user_dictionary) {
    if (word.empty()) continue;
    std::string lowered = word;
    for (auto& c : lowered) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    user.owned.push_back(std::make_unique<std::string>(std::move(lowered)));
    user.add(*user.owned.back(), 1);
  }
  dicts.push_back(&user);

  auto seg = detail::most_guessable_match_sequence(password, detail::omnimatch(password, dicts));

  StrengthReport report;
  report.password_length = content::utf8_length(password);
  report.log10_guesses = static_cast<double>(std::log10(seg.guesses));
  report.score = score_from_log10(report.log10_guesses);
  for (const auto& m : seg.sequence) {
    MatchSpan span;
    span.pattern = m.pattern;
    span.begin = m.i;
    span.end = m.j + 1;
    span.log10_guesses = static_cast<double>(std::log10(m.guesses));
    if (m.pattern == PatternKind::Dictionary) {
      span.dictionary_name = m.dictionary_name;
      span.reversed = m.reversed;
      span.l33t = m.l33t;
    }
    report.match_spans.push_back(std::move(span));
  }
  return report;
}

int score_from_log10(double log10_guesses) {
  if (log10_guesses < 3) return 0;
  if (log10_guesses < 6) return 1;
  if (log10_guesses < 8) return 2;
  if (log10_guesses < 10) return 3;
  return 4;
}

int score_from_guesses(double guesses) {
  if (guesses < 1e3) return 0;
  if (guesses < 1e6) return 1;
  if (guesses < 1e8) return 2;
  if (guesses < 1e10) return 3;
  return 4;
}

GuessabilityClass classify(double guesses, const Thresholds& t) {
  if (guesses < t.online) return GuessabilityClass::OnlineUnsafe;
  if (guesses < t.offline) return GuessabilityClass::OfflineUnsafe;
  return GuessabilityClass::Safe;
}

GuessabilityClass classify_log10(double log10_guesses, const Thresholds& t) {
  if (log10_guesses < std::log10(t.online)) return GuessabilityClass::OnlineUnsafe;
  if (log10_guesses < std::log10(t.offline)) return GuessabilityClass::OfflineUnsafe;
  return GuessabilityClass::Safe;
}

KeywordUsage detect_keyword_usage(std::string_view password, std::span<const std::string> keywords) {
  KeywordUsage usage;
  const auto folded = content::case_fold(content::remove_punctuation(password));
  for (const auto& keyword : keywords) {
    auto flag = KeywordMatch::None;
    if (!keyword.empty()) {
      if (password.find(keyword) != std::string_view::npos) {
        flag = KeywordMatch::Direct;
      } else if (folded.find(content::case_fold(content::remove_punctuation(keyword))) !=
                 std::string::npos) {
        flag = KeywordMatch::Variant;
      }
    }
    usage.flags.push_back(flag);
    usage.any_used = usage.any_used || flag != KeywordMatch::None;
  }
  return usage;
}

nlohmann::ordered_json to_json(const StrengthReport& report) {
  nlohmann::ordered_json j;
  j["password_length"] = report.password_length;
  j["log10_guesses"] = report.log10_guesses;
  j["score"] = report.score;
  auto spans = nlohmann::ordered_json::array();
  for (const auto& s : report.match_spans) {
    nlohmann::ordered_json span;
    span["pattern"] = to_string(s.pattern);
    span["begin"] = s.begin;
    span["end"] = s.end;
    span["log10_guesses"] = s.log10_guesses;
    if (s.pattern == PatternKind::Dictionary) {
      span["dictionary"] = s.dictionary_name;
      span["reversed"] = s.reversed;
      span["l33t"] = s.l33t;
    }
    spans.push_back(std::move(span));
  }
  j["match_spans"] = std::move(spans);
  return j;
}

bool is_common_password(std::string_view password, std::size_t top_n) {
  std::string lowered(password);
  for (auto& c : lowered) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  const auto& passwords = detail::default_dictionaries().front();
  const auto it = passwords.ranks.find(lowered);
  return it != passwords.ranks.end() && static_cast<std::size_t>(it->second) <= top_n;
}

std::vector<DictionaryInfo> bundled_dictionaries() {
  std::vector<DictionaryInfo> out;
  for (const auto& d : detail::default_dictionaries()) out.push_back({d.name, d.ranks.size()});
  return out;
}

}  // namespace pixi::strength
