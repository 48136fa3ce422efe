#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixi/records/participant.hpp"
#include "pixi/strength/strength.hpp"
#include "pixi/study/config.hpp"
#include "pixi/study/stats.hpp"

namespace pixi::study {

// One participant with the derived analysis fields.
struct ParticipantRecord {
  records::ParticipantExport data;

  // strength (only when the plaintext password was exported)
  std::optional<std::size_t> password_length;
  std::optional<double> log10_guesses;
  std::optional<int> score;
  std::optional<strength::GuessabilityClass> guess_class;
  std::optional<strength::KeywordUsage> keyword_usage;
  int keywords_used = 0;

  std::optional<double> sus;
  std::optional<int> satisfaction;
  std::optional<std::string> attention;
  std::optional<int> recall_count;  // latest hint-login re-selection

  // Session-2 login: the first episode only.
  bool attempted_login = false;
  bool login_success = false;
  double login_time_s = 0.0;  // summed over the episode's attempts
};

ParticipantRecord derive(const records::ParticipantExport& data, const StudyConfig& config);

struct NamedTest {
  std::string name;
  TestResult result;
};

// The report document (sections a-h) as JSON.
nlohmann::ordered_json report(const std::vector<records::ParticipantExport>& records,
                              const StudyConfig& config);

// Same content rendered as Markdown tables.
std::string render_markdown(const nlohmann::ordered_json& report);

nlohmann::ordered_json to_json(const TestResult& result);

// {count, total, percent}; percent is null for an empty denominator.
nlohmann::ordered_json ratio(std::size_t count, std::size_t total);

}  // namespace pixi::study
