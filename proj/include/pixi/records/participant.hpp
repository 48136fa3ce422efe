#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixi/flow/session.hpp"

namespace pixi::records {

inline constexpr int kExportSchemaVersion = 1;

// Answers for the attention-check item "Seven plus three equals eight".
inline constexpr std::array<std::string_view, 5> kLikertAnswers = {
    "strongly disagree", "disagree", "neutral", "agree", "strongly agree"};

struct Questionnaire {
  std::vector<int> sus;   // 10 items, 1..5
  int satisfaction = 0;   // 1..5
  std::string attention;  // one of kLikertAnswers
  Millis submitted_at = 0;

  friend bool operator==(const Questionnaire&, const Questionnaire&) = default;
};

struct LoginAttemptRecord {
  int episode = 1;
  int attempt_index = 1;  // 1..3 within the episode
  bool success = false;
  double duration_s = 0.0;
  Millis at = 0;

  friend bool operator==(const LoginAttemptRecord&, const LoginAttemptRecord&) = default;
};

struct HintRecallRecord {
  std::string session_id;
  std::vector<std::string> keywords;
  int recall_count = 0;
  Millis started_at = 0;

  friend bool operator==(const HintRecallRecord&, const HintRecallRecord&) = default;
};

// The registration flow as recorded: enough to rebuild the session by replay.
struct RegistrationRecord {
  std::string session_id;
  std::uint64_t seed = 0;
  Millis started_at = 0;
  Millis completed_at = 0;
  std::vector<flow::Action> actions;

  friend bool operator==(const RegistrationRecord&, const RegistrationRecord&) = default;
};

struct ParticipantExport {
  int schema_version = kExportSchemaVersion;
  std::string digest_algorithm;
  std::string username;
  std::string worker_id;
  flow::Condition condition = flow::Condition::Control;
  std::optional<std::string> password_plain;  // research mode only
  Millis created_at = 0;
  double registration_duration_s = 0.0;
  std::optional<content::Category> category;
  std::string item_id;
  std::string title;
  std::vector<std::string> keywords;
  std::vector<flow::NudgeEvent> nudge_events;
  std::optional<RegistrationRecord> registration;  // absent in event-only legacy records
  std::optional<Questionnaire> questionnaire;
  std::vector<LoginAttemptRecord> login_attempts;
  std::vector<HintRecallRecord> hint_recalls;

  friend bool operator==(const ParticipantExport&, const ParticipantExport&) = default;
};

nlohmann::ordered_json to_json(const ParticipantExport& record);
ParticipantExport participant_from_json(const nlohmann::ordered_json& j);

// One compact JSON object per line.
std::string to_jsonl_line(const ParticipantExport& record);

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct JsonlReadResult {
  std::vector<ParticipantExport> records;
  std::vector<ParseIssue> issues;  // malformed lines are skipped, not fatal
};

JsonlReadResult read_jsonl(std::istream& in);
JsonlReadResult read_jsonl_file(const std::string& path);
void write_jsonl(std::ostream& out, const std::vector<ParticipantExport>& records);

}  // namespace pixi::records
