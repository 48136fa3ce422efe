#include "pixi/records/participant.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "pixi/common/error.hpp"
#include "pixi/flow/serialize.hpp"

namespace pixi::records {

using json = nlohmann::ordered_json;

namespace {

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

}  // namespace

json to_json(const ParticipantExport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["digest_algorithm"] = r.digest_algorithm;
  j["username"] = r.username;
  j["worker_id"] = r.worker_id;
  j["condition"] = flow::to_string(r.condition);
  j["password_plain"] = optional_string(r.password_plain);
  j["created_at"] = r.created_at;
  j["registration_duration_s"] = r.registration_duration_s;
  j["category"] = r.category ? json(content::to_string(*r.category)) : json(nullptr);
  j["item_id"] = r.item_id;
  j["title"] = r.title;
  j["keywords"] = r.keywords;
  json events = json::array();
  for (const auto& e : r.nudge_events) events.push_back(flow::to_json(e));
  j["nudge_events"] = std::move(events);

  if (r.registration) {
    json reg;
    reg["session_id"] = r.registration->session_id;
    reg["seed"] = r.registration->seed;
    reg["started_at"] = r.registration->started_at;
    reg["completed_at"] = r.registration->completed_at;
    json actions = json::array();
    for (const auto& a : r.registration->actions) actions.push_back(flow::to_json(a));
    reg["actions"] = std::move(actions);
    j["registration"] = std::move(reg);
  } else {
    j["registration"] = nullptr;
  }

  if (r.questionnaire) {
    json q;
    q["sus"] = r.questionnaire->sus;
    q["satisfaction"] = r.questionnaire->satisfaction;
    q["attention"] = r.questionnaire->attention;
    q["submitted_at"] = r.questionnaire->submitted_at;
    j["questionnaire"] = std::move(q);
  } else {
    j["questionnaire"] = nullptr;
  }

  json attempts = json::array();
  for (const auto& a : r.login_attempts) {
    attempts.push_back(json{{"episode", a.episode},
                            {"attempt_index", a.attempt_index},
                            {"success", a.success},
                            {"duration_s", a.duration_s},
                            {"at", a.at}});
  }
  j["login_attempts"] = std::move(attempts);

  json recalls = json::array();
  for (const auto& h : r.hint_recalls) {
    recalls.push_back(json{{"session_id", h.session_id},
                           {"keywords", h.keywords},
                           {"recall_count", h.recall_count},
                           {"started_at", h.started_at}});
  }
  j["hint_recalls"] = std::move(recalls);
  return j;
}

ParticipantExport participant_from_json(const json& j) {
  try {
    ParticipantExport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kExportSchemaVersion) {
      throw Error(ErrorCode::Parse, "unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.digest_algorithm = j.at("digest_algorithm").get<std::string>();
    r.username = j.at("username").get<std::string>();
    r.worker_id = j.value("worker_id", std::string{});
    r.condition = flow::parse_condition(j.at("condition").get<std::string>());
    if (j.contains("password_plain") && !j["password_plain"].is_null()) {
      r.password_plain = j["password_plain"].get<std::string>();
    }
    r.created_at = j.at("created_at").get<Millis>();
    r.registration_duration_s = j.at("registration_duration_s").get<double>();
    if (!j.at("category").is_null()) r.category = content::parse_category(j["category"].get<std::string>());
    r.item_id = j.at("item_id").get<std::string>();
    r.title = j.at("title").get<std::string>();
    r.keywords = j.at("keywords").get<std::vector<std::string>>();
    for (const auto& e : j.at("nudge_events")) r.nudge_events.push_back(flow::event_from_json(e));

    if (const auto& reg = j.at("registration"); !reg.is_null()) {
      RegistrationRecord rec;
      rec.session_id = reg.at("session_id").get<std::string>();
      rec.seed = reg.at("seed").get<std::uint64_t>();
      rec.started_at = reg.at("started_at").get<Millis>();
      rec.completed_at = reg.at("completed_at").get<Millis>();
      for (const auto& a : reg.at("actions")) rec.actions.push_back(flow::action_from_json(a));
      r.registration = std::move(rec);
    }
    if (const auto& q = j.at("questionnaire"); !q.is_null()) {
      Questionnaire rec;
      rec.sus = q.at("sus").get<std::vector<int>>();
      rec.satisfaction = q.at("satisfaction").get<int>();
      rec.attention = q.at("attention").get<std::string>();
      rec.submitted_at = q.value("submitted_at", Millis{0});
      r.questionnaire = std::move(rec);
    }
    for (const auto& a : j.at("login_attempts")) {
      r.login_attempts.push_back({a.at("episode").get<int>(), a.at("attempt_index").get<int>(),
                                  a.at("success").get<bool>(), a.at("duration_s").get<double>(),
                                  a.at("at").get<Millis>()});
    }
    for (const auto& h : j.at("hint_recalls")) {
      r.hint_recalls.push_back({h.at("session_id").get<std::string>(),
                                h.at("keywords").get<std::vector<std::string>>(),
                                h.at("recall_count").get<int>(), h.at("started_at").get<Millis>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("participant record: ") + e.what());
  }
}

std::string to_jsonl_line(const ParticipantExport& record) { return to_json(record).dump(); }

JsonlReadResult read_jsonl(std::istream& in) {
  JsonlReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      result.records.push_back(participant_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      result.issues.push_back({line_no, e.what()});
    } catch (const Error& e) {
      result.issues.push_back({line_no, e.what()});
    }
  }
  return result;
}

JsonlReadResult read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_jsonl(in);
}

void write_jsonl(std::ostream& out, const std::vector<ParticipantExport>& records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

}  // namespace pixi::records
