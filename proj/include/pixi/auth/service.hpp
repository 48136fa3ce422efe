#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "pixi/auth/credentials.hpp"
#include "pixi/auth/store.hpp"
#include "pixi/common/random.hpp"
#include "pixi/content/catalog.hpp"
#include "pixi/flow/machine.hpp"
#include "pixi/records/participant.hpp"

namespace pixi::auth {

// Uniform over the three conditions.
flow::Condition assign_condition(RandomStream& rng);

struct ServiceConfig {
  std::uint64_t server_seed = 0;
  flow::FlowConfig flow;  // flow.server_seed is overwritten with server_seed
  PasswordPolicy policy;
  HashCost hash_cost;
  // Retain plaintext passwords (encrypted) and allow export. Needs a vault.
  bool research_export = false;
  // Largest accepted gap between the login page load and the submission.
  Millis max_login_duration = 2 * 60 * 60 * 1000;
};

struct Enrollment {
  std::string session_id;
  flow::Condition condition = flow::Condition::Control;
  nlohmann::ordered_json session;  // public view
};

struct Registration {
  std::string username;
  flow::Condition condition = flow::Condition::Control;
  double registration_duration_s = 0.0;
};

struct LoginOutcome {
  bool success = false;
  int episode = 1;
  int attempt_index = 1;
  double duration_s = 0.0;
  int attempts_remaining = 0;
};

struct HintStart {
  std::string session_id;
  nlohmann::ordered_json session;
};

// Serializes work per key (username or session id).
class KeyedMutex {
public:
  std::unique_lock<std::mutex> lock(const std::string& key);

private:
  std::mutex guard_;
  std::unordered_map<std::string, std::unique_ptr<std::mutex>> locks_;
};

class Service {
public:
  using Clock = std::function<Millis()>;

  Service(ServiceConfig config, const content::Catalog& catalog, Store& store,
          ResearchVault* vault = nullptr, Clock clock = now_millis);

  const ServiceConfig& config() const { return config_; }

  Enrollment enroll(const std::string& worker_id);

  // Flow views and transitions. Every response carries the session's public
  // view under "session" so a client can restore its page from any call.
  nlohmann::ordered_json session_view(const std::string& session_id);
  nlohmann::ordered_json intro_next(const std::string& session_id);
  nlohmann::ordered_json categories(const std::string& session_id);
  nlohmann::ordered_json select_category(const std::string& session_id, content::Category category,
                                         std::optional<bool> scrolled);
  nlohmann::ordered_json items(const std::string& session_id);
  nlohmann::ordered_json search(const std::string& session_id, const std::string& query);
  nlohmann::ordered_json select_item(const std::string& session_id, const std::string& item_id,
                                     bool via_search);
  nlohmann::ordered_json excerpt(const std::string& session_id);
  nlohmann::ordered_json shuffle(const std::string& session_id);
  nlohmann::ordered_json select_keyword(const std::string& session_id, const std::string& word,
                                        std::size_t position);
  nlohmann::ordered_json splash(const std::string& session_id);
  nlohmann::ordered_json dismiss_splash(const std::string& session_id, bool early);
  nlohmann::ordered_json register_context(const std::string& session_id);

  Registration register_account(const std::string& session_id, const std::string& username,
                                const std::string& password);

  // `page_loaded_at` is the login page's load time as posted by the client.
  LoginOutcome login(const std::string& username, const std::string& password,
                     Millis page_loaded_at);
  // Starts a new login episode (a study-session boundary).
  void reset_login_episode(const std::string& username);

  HintStart start_hint_login(const std::string& username);

  void submit_questionnaire(const std::string& username, const records::Questionnaire& q);

  // One record per account in (created_at, username) order.
  std::vector<records::ParticipantExport> export_records();
  std::string export_jsonl();
  // Loads previously exported records into an empty-or-disjoint store.
  std::size_t import_records(const std::vector<records::ParticipantExport>& records);

private:
  template <typename Fn>
  nlohmann::ordered_json mutate(const std::string& session_id, Fn&& fn);
  StoredSession load(const std::string& session_id);
  nlohmann::ordered_json with_view(const flow::FlowSession& s, nlohmann::ordered_json body = {});
  void maybe_record_recall(const StoredSession& stored);

  ServiceConfig config_;
  const content::Catalog& catalog_;
  Store& store_;
  ResearchVault* vault_;
  Clock clock_;
  PasswordHasher hasher_;
  KeyedMutex session_locks_;
  KeyedMutex user_locks_;
  std::mutex enroll_mutex_;
  RandomStream condition_rng_;
};

}  // namespace pixi::auth
