#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixi/flow/session.hpp"
#include "pixi/records/participant.hpp"

namespace pixi::auth {

// What a stored flow session belongs to.
struct StoredSession {
  flow::FlowSession session;
  std::string worker_id;
  std::string username;  // empty until registration (or for the hint flow's owner)
};

struct AccountRow {
  std::string username;
  flow::Condition condition = flow::Condition::Control;
  std::string digest;
  Millis created_at = 0;
  // The participant's fixed export fields (identity, registration, nudge
  // events), serialized once at registration.
  nlohmann::ordered_json profile;
};

struct LoginState {
  int episode = 1;
  int failures = 0;        // in the current episode
  bool closed = false;     // the episode ended in a success
  Millis closed_at = 0;
  Millis hint_started_at = 0;  // PiXi-Hints re-selection opened for this episode
};

// Single-file SQLite store in WAL mode. All methods are thread-safe; a
// transaction holds the connection for its whole duration.
class Store {
public:
  explicit Store(const std::string& path);
  ~Store();

  void transaction(const std::function<void()>& body);

  std::optional<std::string> meta(const std::string& key);
  void set_meta(const std::string& key, const std::string& value);

  void save_session(const StoredSession& stored);
  std::optional<StoredSession> load_session(const std::string& session_id);

  // Conflict when the username exists.
  void insert_account(const AccountRow& account);
  std::optional<AccountRow> find_account(const std::string& username);
  // Ordered by (created_at, username).
  std::vector<AccountRow> accounts();

  LoginState login_state(const std::string& username);
  void set_login_state(const std::string& username, const LoginState& state);
  void add_login_attempt(const std::string& username, const records::LoginAttemptRecord& attempt);
  std::vector<records::LoginAttemptRecord> login_attempts(const std::string& username);

  void add_hint_recall(const std::string& username, const records::HintRecallRecord& recall);
  std::vector<records::HintRecallRecord> hint_recalls(const std::string& username);

  void save_questionnaire(const std::string& username, const records::Questionnaire& q);
  std::optional<records::Questionnaire> questionnaire(const std::string& username);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::recursive_mutex mutex_;
};

// Plaintext passwords for research export, encrypted at rest with a
// secret key (XSalsa20-Poly1305) in a database file of their own.
class ResearchVault {
public:
  static constexpr std::size_t kKeyBytes = 32;
  using Key = std::array<unsigned char, kKeyBytes>;

  ResearchVault(const std::string& path, const Key& key);
  ~ResearchVault();

  void put(const std::string& username, const std::string& plaintext);
  std::optional<std::string> get(const std::string& username);

  static Key generate_key();
  // 64 hex digits.
  static Key key_from_hex(std::string_view hex);
  static std::string key_to_hex(const Key& key);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::mutex mutex_;
};

}  // namespace pixi::auth
