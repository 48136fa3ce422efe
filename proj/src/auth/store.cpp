#include "pixi/auth/store.hpp"

#include <sodium.h>

#include "pixi/flow/serialize.hpp"
#include "sqlite.hpp"

namespace pixi::auth {

using detail::Database;
using detail::Statement;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS meta (
  key TEXT PRIMARY KEY,
  value TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
  session_id TEXT PRIMARY KEY,
  worker_id TEXT NOT NULL,
  username TEXT NOT NULL,
  body TEXT NOT NULL,            -- flow session JSON, including the random stream
  updated_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS accounts (
  username TEXT PRIMARY KEY,
  condition TEXT NOT NULL,
  digest TEXT NOT NULL,          -- argon2id encoded string
  created_at INTEGER NOT NULL,
  profile TEXT NOT NULL          -- fixed part of the participant export record
);
CREATE TABLE IF NOT EXISTS login_state (
  username TEXT PRIMARY KEY,
  episode INTEGER NOT NULL,
  failures INTEGER NOT NULL,
  closed INTEGER NOT NULL,
  closed_at INTEGER NOT NULL,
  hint_started_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS login_attempts (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  username TEXT NOT NULL,
  episode INTEGER NOT NULL,
  attempt_index INTEGER NOT NULL CHECK (attempt_index BETWEEN 1 AND 3),
  success INTEGER NOT NULL,
  duration_s REAL NOT NULL,
  at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS login_attempts_user ON login_attempts (username, id);
CREATE TABLE IF NOT EXISTS hint_recalls (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  username TEXT NOT NULL,
  session_id TEXT NOT NULL,
  keywords TEXT NOT NULL,        -- JSON array
  recall_count INTEGER NOT NULL,
  started_at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS hint_recalls_user ON hint_recalls (username, id);
CREATE TABLE IF NOT EXISTS questionnaires (
  username TEXT PRIMARY KEY,
  sus TEXT NOT NULL,             -- JSON array of 10 answers
  satisfaction INTEGER NOT NULL,
  attention TEXT NOT NULL,
  submitted_at INTEGER NOT NULL
);
)sql";

constexpr const char* kSchemaVersion = "1";

void open_wal(Database& db) {
  db.exec("PRAGMA journal_mode=WAL;");
  db.exec("PRAGMA synchronous=NORMAL;");
  db.exec("PRAGMA foreign_keys=ON;");
}

}  // namespace

struct Store::Impl {
  explicit Impl(const std::string& path) : db(path) {}
  Database db;
  int depth = 0;
};

Store::Store(const std::string& path) : impl_(std::make_unique<Impl>(path)) {
  open_wal(impl_->db);
  impl_->db.exec(kSchema);
  const auto version = meta("schema_version");
  if (!version) {
    set_meta("schema_version", kSchemaVersion);
  } else if (*version != kSchemaVersion) {
    throw Error(ErrorCode::Io, "store schema version " + *version + " is not supported");
  }
}

Store::~Store() = default;

void Store::transaction(const std::function<void()>& body) {
  std::lock_guard lock(mutex_);
  const bool outer = impl_->depth == 0;
  if (outer) impl_->db.exec("BEGIN IMMEDIATE;");
  ++impl_->depth;
  try {
    body();
  } catch (...) {
    --impl_->depth;
    if (outer) impl_->db.exec("ROLLBACK;");
    throw;
  }
  --impl_->depth;
  if (outer) impl_->db.exec("COMMIT;");
}

std::optional<std::string> Store::meta(const std::string& key) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT value FROM meta WHERE key = ?");
  st.bind(1, key);
  if (!st.step()) return std::nullopt;
  return st.text(0);
}

void Store::set_meta(const std::string& key, const std::string& value) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "INSERT INTO meta (key, value) VALUES (?, ?) "
                          "ON CONFLICT(key) DO UPDATE SET value = excluded.value");
  st.bind(1, key).bind(2, value).run();
}

void Store::save_session(const StoredSession& stored) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db,
               "INSERT INTO sessions (session_id, worker_id, username, body, updated_at) "
               "VALUES (?, ?, ?, ?, ?) ON CONFLICT(session_id) DO UPDATE SET "
               "worker_id = excluded.worker_id, username = excluded.username, "
               "body = excluded.body, updated_at = excluded.updated_at");
  st.bind(1, stored.session.session_id)
      .bind(2, stored.worker_id)
      .bind(3, stored.username)
      .bind(4, flow::to_json(stored.session).dump())
      .bind(5, std::int64_t{stored.session.updated_at})
      .run();
}

std::optional<StoredSession> Store::load_session(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT worker_id, username, body FROM sessions WHERE session_id = ?");
  st.bind(1, session_id);
  if (!st.step()) return std::nullopt;
  StoredSession out;
  out.worker_id = st.text(0);
  out.username = st.text(1);
  out.session = flow::session_from_json(json::parse(st.text(2)));
  return out;
}

void Store::insert_account(const AccountRow& a) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "INSERT INTO accounts (username, condition, digest, created_at, profile) "
                          "VALUES (?, ?, ?, ?, ?)");
  st.bind(1, a.username)
      .bind(2, flow::to_string(a.condition))
      .bind(3, a.digest)
      .bind(4, std::int64_t{a.created_at})
      .bind(5, a.profile.dump());
  try {
    st.run();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Conflict) {
      throw Error(ErrorCode::Conflict, "username '" + a.username + "' is taken");
    }
    throw;
  }
}

namespace {

AccountRow account_from(const Statement& st) {
  AccountRow a;
  a.username = st.text(0);
  a.condition = flow::parse_condition(st.text(1));
  a.digest = st.text(2);
  a.created_at = st.integer(3);
  a.profile = json::parse(st.text(4));
  return a;
}

}  // namespace

std::optional<AccountRow> Store::find_account(const std::string& username) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT username, condition, digest, created_at, profile FROM accounts "
                          "WHERE username = ?");
  st.bind(1, username);
  if (!st.step()) return std::nullopt;
  return account_from(st);
}

std::vector<AccountRow> Store::accounts() {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT username, condition, digest, created_at, profile FROM accounts "
                          "ORDER BY created_at, username");
  std::vector<AccountRow> out;
  while (st.step()) out.push_back(account_from(st));
  return out;
}

LoginState Store::login_state(const std::string& username) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT episode, failures, closed, closed_at, hint_started_at FROM login_state "
                          "WHERE username = ?");
  st.bind(1, username);
  LoginState s;
  if (st.step()) {
    s.episode = static_cast<int>(st.integer(0));
    s.failures = static_cast<int>(st.integer(1));
    s.closed = st.integer(2) != 0;
    s.closed_at = st.integer(3);
    s.hint_started_at = st.integer(4);
  }
  return s;
}

void Store::set_login_state(const std::string& username, const LoginState& s) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db,
               "INSERT INTO login_state (username, episode, failures, closed, closed_at, "
               "hint_started_at) VALUES (?, ?, ?, ?, ?, ?) ON CONFLICT(username) DO UPDATE SET "
               "episode = excluded.episode, failures = excluded.failures, "
               "closed = excluded.closed, closed_at = excluded.closed_at, "
               "hint_started_at = excluded.hint_started_at");
  st.bind(1, username)
      .bind(2, std::int64_t{s.episode})
      .bind(3, std::int64_t{s.failures})
      .bind(4, std::int64_t{s.closed ? 1 : 0})
      .bind(5, std::int64_t{s.closed_at})
      .bind(6, std::int64_t{s.hint_started_at})
      .run();
}

void Store::add_login_attempt(const std::string& username, const records::LoginAttemptRecord& a) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "INSERT INTO login_attempts (username, episode, attempt_index, success, "
                          "duration_s, at) VALUES (?, ?, ?, ?, ?, ?)");
  st.bind(1, username)
      .bind(2, std::int64_t{a.episode})
      .bind(3, std::int64_t{a.attempt_index})
      .bind(4, std::int64_t{a.success ? 1 : 0})
      .bind(5, a.duration_s)
      .bind(6, std::int64_t{a.at})
      .run();
}

std::vector<records::LoginAttemptRecord> Store::login_attempts(const std::string& username) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT episode, attempt_index, success, duration_s, at FROM login_attempts "
                          "WHERE username = ? ORDER BY id");
  st.bind(1, username);
  std::vector<records::LoginAttemptRecord> out;
  while (st.step()) {
    out.push_back({static_cast<int>(st.integer(0)), static_cast<int>(st.integer(1)), st.integer(2) != 0,
                   st.real(3), st.integer(4)});
  }
  return out;
}

void Store::add_hint_recall(const std::string& username, const records::HintRecallRecord& h) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "INSERT INTO hint_recalls (username, session_id, keywords, recall_count, "
                          "started_at) VALUES (?, ?, ?, ?, ?)");
  st.bind(1, username)
      .bind(2, h.session_id)
      .bind(3, json(h.keywords).dump())
      .bind(4, std::int64_t{h.recall_count})
      .bind(5, std::int64_t{h.started_at})
      .run();
}

std::vector<records::HintRecallRecord> Store::hint_recalls(const std::string& username) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT session_id, keywords, recall_count, started_at FROM hint_recalls "
                          "WHERE username = ? ORDER BY id");
  st.bind(1, username);
  std::vector<records::HintRecallRecord> out;
  while (st.step()) {
    out.push_back({st.text(0), json::parse(st.text(1)).get<std::vector<std::string>>(),
                   static_cast<int>(st.integer(2)), st.integer(3)});
  }
  return out;
}

void Store::save_questionnaire(const std::string& username, const records::Questionnaire& q) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db,
               "INSERT INTO questionnaires (username, sus, satisfaction, attention, submitted_at) "
               "VALUES (?, ?, ?, ?, ?) ON CONFLICT(username) DO UPDATE SET sus = excluded.sus, "
               "satisfaction = excluded.satisfaction, attention = excluded.attention, "
               "submitted_at = excluded.submitted_at");
  st.bind(1, username)
      .bind(2, json(q.sus).dump())
      .bind(3, std::int64_t{q.satisfaction})
      .bind(4, q.attention)
      .bind(5, std::int64_t{q.submitted_at})
      .run();
}

std::optional<records::Questionnaire> Store::questionnaire(const std::string& username) {
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "SELECT sus, satisfaction, attention, submitted_at FROM questionnaires "
                          "WHERE username = ?");
  st.bind(1, username);
  if (!st.step()) return std::nullopt;
  records::Questionnaire q;
  q.sus = json::parse(st.text(0)).get<std::vector<int>>();
  q.satisfaction = static_cast<int>(st.integer(1));
  q.attention = st.text(2);
  q.submitted_at = st.integer(3);
  return q;
}

// ---------------------------------------------------------------------------

struct ResearchVault::Impl {
  Impl(const std::string& path, const Key& k) : db(path), key(k) {}
  Database db;
  Key key;
};

ResearchVault::ResearchVault(const std::string& path, const Key& key)
    : impl_(std::make_unique<Impl>(path, key)) {
  if (sodium_init() < 0) throw Error(ErrorCode::Internal, "libsodium failed to initialize");
  open_wal(impl_->db);
  impl_->db.exec(
      "CREATE TABLE IF NOT EXISTS plaintext (username TEXT PRIMARY KEY, nonce BLOB NOT NULL, "
      "sealed BLOB NOT NULL);");
}

ResearchVault::~ResearchVault() {
  sodium_memzero(impl_->key.data(), impl_->key.size());
}

void ResearchVault::put(const std::string& username, const std::string& plaintext) {
  std::vector<unsigned char> nonce(crypto_secretbox_NONCEBYTES);
  randombytes_buf(nonce.data(), nonce.size());
  std::vector<unsigned char> sealed(plaintext.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(sealed.data(), reinterpret_cast<const unsigned char*>(plaintext.data()),
                        plaintext.size(), nonce.data(), impl_->key.data());
  std::lock_guard lock(mutex_);
  Statement st(impl_->db, "INSERT INTO plaintext (username, nonce, sealed) VALUES (?, ?, ?) "
                          "ON CONFLICT(username) DO UPDATE SET nonce = excluded.nonce, "
                          "sealed = excluded.sealed");
  st.bind(1, username).bind_blob(2, nonce).bind_blob(3, sealed).run();
}

std::optional<std::string> ResearchVault::get(const std::string& username) {
  std::vector<unsigned char> nonce, sealed;
  {
    std::lock_guard lock(mutex_);
    Statement st(impl_->db, "SELECT nonce, sealed FROM plaintext WHERE username = ?");
    st.bind(1, username);
    if (!st.step()) return std::nullopt;
    nonce = st.blob(0);
    sealed = st.blob(1);
  }
  if (nonce.size() != crypto_secretbox_NONCEBYTES || sealed.size() < crypto_secretbox_MACBYTES) {
    throw Error(ErrorCode::Io, "research store entry for '" + username + "' is corrupt");
  }
  std::string plain(sealed.size() - crypto_secretbox_MACBYTES, '\0');
  if (crypto_secretbox_open_easy(reinterpret_cast<unsigned char*>(plain.data()), sealed.data(),
                                 sealed.size(), nonce.data(), impl_->key.data()) != 0) {
    throw Error(ErrorCode::Forbidden, "research store key does not match");
  }
  return plain;
}

ResearchVault::Key ResearchVault::generate_key() {
  if (sodium_init() < 0) throw Error(ErrorCode::Internal, "libsodium failed to initialize");
  Key key;
  crypto_secretbox_keygen(key.data());
  return key;
}

ResearchVault::Key ResearchVault::key_from_hex(std::string_view hex) {
  Key key;
  std::size_t len = 0;
  if (hex.size() != 2 * kKeyBytes ||
      sodium_hex2bin(key.data(), key.size(), hex.data(), hex.size(), nullptr, &len, nullptr) != 0 ||
      len != kKeyBytes) {
    throw Error(ErrorCode::InvalidArgument, "research key must be 64 hex digits");
  }
  return key;
}

std::string ResearchVault::key_to_hex(const Key& key) {
  std::string hex(2 * kKeyBytes + 1, '\0');
  sodium_bin2hex(hex.data(), hex.size(), key.data(), key.size());
  hex.pop_back();
  return hex;
}

}  // namespace pixi::auth
