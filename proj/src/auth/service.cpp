#include "pixi/auth/service.hpp"

#include <algorithm>
#include <sstream>

#include <sodium.h>

#include "pixi/common/error.hpp"
#include "pixi/flow/serialize.hpp"

namespace pixi::auth {

using json = nlohmann::ordered_json;
using flow::Condition;

namespace {

constexpr int kMaxAttempts = 3;
constexpr const char* kConditionRngKey = "condition_rng";

std::string random_id() {
  unsigned char bytes[16];
  randombytes_buf(bytes, sizeof bytes);
  char hex[sizeof bytes * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, bytes, sizeof bytes);
  return hex;
}

void check_identifier(const std::string& value, const char* what) {
  if (value.empty() || value.size() > 64) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be 1-64 bytes");
  }
  for (unsigned char c : value) {
    if (c < 0x20 || c == 0x7F) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " contains control characters");
    }
  }
}

json item_json(const content::ContentItem& item) {
  return {{"item_id", item.item_id},
          {"category", content::to_string(item.category)},
          {"title", item.title},
          {"cover_ref", item.cover_ref}};
}

json items_json(const std::vector<const content::ContentItem*>& items) {
  json out = json::array();
  for (const auto* item : items) out.push_back(item_json(*item));
  return out;
}

flow::PixiSnapshot snapshot_from_profile(const records::ParticipantExport& profile) {
  flow::PixiSnapshot snap;
  snap.condition = profile.condition;
  snap.category = profile.category.value_or(content::Category::Books);
  snap.item_id = profile.item_id;
  snap.title = profile.title;
  snap.keywords = profile.keywords;
  snap.events = profile.nudge_events;
  return snap;
}

// The export record without its per-session parts.
json profile_of(records::ParticipantExport record) {
  record.password_plain.reset();
  record.questionnaire.reset();
  record.login_attempts.clear();
  record.hint_recalls.clear();
  return records::to_json(record);
}

}  // namespace

Condition assign_condition(RandomStream& rng) {
  return flow::kAllConditions[rng.uniform_index(flow::kAllConditions.size())];
}

std::unique_lock<std::mutex> KeyedMutex::lock(const std::string& key) {
  std::mutex* m = nullptr;
  {
    std::lock_guard guard(guard_);
    auto& slot = locks_[key];
    if (!slot) slot = std::make_unique<std::mutex>();
    m = slot.get();
  }
  return std::unique_lock(*m);
}

Service::Service(ServiceConfig config, const content::Catalog& catalog, Store& store,
                 ResearchVault* vault, Clock clock)
    : config_(std::move(config)),
      catalog_(catalog),
      store_(store),
      vault_(vault),
      clock_(std::move(clock)),
      hasher_(config_.hash_cost),
      condition_rng_(keyed_hash(config_.server_seed, "condition-assignment")) {
  config_.flow.server_seed = config_.server_seed;
  if (config_.research_export && !vault_) {
    throw Error(ErrorCode::InvalidArgument, "research export needs a research store");
  }
  if (const auto state = store_.meta(kConditionRngKey)) condition_rng_.restore(*state);
}

Enrollment Service::enroll(const std::string& worker_id) {
  check_identifier(worker_id, "worker_id");
  Condition condition;
  {
    std::lock_guard lock(enroll_mutex_);
    condition = assign_condition(condition_rng_);
    store_.set_meta(kConditionRngKey, condition_rng_.state());
  }
  const auto session_id = random_id();
  const auto seed = keyed_hash(config_.server_seed, session_id);
  auto session = flow::start_session(session_id, worker_id, condition, seed, clock_());
  store_.save_session({session, worker_id, ""});
  return {session_id, condition, flow::public_view(session)};
}

StoredSession Service::load(const std::string& session_id) {
  auto stored = store_.load_session(session_id);
  if (!stored) throw Error(ErrorCode::NotFound, "unknown session '" + session_id + "'");
  return std::move(*stored);
}

json Service::with_view(const flow::FlowSession& s, json body) {
  json out;
  out["session"] = flow::public_view(s);
  if (body.is_object()) out.update(body);
  return out;
}

template <typename Fn>
json Service::mutate(const std::string& session_id, Fn&& fn) {
  auto lock = session_locks_.lock(session_id);
  auto stored = load(session_id);
  if (stored.session.state.kind == flow::StateKind::Done) {
    throw Error(ErrorCode::WrongState, "session is finished");
  }
  json body = fn(stored.session, clock_());
  store_.transaction([&] {
    store_.save_session(stored);
    maybe_record_recall(stored);
  });
  return with_view(stored.session, std::move(body));
}

void Service::maybe_record_recall(const StoredSession& stored) {
  const auto& s = stored.session;
  if (s.purpose != flow::Purpose::HintLogin || s.state.kind != flow::StateKind::Splash) return;
  // Recorded once, when the third keyword moves the session to the splash.
  if (s.actions.empty() || s.actions.back().kind != flow::ActionKind::SelectKeyword) return;
  const int recall = flow::record_recall(s, s.original_keywords);
  store_.add_hint_recall(stored.username, {s.session_id, s.keywords, recall, s.started_at});
}

json Service::session_view(const std::string& session_id) {
  return with_view(load(session_id).session);
}

json Service::intro_next(const std::string& session_id) {
  return mutate(session_id, [&](flow::FlowSession& s, Millis now) {
    flow::advance_intro(s, now);
    return json::object();
  });
}

json Service::categories(const std::string& session_id) {
  const auto s = load(session_id).session;
  json body;
  json order = json::array();
  for (auto c : s.category_order) order.push_back(content::to_string(c));
  body["categories"] = std::move(order);
  body["centered"] = content::to_string(s.centered_category);
  body["intro"] = {{"video_url", flow::intro_content(s, config_.flow).video_url},
                   {"memorable_keywords_advice",
                    flow::intro_content(s, config_.flow).memorable_keywords_advice}};
  return with_view(s, std::move(body));
}

json Service::select_category(const std::string& session_id, content::Category category,
                              std::optional<bool> scrolled) {
  return mutate(session_id, [&](flow::FlowSession& s, Millis now) {
    flow::select_category(s, category, now, scrolled);
    return json::object();
  });
}

json Service::items(const std::string& session_id) {
  const auto s = load(session_id).session;
  return with_view(s, {{"items", items_json(flow::suggested_items(s, catalog_, config_.flow))}});
}

json Service::search(const std::string& session_id, const std::string& query) {
  const auto s = load(session_id).session;
  if (!s.selected_category) throw Error(ErrorCode::WrongState, "no category selected");
  return with_view(s, {{"items", items_json(content::search_items(catalog_, *s.selected_category, query))}});
}

json Service::select_item(const std::string& session_id, const std::string& item_id, bool via_search) {
  return mutate(session_id, [&](flow::FlowSession& s, Millis now) {
    flow::select_item(s, catalog_, config_.flow, item_id, via_search, now);
    return json::object();
  });
}

json Service::excerpt(const std::string& session_id) {
  const auto s = load(session_id).session;
  if (s.state.kind != flow::StateKind::KeywordSelect || !s.current_excerpt) {
    throw Error(ErrorCode::WrongState, "no excerpt outside keyword selection");
  }
  json body;
  body["excerpt"] = flow::to_json(*s.current_excerpt);
  body["step"] = s.state.keyword_step;
  return with_view(s, std::move(body));
}

json Service::shuffle(const std::string& session_id) {
  return mutate(session_id, [&](flow::FlowSession& s, Millis now) {
    flow::shuffle_excerpt(s, catalog_, now);
    return json{{"excerpt", flow::to_json(*s.current_excerpt)}};
  });
}

json Service::select_keyword(const std::string& session_id, const std::string& word, std::size_t position) {
  return mutate(session_id, [&](flow::FlowSession& s, Millis now) {
    flow::select_keyword(s, catalog_, word, position, now);
    json body = json::object();
    if (s.current_excerpt) body["excerpt"] = flow::to_json(*s.current_excerpt);
    if (s.purpose == flow::Purpose::HintLogin) {
      body["recall_recorded"] = s.state.kind == flow::StateKind::Splash;
    }
    return body;
  });
}

json Service::splash(const std::string& session_id) {
  const auto s = load(session_id).session;
  const auto payload = flow::splash_payload(s, config_.flow);
  return with_view(s, {{"splash",
                        {{"keywords", payload.keywords},
                         {"duration_ms", payload.duration_ms},
                         {"background", payload.background},
                         {"text_color", payload.text_color}}}});
}

json Service::dismiss_splash(const std::string& session_id, bool early) {
  return mutate(session_id, [&](flow::FlowSession& s, Millis now) {
    flow::dismiss_splash(s, early, now);
    return json::object();
  });
}

json Service::register_context(const std::string& session_id) {
  const auto s = load(session_id).session;
  const auto ctx = flow::registration_context(s, catalog_);
  json body;
  if (ctx) {
    body["context"] = {{"cover_ref", ctx->cover_ref}, {"title", ctx->title}, {"keywords", ctx->keywords}};
  } else {
    body["context"] = nullptr;
  }
  body["min_password_length"] = config_.policy.min_length;
  return with_view(s, std::move(body));
}

Registration Service::register_account(const std::string& session_id, const std::string& username,
                                       const std::string& password) {
  check_identifier(username, "username");
  auto session_lock = session_locks_.lock(session_id);
  auto stored = load(session_id);
  auto& s = stored.session;
  if (s.purpose != flow::Purpose::Registration) {
    throw Error(ErrorCode::WrongState, "hint-login sessions cannot register");
  }
  if (s.state.kind != flow::StateKind::Register) {
    throw Error(ErrorCode::WrongState, "registration needs the Register step");
  }
  config_.policy.check(password);

  auto user_lock = user_locks_.lock(username);
  if (store_.find_account(username)) {
    throw Error(ErrorCode::Conflict, "username '" + username + "' is taken");
  }
  const auto digest = hasher_.hash(password);
  const Millis now = clock_();

  records::ParticipantExport record;
  record.digest_algorithm = std::string(PasswordHasher::algorithm());
  record.username = username;
  record.worker_id = stored.worker_id;
  record.condition = s.condition;
  record.created_at = now;
  record.registration_duration_s = static_cast<double>(now - s.started_at) / 1000.0;
  flow::complete(s, now);
  if (s.condition != Condition::Control) {
    const auto snap = flow::snapshot(s, catalog_);
    record.category = snap.category;
    record.item_id = snap.item_id;
    record.title = snap.title;
    record.keywords = snap.keywords;
    record.nudge_events = snap.events;
  }
  record.registration = records::RegistrationRecord{s.session_id, s.seed, s.started_at, now, s.actions};
  stored.username = username;

  if (config_.research_export) vault_->put(username, password);
  store_.transaction([&] {
    store_.insert_account({username, s.condition, digest, now, profile_of(record)});
    store_.save_session(stored);
  });
  return {username, s.condition, record.registration_duration_s};
}

LoginOutcome Service::login(const std::string& username, const std::string& password,
                            Millis page_loaded_at) {
  auto lock = user_locks_.lock(username);
  const auto account = store_.find_account(username);
  if (!account) throw Error(ErrorCode::NotFound, "unknown username");

  auto state = store_.login_state(username);
  if (state.closed) state = LoginState{state.episode + 1, 0, false, 0, 0};
  if (state.failures >= kMaxAttempts) {
    throw Error(ErrorCode::EpisodeExhausted, "three unsuccessful attempts; the login episode is over");
  }
  const Millis now = clock_();
  if (page_loaded_at > now) page_loaded_at = now;  // client clock ahead of ours
  Millis start = page_loaded_at;
  // PiXi-Hints logins are timed from the start of the keyword re-selection.
  if (state.failures == 0 && state.hint_started_at > 0 && state.hint_started_at < start) {
    start = state.hint_started_at;
  }
  if (now - start > config_.max_login_duration) {
    throw Error(ErrorCode::InvalidArgument, "page-load time is too old");
  }

  LoginOutcome out;
  out.success = hasher_.verify(account->digest, password);
  out.episode = state.episode;
  out.attempt_index = state.failures + 1;
  out.duration_s = static_cast<double>(now - start) / 1000.0;

  store_.transaction([&] {
    store_.add_login_attempt(username, {out.episode, out.attempt_index, out.success, out.duration_s, now});
    if (out.success) {
      state.closed = true;
      state.closed_at = now;
    } else {
      ++state.failures;
    }
    store_.set_login_state(username, state);
  });
  out.attempts_remaining = out.success ? 0 : kMaxAttempts - state.failures;
  return out;
}

void Service::reset_login_episode(const std::string& username) {
  auto lock = user_locks_.lock(username);
  if (!store_.find_account(username)) throw Error(ErrorCode::NotFound, "unknown username");
  const auto state = store_.login_state(username);
  if (state.failures == 0 && !state.closed) return;  // nothing happened in this episode yet
  store_.set_login_state(username, LoginState{state.episode + 1, 0, false, 0, 0});
}

HintStart Service::start_hint_login(const std::string& username) {
  auto lock = user_locks_.lock(username);
  const auto account = store_.find_account(username);
  if (!account) throw Error(ErrorCode::NotFound, "unknown username");
  if (account->condition != Condition::PiXiHints) {
    throw Error(ErrorCode::Forbidden, "keyword re-selection is only offered to PiXi-Hints accounts");
  }
  const auto profile = records::participant_from_json(account->profile);
  const auto session_id = random_id();
  const Millis now = clock_();
  auto session = flow::begin_hint_login(session_id, profile.worker_id, snapshot_from_profile(profile),
                                        keyed_hash(config_.server_seed, session_id), now);
  auto state = store_.login_state(username);
  if (state.closed) state = LoginState{state.episode + 1, 0, false, 0, 0};
  if (state.failures == 0) state.hint_started_at = now;
  store_.transaction([&] {
    store_.save_session({session, profile.worker_id, username});
    store_.set_login_state(username, state);
  });
  return {session_id, flow::public_view(session)};
}

void Service::submit_questionnaire(const std::string& username, const records::Questionnaire& q) {
  auto lock = user_locks_.lock(username);
  if (!store_.find_account(username)) throw Error(ErrorCode::NotFound, "unknown username");
  if (q.sus.size() != 10 ||
      std::any_of(q.sus.begin(), q.sus.end(), [](int v) { return v < 1 || v > 5; })) {
    throw Error(ErrorCode::InvalidArgument, "sus needs 10 answers between 1 and 5");
  }
  if (q.satisfaction < 1 || q.satisfaction > 5) {
    throw Error(ErrorCode::InvalidArgument, "satisfaction must be between 1 and 5");
  }
  if (std::find(records::kLikertAnswers.begin(), records::kLikertAnswers.end(), q.attention) ==
      records::kLikertAnswers.end()) {
    throw Error(ErrorCode::InvalidArgument, "attention answer '" + q.attention + "' is not a Likert option");
  }
  auto stored = q;
  stored.submitted_at = clock_();
  store_.save_questionnaire(username, stored);
}

std::vector<records::ParticipantExport> Service::export_records() {
  if (!config_.research_export) {
    throw Error(ErrorCode::Forbidden, "study export needs research mode");
  }
  std::vector<records::ParticipantExport> out;
  store_.transaction([&] {
    for (const auto& account : store_.accounts()) {
      auto record = records::participant_from_json(account.profile);
      record.password_plain = vault_->get(account.username);
      record.questionnaire = store_.questionnaire(account.username);
      record.login_attempts = store_.login_attempts(account.username);
      record.hint_recalls = store_.hint_recalls(account.username);
      out.push_back(std::move(record));
    }
  });
  return out;
}

std::string Service::export_jsonl() {
  std::ostringstream out;
  records::write_jsonl(out, export_records());
  return out.str();
}

std::size_t Service::import_records(const std::vector<records::ParticipantExport>& records) {
  if (!config_.research_export) {
    throw Error(ErrorCode::Forbidden, "study import needs research mode");
  }
  store_.transaction([&] {
    for (const auto& r : records) {
      // Without the plaintext the account keeps its data but cannot log in.
      const auto digest = r.password_plain ? hasher_.hash(*r.password_plain) : std::string();
      store_.insert_account({r.username, r.condition, digest, r.created_at, profile_of(r)});
      if (r.password_plain) vault_->put(r.username, *r.password_plain);
      if (r.questionnaire) store_.save_questionnaire(r.username, *r.questionnaire);
      LoginState state;
      for (const auto& a : r.login_attempts) {
        store_.add_login_attempt(r.username, a);
        state.episode = a.episode;
        state.failures = a.success ? 0 : a.attempt_index;
        state.closed = a.success;
        state.closed_at = a.success ? a.at : 0;
      }
      if (!r.login_attempts.empty()) store_.set_login_state(r.username, state);
      for (const auto& h : r.hint_recalls) store_.add_hint_recall(r.username, h);
    }
  });
  return records.size();
}

}  // namespace pixi::auth
