#include "doctest.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "auth_helpers.hpp"
#include "pixi/auth/credentials.hpp"
#include "pixi/auth/service.hpp"
#include "pixi/auth/store.hpp"
#include "pixi/common/error.hpp"
#include "study_fixture.hpp"
#include "test_helpers.hpp"

using namespace pixi;
using namespace pixi::auth;
using flow::Condition;
using testing::FakeClock;
using testing::TempDir;

namespace {

const content::Catalog& catalog() {
  static const auto c = content::load_catalog(testing::bundled_catalog_dir());
  return c;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

// A store, vault and service in a temp directory.
struct Harness {
  TempDir dir;
  FakeClock clock;
  Store store{dir.file("pixi.db")};
  ResearchVault vault{dir.file("research.db"), ResearchVault::generate_key()};
  Service service;

  explicit Harness(bool research = true)
      : service(testing::cheap_config(research), catalog(), store, research ? &vault : nullptr, clock.fn()) {}

  std::string register_user(Condition condition, const std::string& username, const std::string& password) {
    const auto e = testing::enroll_as(service, condition);
    if (condition != Condition::Control) testing::drive_to_register(service, e.session_id);
    clock.advance(30'000);
    service.register_account(e.session_id, username, password);
    return e.session_id;
  }
};

std::string random_password(RandomStream& rng) {
  static constexpr char kChars[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789!@#$%^&*() ";
  std::string p;
  const auto n = 8 + rng.uniform_index(16);
  for (std::size_t i = 0; i < n; ++i) p.push_back(kChars[rng.uniform_index(sizeof kChars - 1)]);
  return p;
}

}  // namespace

TEST_CASE("password policy boundary") {
  PasswordPolicy policy;
  CHECK_FALSE(policy.accepts("abcdefg"));
  CHECK(policy.accepts("abcdefgh"));
  CHECK(code_of([&] { policy.check("abcdefg"); }) == ErrorCode::PolicyViolation);
  // length counts code points, not bytes
  CHECK_FALSE(policy.accepts("ééééééé"));
  CHECK(policy.accepts("éééééééé"));
}

TEST_CASE("property: policy is monotone in the minimum length") {
  RandomStream rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto pw = random_password(rng).substr(0, rng.uniform_index(24));
    for (std::size_t m = 8; m <= 20; ++m) {
      if (PasswordPolicy{m}.accepts(pw)) {
        for (std::size_t lower = 1; lower <= m; ++lower) REQUIRE(PasswordPolicy{lower}.accepts(pw));
      }
    }
  }
}

TEST_CASE("hasher round trip") {
  PasswordHasher hasher(HashCost::minimum());
  RandomStream rng(11);
  for (int i = 0; i < 30; ++i) {
    const auto pw = random_password(rng);
    const auto digest = hasher.hash(pw);
    CHECK(digest.rfind("$argon2id$", 0) == 0);
    CHECK(digest.find(pw) == std::string::npos);
    CHECK(hasher.verify(digest, pw));
    CHECK_FALSE(hasher.verify(digest, pw + "x"));
  }
  // fresh salt per hash
  CHECK(hasher.hash("samepassword") != hasher.hash("samepassword"));
  CHECK_FALSE(hasher.verify("", "anything"));
  CHECK_FALSE(hasher.verify("not-a-digest", "anything"));
}

TEST_CASE("condition assignment is uniform and reproducible") {
  RandomStream rng(2024);
  std::array<int, 3> counts{};
  constexpr int kDraws = 30000;
  for (int i = 0; i < kDraws; ++i) ++counts[static_cast<std::size_t>(assign_condition(rng))];
  for (int c : counts) CHECK(std::abs(static_cast<double>(c) / kDraws - 1.0 / 3) <= 0.015);

  RandomStream a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(assign_condition(a) == assign_condition(b));
}

TEST_CASE("control registration") {
  Harness h;
  const auto e = testing::enroll_as(h.service, Condition::Control);
  CHECK(e.session["state"]["kind"] == "register");
  CHECK(h.service.register_context(e.session_id)["context"].is_null());
  CHECK(code_of([&] { h.service.register_account(e.session_id, "carol", "abcdefg"); }) ==
        ErrorCode::PolicyViolation);
  const auto r = h.service.register_account(e.session_id, "carol", "abcdefgh");
  CHECK(r.condition == Condition::Control);
  // the session is finished
  CHECK(code_of([&] { h.service.register_account(e.session_id, "carol2", "abcdefgh"); }) ==
        ErrorCode::WrongState);

  const auto e2 = testing::enroll_as(h.service, Condition::Control);
  CHECK(code_of([&] { h.service.register_account(e2.session_id, "carol", "abcdefgh"); }) ==
        ErrorCode::Conflict);
}

TEST_CASE("pixi registration captures the snapshot") {
  Harness h;
  const auto e = testing::enroll_as(h.service, Condition::PiXi);
  CHECK(code_of([&] { h.service.register_account(e.session_id, "pat", "longenough"); }) ==
        ErrorCode::WrongState);
  testing::drive_to_register(h.service, e.session_id);
  const auto ctx = h.service.register_context(e.session_id)["context"];
  REQUIRE(ctx.is_object());
  CHECK(ctx["keywords"].size() == 3);
  h.clock.advance(12'500);
  const auto r = h.service.register_account(e.session_id, "pat", "longenough");
  CHECK(r.registration_duration_s == doctest::Approx(12.5));

  const auto records = h.service.export_records();
  REQUIRE(records.size() == 1);
  const auto& rec = records[0];
  CHECK(rec.username == "pat");
  CHECK(rec.worker_id == "A3KX9Q2ZP7W1M");
  CHECK(rec.digest_algorithm == "argon2id");
  CHECK(rec.password_plain == std::optional<std::string>("longenough"));
  CHECK(rec.category.has_value());
  CHECK(rec.keywords == ctx["keywords"].get<std::vector<std::string>>());
  CHECK(flow::acceptance(rec.nudge_events, flow::EventKind::CategoryPositioning).accepted == 1);
  REQUIRE(rec.registration.has_value());

  // the recorded actions rebuild the same session
  const auto& reg = *rec.registration;
  flow::FlowConfig fc;
  fc.server_seed = h.service.config().flow.server_seed;
  const auto replayed = flow::replay(reg.session_id, rec.worker_id, rec.condition, flow::Purpose::Registration,
                                     reg.seed, reg.started_at, reg.actions, catalog(), fc);
  CHECK(replayed.events == rec.nudge_events);
  CHECK(replayed.keywords == rec.keywords);
}

TEST_CASE("login attempts and episodes") {
  Harness h;
  h.register_user(Condition::Control, "lee", "correct-horse");

  h.clock.advance(1000);
  const Millis loaded = *h.clock.now;
  h.clock.advance(4200);
  auto ok = h.service.login("lee", "correct-horse", loaded);
  CHECK(ok.success);
  CHECK(ok.attempt_index == 1);
  CHECK(ok.episode == 1);
  CHECK(ok.duration_s == doctest::Approx(4.2));

  // a success closes the episode; the next login starts a new one
  for (int i = 1; i <= 3; ++i) {
    const auto bad = h.service.login("lee", "wrong-password", *h.clock.now);
    CHECK_FALSE(bad.success);
    CHECK(bad.episode == 2);
    CHECK(bad.attempt_index == i);
    CHECK(bad.attempts_remaining == 3 - i);
  }
  CHECK(code_of([&] { h.service.login("lee", "correct-horse", *h.clock.now); }) ==
        ErrorCode::EpisodeExhausted);
  CHECK(code_of([&] { h.service.login("nobody", "whatever1", *h.clock.now); }) == ErrorCode::NotFound);

  h.service.reset_login_episode("lee");
  const auto again = h.service.login("lee", "correct-horse", *h.clock.now);
  CHECK(again.success);
  CHECK(again.episode == 3);

  const auto attempts = h.service.export_records()[0].login_attempts;
  CHECK(attempts.size() == 5);
  int failures_in_episode_2 = 0;
  for (const auto& a : attempts) failures_in_episode_2 += a.episode == 2 && !a.success;
  CHECK(failures_in_episode_2 == 3);
}

TEST_CASE("login rejects stale page-load times and tolerates clock skew") {
  Harness h;
  h.register_user(Condition::Control, "sam", "abcdefgh");
  CHECK(code_of([&] { h.service.login("sam", "abcdefgh", *h.clock.now - 3 * 3600 * 1000); }) ==
        ErrorCode::InvalidArgument);
  const auto ahead = h.service.login("sam", "abcdefgh", *h.clock.now + 5000);
  CHECK(ahead.success);
  CHECK(ahead.duration_s == 0.0);
}

TEST_CASE("property: login round trip for random passwords") {
  Harness h;
  RandomStream rng(42);
  for (int i = 0; i < 25; ++i) {
    const auto user = "user" + std::to_string(i);
    const auto pw = random_password(rng);
    h.register_user(Condition::Control, user, pw);
    CHECK_FALSE(h.service.login(user, pw + "!", *h.clock.now).success);
    CHECK(h.service.login(user, pw, *h.clock.now).success);
  }
}

TEST_CASE("pixi-hints re-selection is timed and recorded") {
  Harness h;
  h.register_user(Condition::PiXi, "plain", "abcdefgh");
  CHECK(code_of([&] { h.service.start_hint_login("plain"); }) == ErrorCode::Forbidden);

  h.register_user(Condition::PiXiHints, "hinted", "abcdefgh");
  const auto start = h.service.start_hint_login("hinted");
  CHECK(start.session["state"]["kind"] == "category_select");
  CHECK(start.session["purpose"] == "hint_login");
  CHECK(start.session["keywords"].empty());

  h.clock.advance(60'000);
  testing::drive_to_register(h.service, start.session_id);
  // hint sessions never create accounts
  CHECK(code_of([&] { h.service.register_account(start.session_id, "x", "abcdefgh"); }) ==
        ErrorCode::WrongState);

  h.clock.advance(10'000);
  const Millis loaded = *h.clock.now;
  h.clock.advance(5'000);
  const auto out = h.service.login("hinted", "abcdefgh", loaded);
  CHECK(out.success);
  CHECK(out.duration_s == doctest::Approx(75.0));  // includes the re-selection

  const auto records = h.service.export_records();
  const auto& rec = records[1].username == "hinted" ? records[1] : records[0];
  REQUIRE(rec.hint_recalls.size() == 1);
  CHECK(rec.hint_recalls[0].keywords.size() == 3);
  CHECK(rec.hint_recalls[0].recall_count >= 0);
  CHECK(rec.hint_recalls[0].recall_count <= 3);

  // the next episode is timed from its own page load
  const auto later = h.service.login("hinted", "abcdefgh", *h.clock.now);
  CHECK(later.episode == 2);
  CHECK(later.duration_s == 0.0);
}

TEST_CASE("questionnaire validation") {
  Harness h;
  h.register_user(Condition::Control, "quinn", "abcdefgh");
  records::Questionnaire q{{3, 2, 4, 1, 5, 2, 4, 2, 4, 1}, 4, "disagree", 0};
  h.service.submit_questionnaire("quinn", q);
  auto bad = q;
  bad.sus.pop_back();
  CHECK(code_of([&] { h.service.submit_questionnaire("quinn", bad); }) == ErrorCode::InvalidArgument);
  bad = q;
  bad.satisfaction = 6;
  CHECK(code_of([&] { h.service.submit_questionnaire("quinn", bad); }) == ErrorCode::InvalidArgument);
  bad = q;
  bad.attention = "maybe";
  CHECK(code_of([&] { h.service.submit_questionnaire("quinn", bad); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { h.service.submit_questionnaire("ghost", q); }) == ErrorCode::NotFound);

  const auto rec = h.service.export_records()[0];
  REQUIRE(rec.questionnaire.has_value());
  CHECK(rec.questionnaire->sus == q.sus);
  CHECK(rec.questionnaire->attention == "disagree");
  CHECK(rec.questionnaire->submitted_at == *h.clock.now);
}

TEST_CASE("export needs research mode") {
  Harness h(false);
  h.register_user(Condition::Control, "nora", "abcdefgh");
  CHECK(code_of([&] { h.service.export_jsonl(); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { h.service.import_records({}); }) == ErrorCode::Forbidden);
}

TEST_CASE("export: empty store, line counts and byte-stable round trip") {
  Harness h;
  CHECK(h.service.export_jsonl().empty());

  h.register_user(Condition::Control, "a-user", "abcdefgh");
  h.register_user(Condition::PiXi, "b-user", "ijklmnop");
  h.register_user(Condition::PiXiHints, "c-user", "qrstuvwx");
  h.service.login("a-user", "nope-nope", *h.clock.now);
  h.service.login("a-user", "abcdefgh", *h.clock.now);
  h.service.submit_questionnaire("b-user", {{3, 3, 3, 3, 3, 3, 3, 3, 3, 4}, 3, "strongly disagree", 0});

  const auto first = h.service.export_jsonl();
  CHECK(std::count(first.begin(), first.end(), '\n') == 3);
  CHECK(h.service.export_jsonl() == first);

  Harness other;
  std::istringstream in(first);
  const auto parsed = records::read_jsonl(in);
  REQUIRE(parsed.issues.empty());
  CHECK(other.service.import_records(parsed.records) == 3);
  CHECK(other.service.export_jsonl() == first);
  // imported accounts keep working
  CHECK(other.service.login("b-user", "ijklmnop", *other.clock.now).success);
}

TEST_CASE("export: the study fixture survives import and export unchanged") {
  Harness h;
  std::ifstream in(testing::study_fixture_path(), std::ios::binary);
  const std::string original((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream lines(original);
  const auto parsed = records::read_jsonl(lines);
  REQUIRE(parsed.records.size() == 238);
  h.service.import_records(parsed.records);
  CHECK(h.service.export_jsonl() == original);
}

TEST_CASE("condition counts in the export equal assignments") {
  Harness h;
  std::array<int, 3> assigned{};
  for (int i = 0; i < 30; ++i) {
    const auto e = h.service.enroll("W" + std::to_string(i));
    ++assigned[static_cast<std::size_t>(e.condition)];
    if (e.condition != Condition::Control) testing::drive_to_register(h.service, e.session_id);
    h.service.register_account(e.session_id, "u" + std::to_string(i), "abcdefgh");
  }
  std::array<int, 3> exported{};
  for (const auto& r : h.service.export_records()) ++exported[static_cast<std::size_t>(r.condition)];
  CHECK(exported == assigned);
}

TEST_CASE("store persists sessions, accounts and the assignment stream") {
  TempDir dir;
  FakeClock clock;
  const auto key = ResearchVault::generate_key();
  std::string session_id;
  std::vector<Condition> assigned;
  {
    Store store(dir.file("p.db"));
    ResearchVault vault(dir.file("r.db"), key);
    Service service(testing::cheap_config(), catalog(), store, &vault, clock.fn());
    for (;;) {
      const auto e = service.enroll("w");
      assigned.push_back(e.condition);
      if (e.condition == Condition::PiXi) {
        session_id = e.session_id;
        break;
      }
    }
    service.intro_next(session_id);
  }
  {
    Store store(dir.file("p.db"));
    ResearchVault vault(dir.file("r.db"), key);
    Service service(testing::cheap_config(), catalog(), store, &vault, clock.fn());
    CHECK(service.session_view(session_id)["session"]["state"]["kind"] == "category_select");
    testing::drive_to_register(service, session_id);
    service.register_account(session_id, "persisted", "abcdefgh");
    for (int i = 0; i < 5; ++i) assigned.push_back(service.enroll("w").condition);
  }
  // the assignment stream continues across restarts
  RandomStream fresh(keyed_hash(7, "condition-assignment"));
  for (auto c : assigned) CHECK(assign_condition(fresh) == c);
  {
    Store store(dir.file("p.db"));
    ResearchVault vault(dir.file("r.db"), key);
    Service service(testing::cheap_config(), catalog(), store, &vault, clock.fn());
    CHECK(service.login("persisted", "abcdefgh", *clock.now).success);
    CHECK(service.export_records()[0].password_plain == std::optional<std::string>("abcdefgh"));
  }
  {
    // a wrong research key cannot read the plaintext
    Store store(dir.file("p.db"));
    ResearchVault vault(dir.file("r.db"), ResearchVault::generate_key());
    Service service(testing::cheap_config(), catalog(), store, &vault, clock.fn());
    CHECK(code_of([&] { service.export_records(); }) == ErrorCode::Forbidden);
  }
}

TEST_CASE("research key hex round trip") {
  const auto key = ResearchVault::generate_key();
  CHECK(ResearchVault::key_from_hex(ResearchVault::key_to_hex(key)) == key);
  CHECK(code_of([] { ResearchVault::key_from_hex("abc"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("concurrent logins never exceed three failures per episode") {
  Harness h;
  h.register_user(Condition::Control, "busy", "abcdefgh");
  std::vector<std::thread> threads;
  std::atomic<int> exhausted{0}, recorded{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 3; ++i) {
        try {
          h.service.login("busy", "bad-password", *h.clock.now);
          ++recorded;
        } catch (const Error& e) {
          if (e.code() == ErrorCode::EpisodeExhausted) ++exhausted;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(recorded == 3);
  CHECK(exhausted == 21);
  CHECK(h.service.export_records()[0].login_attempts.size() == 3);
}

TEST_CASE("concurrent registrations of one username: exactly one wins") {
  Harness h;
  std::vector<std::string> sessions;
  for (int i = 0; i < 6; ++i) sessions.push_back(testing::enroll_as(h.service, Condition::Control).session_id);
  std::atomic<int> wins{0}, conflicts{0};
  std::vector<std::thread> threads;
  for (const auto& s : sessions) {
    threads.emplace_back([&, s] {
      try {
        h.service.register_account(s, "same-name", "abcdefgh");
        ++wins;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Conflict) ++conflicts;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(wins == 1);
  CHECK(conflicts == 5);
}
