#include "doctest.h"

#include <sstream>

#include "pixi/common/error.hpp"
#include "pixi/records/participant.hpp"

using namespace pixi;
using namespace pixi::records;

namespace {

ParticipantExport sample() {
  ParticipantExport r;
  r.digest_algorithm = "argon2id13";
  r.username = "alice";
  r.worker_id = "A1B2C3";
  r.condition = flow::Condition::PiXiHints;
  r.password_plain = "Lantern!Harbour9";
  r.created_at = 1700000000000;
  r.registration_duration_s = 93.25;
  r.category = content::Category::Books;
  r.item_id = "book_03";
  r.title = "Salt and Saffron";
  r.keywords = {"lantern", "harbour", "tide"};
  r.nudge_events.push_back({flow::EventKind::CategoryPositioning, true,
                            {{"centered", "books"}, {"selected", "books"}}, 1700000001000});
  RegistrationRecord reg;
  reg.session_id = "s-1";
  reg.seed = 18446744073709551557ULL;
  reg.started_at = 1700000000000;
  reg.completed_at = 1700000093250;
  reg.actions.push_back({.kind = flow::ActionKind::IntroNext, .at = 1700000000500});
  reg.actions.push_back({.kind = flow::ActionKind::SelectKeyword, .at = 1700000002000, .word = "tide", .position = 7});
  r.registration = reg;
  r.questionnaire = Questionnaire{{4, 2, 4, 2, 5, 1, 4, 2, 4, 2}, 4, "strongly disagree", 1700000100000};
  r.login_attempts = {{1, 1, false, 12.5, 1700100000000}, {1, 2, true, 9.0, 1700100020000}};
  r.hint_recalls = {{"h-1", {"lantern", "tide", "sun"}, 2, 1700099990000}};
  return r;
}

}  // namespace

TEST_CASE("export round trip is byte identical") {
  std::vector<ParticipantExport> recs = {sample(), sample()};
  recs[1].username = "bob";
  recs[1].password_plain.reset();
  recs[1].registration.reset();
  recs[1].questionnaire.reset();
  std::ostringstream first;
  write_jsonl(first, recs);
  std::istringstream in(first.str());
  const auto parsed = read_jsonl(in);
  REQUIRE(parsed.issues.empty());
  REQUIRE(parsed.records.size() == 2);
  CHECK(parsed.records[0] == recs[0]);
  CHECK(parsed.records[1] == recs[1]);
  std::ostringstream second;
  write_jsonl(second, parsed.records);
  CHECK(first.str() == second.str());
}

TEST_CASE("malformed lines are reported, not fatal") {
  std::istringstream in(to_jsonl_line(sample()) + "\n{not json\n\n{\"schema_version\": 99}\n" +
                        to_jsonl_line(sample()) + "\n");
  const auto parsed = read_jsonl(in);
  CHECK(parsed.records.size() == 2);
  REQUIRE(parsed.issues.size() == 2);
  CHECK(parsed.issues[0].line == 2);
  CHECK(parsed.issues[1].line == 4);
}

TEST_CASE("field order is stable") {
  const auto line = to_jsonl_line(sample());
  CHECK(line.rfind("{\"schema_version\":1,\"digest_algorithm\":\"argon2id13\",\"username\"", 0) == 0);
}
