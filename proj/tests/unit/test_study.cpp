#include "doctest.h"

#include <cmath>
#include <set>

#include "pixi/common/error.hpp"
#include "pixi/common/random.hpp"
#include "pixi/study/cleaning.hpp"
#include "pixi/study/config.hpp"
#include "pixi/study/report.hpp"
#include "study_fixture.hpp"
#include "test_helpers.hpp"

using namespace pixi;
using namespace pixi::study;
using flow::Condition;
using records::ParticipantExport;
using json = nlohmann::ordered_json;

namespace {

ParticipantExport participant(std::string username, std::string password,
                              Condition condition = Condition::Control) {
  ParticipantExport r;
  r.digest_algorithm = "argon2id";
  r.username = std::move(username);
  r.worker_id = "A1B2C3D4E5F6G7";
  r.condition = condition;
  r.password_plain = std::move(password);
  records::Questionnaire q;
  q.sus = {4, 2, 4, 2, 3, 2, 4, 1, 4, 2};
  q.satisfaction = 4;
  q.attention = "strongly disagree";
  r.questionnaire = q;
  return r;
}

std::size_t partition_total(const CleaningReport& report) {
  return report.valid.size() + report.removed_count();
}

}  // namespace

TEST_CASE("simple sequences") {
  for (const char* p : {"123456789", "1111", "97531", "aaaaaaaa", "2468"}) {
    CHECK_MESSAGE(is_simple_sequence(p), p);
  }
  for (const char* p : {"1234567890", "12345679", "Tiger2024", "a", "1213"}) {
    CHECK_MESSAGE(!is_simple_sequence(p), p);
  }
}

TEST_CASE("attention answers") {
  CHECK(is_attentive_answer("disagree"));
  CHECK(is_attentive_answer("Strongly Disagree"));
  CHECK_FALSE(is_attentive_answer("agree"));
  CHECK_FALSE(is_attentive_answer("neutral"));
  CHECK_FALSE(is_attentive_answer(""));
}

TEST_CASE("weakly committed rules") {
  StudyConfig config;
  CHECK(weakly_committed(participant("u1", "123456789"), config) == "simple_sequence");
  CHECK(weakly_committed(participant("u1", "xa1b2c3d4e5f6g7!"), config) == "contains_worker_id");
  CHECK(weakly_committed(participant("bobcat", "MyBobcat99"), config) == "contains_username");
  // identity tokens shorter than the minimum are not searched for
  CHECK_FALSE(weakly_committed(participant("al", "always-alone7"), config).has_value());

  auto straight = participant("u2", "Cobalt!Meadow7");
  straight.questionnaire->sus.assign(10, 3);
  CHECK(weakly_committed(straight, config) == "sus_straight_lining");
  CHECK_FALSE(weakly_committed(participant("u3", "Cobalt!Meadow7"), config).has_value());
}

TEST_CASE("clean: spec examples") {
  StudyConfig config;
  std::vector<ParticipantExport> records;
  records.push_back(participant("seq", "123456789"));
  for (int i = 0; i < 193; ++i) {
    records.push_back(participant("bot" + std::to_string(i), "Qv7#lantern&orbit", Condition::PiXi));
  }
  auto careless = participant("careless", "Falcon!Harbor21");
  careless.questionnaire->attention = "agree";
  records.push_back(careless);
  records.push_back(participant("ok", "Velvet-Canyon-58"));

  const auto report = clean(records, config);
  REQUIRE(report.removed_for(RemovalReason::WeaklyCommitted).size() == 1);
  CHECK(report.removed_for(RemovalReason::WeaklyCommitted)[0].record.username == "seq");
  CHECK(report.removed_for(RemovalReason::MultiIdentity).size() == 193);
  REQUIRE(report.removed_for(RemovalReason::Inattentive).size() == 1);
  CHECK(report.removed_for(RemovalReason::Inattentive)[0].record.username == "careless");
  REQUIRE(report.valid.size() == 1);
  CHECK(report.valid[0].username == "ok");
  CHECK(partition_total(report) == records.size());

  const auto summary = cleaning_summary(report);
  CHECK(summary["multi_identity"]["pixi"] == 193);
  CHECK(summary["valid"]["total"] == 1);
}

TEST_CASE("clean: shared common passwords are not multi-identity") {
  std::vector<ParticipantExport> records;
  for (int i = 0; i < 5; ++i) records.push_back(participant("user" + std::to_string(i), "sunshine"));
  for (int i = 0; i < 2; ++i) records.push_back(participant("pair" + std::to_string(i), "Zq8!orbit#vane"));
  const auto report = clean(records, StudyConfig{});
  CHECK(report.removed_for(RemovalReason::MultiIdentity).empty());
  CHECK(report.valid.size() == 7);
}

TEST_CASE("clean: precedence and filter toggles") {
  auto both = participant("both", "123456789");
  both.questionnaire->attention = "agree";
  StudyConfig config;
  auto report = clean({both}, config);
  CHECK(report.removed_for(RemovalReason::WeaklyCommitted).size() == 1);
  CHECK(report.removed_for(RemovalReason::Inattentive).empty());

  config.filter_weakly_committed = false;
  report = clean({both}, config);
  CHECK(report.removed_for(RemovalReason::Inattentive).size() == 1);

  config.filter_inattentive = false;
  report = clean({both}, config);
  CHECK(report.valid.size() == 1);
}

TEST_CASE("clean: missing questionnaire counts as inattentive") {
  auto r = participant("quiet", "Walrus#Tulip40");
  r.questionnaire.reset();
  const auto report = clean({r}, StudyConfig{});
  CHECK(report.removed_for(RemovalReason::Inattentive).size() == 1);
}

TEST_CASE("property: cleaning partitions every dataset") {
  RandomStream rng(99);
  const std::vector<std::string> passwords = {"123456789", "Zq8!orbit#vane", "sunshine", "Falcon!Harbor21",
                                              "aaaaaaaa", "Velvet-Canyon-58", "A1B2C3D4E5F6G7x"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ParticipantExport> records;
    const auto n = rng.uniform_index(40);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = participant("p" + std::to_string(i), passwords[rng.uniform_index(passwords.size())],
                           flow::kAllConditions[rng.uniform_index(3)]);
      if (rng.uniform01() < 0.2) r.questionnaire->attention = "agree";
      if (rng.uniform01() < 0.1) r.questionnaire->sus.assign(10, 5);
      if (rng.uniform01() < 0.05) r.questionnaire.reset();
      records.push_back(r);
    }
    StudyConfig config;
    config.multi_k = 2 + rng.uniform_index(4);
    config.filter_multi_identity = rng.uniform01() < 0.8;
    const auto report = clean(records, config);
    REQUIRE(partition_total(report) == records.size());
    std::set<std::string> seen;
    for (const auto& r : report.valid) seen.insert(r.username);
    for (auto reason : kAllReasons) {
      for (const auto& removal : report.removed_for(reason)) seen.insert(removal.record.username);
    }
    CHECK(seen.size() == records.size());
  }
}

TEST_CASE("config parsing") {
  const auto config = config_from_json(json::parse(R"({
    "online_threshold": 1e5, "offline_threshold": 1e12, "alpha": 0.01, "multi_k": 5,
    "filters": {"inattentive": false}
  })"));
  CHECK(config.thresholds.online == doctest::Approx(1e5));
  CHECK(config.thresholds.offline == doctest::Approx(1e12));
  CHECK(config.alpha == doctest::Approx(0.01));
  CHECK(config.multi_k == 5);
  CHECK_FALSE(config.filter_inattentive);
  CHECK(config.filter_weakly_committed);

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"alpah": 0.05})")), Error);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"alpha": 1.5})")), Error);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"online_threshold": 1e15})")), Error);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"multi_k": 1})")), Error);

  const auto round = config_from_json(json::parse(to_json(config).dump()));
  CHECK(round.multi_k == config.multi_k);
  CHECK(round.filter_inattentive == config.filter_inattentive);
}

TEST_CASE("report: empty set is an error") {
  CHECK_THROWS_AS(report({}, StudyConfig{}), Error);
}

TEST_CASE("report: two-record means equal hand averages") {
  auto a = participant("a", "Velvet-Canyon-58");  // 16 characters
  auto b = participant("b", "Tulip#Raven4");      // 12 characters
  b.questionnaire->satisfaction = 2;
  const auto doc = report({a, b}, StudyConfig{});
  const auto& control = doc["security_usability"]["control"];
  CHECK(control["length"]["n"] == 2);
  CHECK(control["length"]["mean"].get<double>() == doctest::Approx(14.0));
  CHECK(doc["satisfaction"]["control"]["mean"].get<double>() == doctest::Approx(3.0));
  CHECK(doc["satisfaction"]["control"]["histogram"]["2"] == 1);
  CHECK(doc["participants"]["total"] == 2);
  // too few groups for the tests
  CHECK(doc["hypothesis_tests"]["tests"].empty());
}

TEST_CASE("report: login time sums the first episode only") {
  auto r = participant("a", "Velvet-Canyon-58");
  r.login_attempts = {{1, 1, false, 10.0, 0}, {1, 2, true, 5.5, 0}, {2, 1, true, 100.0, 0}};
  const auto derived = derive(r, StudyConfig{});
  CHECK(derived.attempted_login);
  CHECK(derived.login_success);
  CHECK(derived.login_time_s == doctest::Approx(15.5));
}

TEST_CASE("report: keyword use comes from the exported password") {
  auto r = participant("k", "lantern7Orbit!", Condition::PiXi);
  r.keywords = {"Lantern", "orbit", "meadow"};
  const auto d = derive(r, StudyConfig{});
  REQUIRE(d.keyword_usage.has_value());
  CHECK(d.keywords_used == 2);
}

namespace {

void check_ratios(const json& node) {
  if (node.is_object()) {
    if (node.contains("count") && node.contains("total") && node.contains("percent")) {
      const auto count = node["count"].get<double>();
      const auto total = node["total"].get<double>();
      if (total == 0) {
        CHECK(node["percent"].is_null());
      } else {
        CHECK(node["percent"].get<double>() == 100.0 * count / total);
      }
    }
    for (const auto& [key, value] : node.items()) check_ratios(value);
  } else if (node.is_array()) {
    for (const auto& value : node) check_ratios(value);
  }
}

}  // namespace

TEST_CASE("fixture report reproduces the acceptance and keyword tables") {
  const auto records = testing::load_study_fixture();
  REQUIRE(records.size() == 238);
  const auto cleaned = clean(records, StudyConfig{});
  CHECK(cleaned.valid.size() == 238);
  const auto doc = report(cleaned.valid, StudyConfig{});

  const auto& acc = doc["nudge_acceptance"];
  auto ratio_is = [](const json& r, int count, int total) {
    return r["count"] == count && r["total"] == total;
  };
  CHECK(ratio_is(acc["books"]["positioning"], 20, 56));
  CHECK(ratio_is(acc["movies"]["positioning"], 29, 59));
  CHECK(ratio_is(acc["images"]["positioning"], 30, 51));
  CHECK(ratio_is(acc["books"]["suggested_items"], 40, 41));
  CHECK(ratio_is(acc["movies"]["suggested_items"], 40, 55));
  CHECK(ratio_is(acc["images"]["suggested_items"], 63, 71));
  CHECK(acc["movies"]["positioning"]["percent"].get<double>() == doctest::Approx(49.15).epsilon(1e-3));

  const auto& kw = doc["keyword_usage"];
  CHECK(ratio_is(kw["pixi"]["users"], 26, 83));
  CHECK(ratio_is(kw["pixi_hints"]["users"], 39, 84));
  CHECK(kw["pixi"]["one_keyword"] == 7);
  CHECK(kw["pixi"]["two_keywords"] == 12);
  CHECK(kw["pixi"]["three_keywords"] == 7);
  CHECK(kw["pixi_hints"]["one_keyword"] == 11);
  CHECK(kw["pixi_hints"]["two_keywords"] == 14);
  CHECK(kw["pixi_hints"]["three_keywords"] == 14);
  CHECK(std::lround(kw["pixi"]["users"]["percent"].get<double>()) == 31);

  const auto& login = doc["login"];
  CHECK(ratio_is(login["control"]["success"], 7, 10));
  CHECK(ratio_is(login["pixi"]["success"], 8, 9));
  CHECK(ratio_is(login["pixi_hints"]["success"], 10, 12));
  CHECK(login["pixi_hints"]["login_time_s"]["mean"].get<double>() == doctest::Approx(139.5));

  CHECK(doc["hypothesis_tests"]["tests"].size() == 3);
  check_ratios(doc);

  const auto md = render_markdown(doc);
  CHECK(md.find("29/59 (49.15%)") != std::string::npos);
  CHECK(md.find("26/83 (31.33%)") != std::string::npos);
}

TEST_CASE("fixture registrations replay to their recorded events") {
  const auto catalog = content::load_catalog(testing::bundled_catalog_dir());
  const auto config = testing::study_fixture_config();
  std::size_t replayed = 0;
  for (const auto& rec : testing::load_study_fixture()) {
    if (!rec.registration) continue;
    const auto diff = testing::replay_difference(rec, catalog, config);
    CHECK_MESSAGE(!diff.has_value(), diff.value_or(""));
    ++replayed;
  }
  CHECK(replayed == 166);
}
