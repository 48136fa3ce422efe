#include "doctest.h"

#include <algorithm>
#include <set>

#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"
#include "pixi/flow/machine.hpp"
#include "pixi/flow/serialize.hpp"
#include "test_helpers.hpp"

using namespace pixi;
using namespace pixi::flow;
using content::Catalog;
using content::ContentItem;
using pixi::testing::make_item;
using pixi::testing::numbered_words;

namespace {

// 20 books, 20 movies, 20 images. book_00 has 1000 words with a few planted
// words; the others have 60 numbered words.
Catalog test_catalog() {
  std::vector<ContentItem> items;
  for (auto category : content::kAllCategories) {
    for (int i = 0; i < 20; ++i) {
      const auto id = std::string(content::to_string(category)) + "_" + (i < 10 ? "0" : "") +
                      std::to_string(i);
      std::string text = numbered_words(60, id + "w");
      if (i == 0 && category == Category::Books) {
        auto words = content::tokenize(numbered_words(1000));
        words[10] = "had";
        words[300] = "Hermione,";
        words[700] = "had";
        words[705] = "apologize.";
        words[40] = "cat";
        words[900] = "Cat!";
        text.clear();
        for (const auto& w : words) text += w + " ";
      }
      items.push_back(make_item(id, category, "Title " + id, text));
    }
  }
  return Catalog::from_items(std::move(items));
}

const FlowConfig kConfig{};

std::string first_suggested(const FlowSession& s, const Catalog& catalog) {
  return suggested_items(s, catalog, kConfig).front()->item_id;
}

// Walks a PiXi session to KeywordSelect(1) on the given book.
FlowSession at_keywords(const Catalog& catalog, const std::string& item_id,
                        Condition condition = Condition::PiXi) {
  auto s = start_session("s1", "user-1", condition, 42, 1000);
  advance_intro(s, 1001);
  select_category(s, Category::Books, 1002);
  select_item(s, catalog, kConfig, item_id, true, 1003);
  return s;
}

std::size_t first_word_position(const content::Excerpt& e) {
  for (std::size_t i = 0; i < e.words.size(); ++i) {
    if (!content::normalize_word(e.words[i]).empty()) return i;
  }
  return 0;
}

void pick_three(FlowSession& s, const Catalog& catalog) {
  for (int k = 0; k < 3; ++k) {
    const auto pos = first_word_position(*s.current_excerpt);
    select_keyword(s, catalog, s.current_excerpt->words[pos], pos, 2000 + k);
  }
}

}  // namespace

TEST_CASE("start_session: control bypasses the wizard") {
  const auto s = start_session("s", "u", Condition::Control, 1, 5);
  CHECK(s.state.kind == StateKind::Register);
  CHECK(s.keywords.empty());
  CHECK(s.started_at == 5);
}

TEST_CASE("start_session: PiXi starts at intro with a category permutation") {
  const auto s = start_session("s", "u", Condition::PiXi, 1, 0);
  CHECK(s.state.kind == StateKind::Intro);
  std::set<Category> seen(s.category_order.begin(), s.category_order.end());
  CHECK(seen.size() == 3);
  CHECK(s.centered_category == s.category_order[kCenterPosition]);

  const auto again = start_session("s", "u", Condition::PiXi, 1, 0);
  CHECK(again.category_order == s.category_order);
}

TEST_CASE("category order is uniform over the six permutations") {
  std::map<std::array<Category, 3>, int> counts;
  for (std::uint64_t seed = 0; seed < 6000; ++seed) {
    ++counts[start_session("s", "u", Condition::PiXi, seed, 0).category_order];
  }
  CHECK(counts.size() == 6);
  for (const auto& [order, n] : counts) CHECK(n == doctest::Approx(1000).epsilon(0.12));
}

TEST_CASE("advance_intro") {
  auto s = start_session("s", "u", Condition::PiXi, 1, 0);
  advance_intro(s, 1);
  CHECK(s.state.kind == StateKind::CategorySelect);
  CHECK_THROWS_AS(advance_intro(s, 2), pixi::Error);

  const auto catalog = test_catalog();
  auto k = at_keywords(catalog, "books_00");
  try {
    advance_intro(k, 3);
    FAIL("expected wrong-state");
  } catch (const pixi::Error& e) {
    CHECK(e.code() == ErrorCode::WrongState);
  }
}

TEST_CASE("select_category records positioning acceptance") {
  std::uint64_t seed = 0;
  while (start_session("s", "u", Condition::PiXi, seed, 0).centered_category != Category::Movies) ++seed;

  auto accept = start_session("s", "u", Condition::PiXi, seed, 0);
  advance_intro(accept, 1);
  select_category(accept, Category::Movies, 2);
  REQUIRE(accept.events.size() == 1);
  CHECK(accept.events[0].kind == EventKind::CategoryPositioning);
  CHECK(accept.events[0].accepted);
  CHECK(accept.events[0].detail.at("centered") == "movies");
  CHECK(accept.state.kind == StateKind::ItemSelect);

  auto reject = start_session("s", "u", Condition::PiXi, seed, 0);
  advance_intro(reject, 1);
  select_category(reject, Category::Books, 2, true);
  CHECK_FALSE(reject.events[0].accepted);
  CHECK(reject.events[0].detail.at("scrolled") == "true");
}

TEST_CASE("select_item acceptance and validation") {
  const auto catalog = test_catalog();
  auto s = start_session("s", "u", Condition::PiXi, 3, 0);
  advance_intro(s, 1);
  select_category(s, Category::Images, 2);

  SUBCASE("suggested item is accepted") {
    select_item(s, catalog, kConfig, first_suggested(s, catalog), false, 3);
    CHECK(s.events.back().kind == EventKind::ItemSuggested);
    CHECK(s.events.back().accepted);
    CHECK(s.events.back().detail.at("via_search") == "false");
    CHECK(s.state == FlowState{StateKind::KeywordSelect, 1});
    REQUIRE(s.current_excerpt.has_value());
    CHECK_FALSE(s.current_excerpt->required_keyword_position.has_value());
  }
  SUBCASE("searched item is not accepted") {
    select_item(s, catalog, kConfig, "images_05", true, 3);
    CHECK_FALSE(s.events.back().accepted);
  }
  SUBCASE("wrong category") {
    CHECK_THROWS_AS(select_item(s, catalog, kConfig, "books_01", true, 3), pixi::Error);
    CHECK(s.state.kind == StateKind::ItemSelect);
  }
  SUBCASE("unknown item") {
    CHECK_THROWS_AS(select_item(s, catalog, kConfig, "nope", true, 3), pixi::Error);
  }
}

TEST_CASE("select_item rejects a non-page item claimed as suggested") {
  std::vector<ContentItem> items;
  for (auto category : content::kAllCategories) {
    for (int i = 0; i < 25; ++i) {
      items.push_back(make_item(std::string(content::to_string(category)) + std::to_string(i),
                                category, "T", numbered_words(60)));
    }
  }
  const auto catalog = Catalog::from_items(std::move(items));
  auto s = start_session("s", "u", Condition::PiXi, 3, 0);
  advance_intro(s, 1);
  select_category(s, Category::Books, 2);
  const auto page = suggested_items(s, catalog, kConfig);
  std::string outside;
  for (const auto* item : catalog.items(Category::Books)) {
    if (std::find(page.begin(), page.end(), item) == page.end()) outside = item->item_id;
  }
  REQUIRE(!outside.empty());
  try {
    select_item(s, catalog, kConfig, outside, false, 3);
    FAIL("expected mismatch");
  } catch (const pixi::Error& e) {
    CHECK(e.code() == ErrorCode::Mismatch);
  }
  select_item(s, catalog, kConfig, outside, true, 3);
  CHECK(s.state.kind == StateKind::KeywordSelect);
}

TEST_CASE("shuffle_excerpt") {
  const auto catalog = test_catalog();

  SUBCASE("first keyword: excerpts vary") {
    auto s = at_keywords(catalog, "books_00");
    std::set<std::size_t> starts;
    for (int i = 0; i < 100; ++i) {
      const int before = s.shuffle_count;
      shuffle_excerpt(s, catalog, 10 + i);
      CHECK(s.shuffle_count == before + 1);
      starts.insert(s.current_excerpt->start_index);
    }
    CHECK(starts.size() >= 2);
    CHECK(s.events.back().kind == EventKind::ExcerptShuffled);
  }
  SUBCASE("later keywords: shuffled excerpts contain the previous keyword") {
    auto s = at_keywords(catalog, "books_00");
    while (s.current_excerpt->start_index > 40 || s.current_excerpt->start_index + 50 <= 40) {
      shuffle_excerpt(s, catalog, 10);
    }
    const auto pos = 40 - s.current_excerpt->start_index;
    select_keyword(s, catalog, "cat", pos, 20);
    CHECK(s.state == FlowState{StateKind::KeywordSelect, 2});
    for (int i = 0; i < 200; ++i) {
      shuffle_excerpt(s, catalog, 30);
      const auto& e = *s.current_excerpt;
      REQUIRE(e.required_keyword_position.has_value());
      CHECK(content::normalize_word(e.words[*e.required_keyword_position]) == "cat");
    }
  }
  SUBCASE("wrong state") {
    auto s = start_session("s", "u", Condition::PiXi, 1, 0);
    CHECK_THROWS_AS(shuffle_excerpt(s, catalog, 1), pixi::Error);
  }
}

TEST_CASE("select_keyword transitions and the 'had' scenario") {
  const auto catalog = test_catalog();
  auto s = at_keywords(catalog, "books_00");
  while (s.current_excerpt->start_index > 10) shuffle_excerpt(s, catalog, 5);
  const auto had_pos = 10 - s.current_excerpt->start_index;

  SUBCASE("mismatched position") {
    CHECK_THROWS_AS(select_keyword(s, catalog, "had", had_pos + 1, 6), pixi::Error);
    CHECK_THROWS_AS(select_keyword(s, catalog, "had", 999, 6), pixi::Error);
    CHECK(s.keywords.empty());
  }
  SUBCASE("empty normalized word") {
    CHECK_THROWS_AS(select_keyword(s, catalog, "!!", had_pos, 6), pixi::Error);
  }
  SUBCASE("next excerpt contains the selected keyword") {
    select_keyword(s, catalog, "had", had_pos, 6);
    CHECK(s.keywords == std::vector<std::string>{"had"});
    const auto& e = *s.current_excerpt;
    REQUIRE(e.required_keyword_position.has_value());
    CHECK(content::normalize_word(e.words[*e.required_keyword_position]) == "had");
  }
  SUBCASE("display form strips punctuation and keeps case") {
    while (s.current_excerpt->start_index > 300 || s.current_excerpt->start_index + 50 <= 300) {
      shuffle_excerpt(s, catalog, 5);
    }
    select_keyword(s, catalog, "hermione", 300 - s.current_excerpt->start_index, 6);
    CHECK(s.keywords == std::vector<std::string>{"Hermione"});
  }
  SUBCASE("third keyword leads to splash") {
    pick_three(s, catalog);
    CHECK(s.state.kind == StateKind::Splash);
    CHECK(s.keywords.size() == 3);
    CHECK_FALSE(s.current_excerpt.has_value());
    CHECK(s.events.back().kind == EventKind::SplashShown);
  }
}

TEST_CASE("splash payload and dismissal") {
  const auto catalog = test_catalog();
  auto s = at_keywords(catalog, "books_01");
  pick_three(s, catalog);

  const auto payload = splash_payload(s, kConfig);
  CHECK(payload.keywords == s.keywords);
  CHECK(payload.duration_ms == 3000);
  CHECK(payload.background == "black");

  FlowConfig zero = kConfig;
  zero.splash_duration_ms = 0;
  CHECK(splash_payload(s, zero).duration_ms == 1000);

  SUBCASE("early dismissal is recorded") {
    dismiss_splash(s, true, 4000);
    CHECK(s.state.kind == StateKind::Register);
    CHECK(s.events.back().kind == EventKind::SplashDismissedEarly);
  }
  SUBCASE("timed dismissal records no early event") {
    const auto before = s.events.size();
    dismiss_splash(s, false, 6000);
    CHECK(s.state.kind == StateKind::Register);
    CHECK(s.events.size() == before);
  }

  const auto control = start_session("c", "u", Condition::Control, 1, 0);
  CHECK_THROWS_AS(splash_payload(control, kConfig), pixi::Error);
}

TEST_CASE("registration context") {
  const auto catalog = test_catalog();
  auto s = at_keywords(catalog, "books_02");
  pick_three(s, catalog);
  const auto payload = splash_payload(s, kConfig);
  CHECK_THROWS_AS(registration_context(s, catalog), pixi::Error);
  dismiss_splash(s, false, 9000);
  const auto ctx = registration_context(s, catalog);
  REQUIRE(ctx.has_value());
  CHECK(ctx->keywords == payload.keywords);
  CHECK(ctx->title == "Title books_02");
  CHECK(ctx->cover_ref == "covers/books_02.jpg");

  const auto control = start_session("c", "u", Condition::Control, 1, 0);
  CHECK_FALSE(registration_context(control, catalog).has_value());

  complete(s, 9500);
  CHECK(s.state.kind == StateKind::Done);
  CHECK_THROWS_AS(complete(s, 9600), pixi::Error);
}

TEST_CASE("hint login sessions") {
  const auto catalog = test_catalog();
  auto s = at_keywords(catalog, "books_03", Condition::PiXiHints);
  pick_three(s, catalog);
  dismiss_splash(s, false, 5000);
  const auto snap = snapshot(s, catalog);
  CHECK(snap.keywords == s.keywords);
  CHECK(snap.item_id == "books_03");

  auto hint = begin_hint_login("h1", "user-1", snap, 77, 10000);
  CHECK(hint.state.kind == StateKind::CategorySelect);
  CHECK(hint.keywords.empty());
  CHECK(hint.purpose == Purpose::HintLogin);
  CHECK(hint.original_keywords == snap.keywords);

  auto pixi_snap = snap;
  pixi_snap.condition = Condition::PiXi;
  CHECK_THROWS_AS(begin_hint_login("h2", "u", pixi_snap, 1, 0), pixi::Error);

  CHECK_THROWS_AS(record_recall(hint, snap.keywords), pixi::Error);
  select_category(hint, Category::Books, 10001);
  select_item(hint, catalog, kConfig, "books_03", true, 10002);
  pick_three(hint, catalog);
  CHECK(record_recall(hint, snap.keywords) >= 0);
}

TEST_CASE("record_recall uses multiset matching") {
  FlowSession hint;
  hint.keywords = {"cat", "dog", "bird"};
  const std::vector<std::string> same{"cat", "dog", "bird"};
  CHECK(record_recall(hint, same) == 3);
  const std::vector<std::string> none{"sun", "moon", "star"};
  CHECK(record_recall(hint, none) == 0);

  hint.keywords = {"CAT", "dog", "bird"};
  const std::vector<std::string> originals{"cat", "cat", "dog"};
  CHECK(record_recall(hint, originals) == 2);

  hint.keywords = {"cat", "cat", "cat"};
  CHECK(record_recall(hint, originals) == 2);
}

TEST_CASE("acceptance counts events exactly") {
  std::vector<NudgeEvent> events{
      {EventKind::CategoryPositioning, true, {}, 0},
      {EventKind::CategoryPositioning, false, {}, 0},
      {EventKind::CategoryPositioning, true, {}, 0},
      {EventKind::ItemSuggested, true, {}, 0},
  };
  const auto c = acceptance(events, EventKind::CategoryPositioning);
  CHECK(c.accepted == 2);
  CHECK(c.total == 3);
  CHECK(c.rate() == doctest::Approx(2.0 / 3));
  CHECK(acceptance(events, EventKind::SplashShown).total == 0);
}

TEST_CASE("session JSON round trip and replay") {
  const auto catalog = test_catalog();
  auto s = at_keywords(catalog, "books_00");
  shuffle_excerpt(s, catalog, 1500);
  pick_three(s, catalog);
  dismiss_splash(s, true, 2500);

  const auto restored = session_from_json(to_json(s));
  CHECK(restored == s);
  CHECK(to_json(restored).dump() == to_json(s).dump());

  const auto rebuilt = replay(s.session_id, s.user_id, s.condition, s.purpose, s.seed,
                              s.started_at, s.actions, catalog, kConfig);
  CHECK(rebuilt == s);
}
