#include "pixi/flow/machine.hpp"

#include <algorithm>

#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"

namespace pixi::flow {

namespace {

std::string describe(const FlowState& state) {
  std::string s(to_string(state.kind));
  if (state.kind == StateKind::KeywordSelect) s += "(" + std::to_string(state.keyword_step) + ")";
  return s;
}

void require_state(const FlowSession& session, StateKind expected, std::string_view op) {
  if (session.state.kind != expected) {
    throw Error(ErrorCode::WrongState, std::string(op) + " not allowed in state " +
                                           describe(session.state) + " (expected " +
                                           std::string(to_string(expected)) + ")");
  }
}

const content::ContentItem& selected_item(const FlowSession& session,
                                          const content::Catalog& catalog) {
  if (!session.selected_item_id) throw Error(ErrorCode::Internal, "session has no selected item");
  return catalog.at(*session.selected_item_id);
}

content::Excerpt excerpt_for_keyword(const FlowSession& session, const content::Catalog& catalog,
                                     const std::string& keyword, RandomStream& rng) {
  const auto& item = selected_item(session, catalog);
  const auto positions = catalog.occurrences(item.item_id, content::normalize_word(keyword));
  return content::excerpt_containing(item, positions, rng);
}

void touch(FlowSession& session, Millis now) { session.updated_at = now; }

}  // namespace

std::int64_t effective_splash_duration(const FlowConfig& config) {
  return std::max(config.splash_duration_ms, kMinSplashDurationMs);
}

FlowSession start_session(std::string session_id, std::string user_id, Condition condition,
                          std::uint64_t seed, Millis now) {
  FlowSession s;
  s.session_id = std::move(session_id);
  s.user_id = std::move(user_id);
  s.condition = condition;
  s.purpose = Purpose::Registration;
  s.seed = seed;
  s.rng = RandomStream(seed);
  shuffle(s.category_order.begin(), s.category_order.end(), s.rng);
  s.centered_category = s.category_order[kCenterPosition];
  s.state = FlowState{condition == Condition::Control ? StateKind::Register : StateKind::Intro, 0};
  s.started_at = now;
  s.updated_at = now;
  return s;
}

IntroContent intro_content(const FlowSession& session, const FlowConfig& config) {
  return IntroContent{config.intro_video_url, session.condition == Condition::PiXiHints};
}

void advance_intro(FlowSession& session, Millis now) {
  require_state(session, StateKind::Intro, "advance_intro");
  session.state = FlowState{StateKind::CategorySelect, 0};
  session.actions.push_back(Action{.kind = ActionKind::IntroNext, .at = now});
  touch(session, now);
}

void select_category(FlowSession& session, Category category, Millis now,
                     std::optional<bool> scrolled) {
  require_state(session, StateKind::CategorySelect, "select_category");
  session.selected_category = category;
  session.state = FlowState{StateKind::ItemSelect, 0};

  NudgeEvent event{EventKind::CategoryPositioning, category == session.centered_category, {}, now};
  event.detail["centered"] = std::string(content::to_string(session.centered_category));
  event.detail["selected"] = std::string(content::to_string(category));
  if (scrolled) event.detail["scrolled"] = *scrolled ? "true" : "false";
  session.events.push_back(std::move(event));

  session.actions.push_back(
      Action{.kind = ActionKind::SelectCategory, .at = now, .category = category, .scrolled = scrolled});
  touch(session, now);
}

std::vector<const content::ContentItem*> suggested_items(const FlowSession& session,
                                                         const content::Catalog& catalog,
                                                         const FlowConfig& config) {
  if (!session.selected_category) {
    throw Error(ErrorCode::WrongState, "no category selected in state " + describe(session.state));
  }
  return content::items_for_user(catalog, session.user_id, *session.selected_category,
                                 config.items_per_page, config.server_seed);
}

void select_item(FlowSession& session, const content::Catalog& catalog, const FlowConfig& config,
                 std::string_view item_id, bool via_search, Millis now) {
  require_state(session, StateKind::ItemSelect, "select_item");
  const auto& item = catalog.at(item_id);
  if (item.category != *session.selected_category) {
    throw Error(ErrorCode::Mismatch, "item '" + item.item_id + "' is not in category " +
                                         std::string(content::to_string(*session.selected_category)));
  }
  if (!via_search) {
    const auto page = suggested_items(session, catalog, config);
    const bool on_page = std::any_of(page.begin(), page.end(),
                                     [&](const auto* p) { return p->item_id == item.item_id; });
    if (!on_page) {
      throw Error(ErrorCode::Mismatch,
                  "item '" + item.item_id + "' was not among the suggested items");
    }
  }

  auto excerpt = content::random_excerpt(item, session.rng);
  session.selected_item_id = item.item_id;
  session.current_excerpt = std::move(excerpt);
  session.state = FlowState{StateKind::KeywordSelect, 1};

  NudgeEvent event{EventKind::ItemSuggested, !via_search, {}, now};
  event.detail["category"] = std::string(content::to_string(item.category));
  event.detail["item_id"] = item.item_id;
  event.detail["via_search"] = via_search ? "true" : "false";
  session.events.push_back(std::move(event));

  session.actions.push_back(Action{.kind = ActionKind::SelectItem,
                                   .at = now,
                                   .item_id = item.item_id,
                                   .via_search = via_search});
  touch(session, now);
}

void shuffle_excerpt(FlowSession& session, const content::Catalog& catalog, Millis now) {
  require_state(session, StateKind::KeywordSelect, "shuffle_excerpt");
  const int step = session.state.keyword_step;
  if (step == 1) {
    session.current_excerpt = content::random_excerpt(selected_item(session, catalog), session.rng);
  } else {
    session.current_excerpt =
        excerpt_for_keyword(session, catalog, session.keywords[step - 2], session.rng);
  }
  ++session.shuffle_count;

  NudgeEvent event{EventKind::ExcerptShuffled, false, {}, now};
  event.detail["keyword_step"] = std::to_string(step);
  event.detail["start_index"] = std::to_string(session.current_excerpt->start_index);
  session.events.push_back(std::move(event));

  session.actions.push_back(Action{.kind = ActionKind::Shuffle, .at = now});
  touch(session, now);
}

void select_keyword(FlowSession& session, const content::Catalog& catalog, std::string_view word,
                    std::size_t position, Millis now) {
  require_state(session, StateKind::KeywordSelect, "select_keyword");
  // `word` may view into the excerpt that is replaced below.
  std::string requested(word);
  const auto& excerpt = *session.current_excerpt;
  if (position >= excerpt.words.size()) {
    throw Error(ErrorCode::Mismatch, "keyword position " + std::to_string(position) +
                                         " outside excerpt of " +
                                         std::to_string(excerpt.words.size()) + " words");
  }
  const auto wanted = content::normalize_word(requested);
  if (wanted.empty()) throw Error(ErrorCode::InvalidArgument, "keyword has no letters or digits");
  const auto& shown = excerpt.words[position];
  if (content::normalize_word(shown) != wanted) {
    throw Error(ErrorCode::Mismatch, "word '" + requested + "' does not match '" + shown +
                                         "' at position " + std::to_string(position));
  }

  const int step = session.state.keyword_step;
  auto keyword = content::strip_punctuation(shown);  // copy before the excerpt changes
  if (step < kKeywordCount) {
    session.current_excerpt = excerpt_for_keyword(session, catalog, keyword, session.rng);
    session.state = FlowState{StateKind::KeywordSelect, step + 1};
  } else {
    session.current_excerpt.reset();
    session.state = FlowState{StateKind::Splash, 0};
  }
  session.keywords.push_back(keyword);
  if (session.state.kind == StateKind::Splash) {
    session.events.push_back(NudgeEvent{EventKind::SplashShown, true, {}, now});
  }

  session.actions.push_back(Action{.kind = ActionKind::SelectKeyword,
                                   .at = now,
                                   .word = std::move(requested),
                                   .position = position});
  touch(session, now);
}

SplashPayload splash_payload(const FlowSession& session, const FlowConfig& config) {
  require_state(session, StateKind::Splash, "splash_payload");
  SplashPayload payload;
  payload.keywords = session.keywords;
  payload.duration_ms = effective_splash_duration(config);
  return payload;
}

void dismiss_splash(FlowSession& session, bool early, Millis now) {
  require_state(session, StateKind::Splash, "dismiss_splash");
  session.state = FlowState{StateKind::Register, 0};
  if (early) {
    NudgeEvent event{EventKind::SplashDismissedEarly, false, {}, now};
    event.detail["shown_ms"] = std::to_string(now - session.updated_at);
    session.events.push_back(std::move(event));
  }
  session.actions.push_back(Action{.kind = ActionKind::DismissSplash, .at = now, .early = early});
  touch(session, now);
}

std::optional<RegistrationContext> registration_context(const FlowSession& session,
                                                        const content::Catalog& catalog) {
  require_state(session, StateKind::Register, "registration_context");
  if (session.condition == Condition::Control) return std::nullopt;
  const auto& item = selected_item(session, catalog);
  return RegistrationContext{item.cover_ref, item.title, session.keywords};
}

void complete(FlowSession& session, Millis now) {
  require_state(session, StateKind::Register, "complete");
  session.state = FlowState{StateKind::Done, 0};
  touch(session, now);
}

PixiSnapshot snapshot(const FlowSession& session, const content::Catalog& catalog) {
  if (session.condition == Condition::Control) {
    throw Error(ErrorCode::InvalidArgument, "control sessions have no PiXi snapshot");
  }
  if (session.keywords.size() != kKeywordCount || !session.selected_item_id) {
    throw Error(ErrorCode::WrongState, "session has not completed keyword selection");
  }
  const auto& item = selected_item(session, catalog);
  return PixiSnapshot{session.condition, item.category, item.item_id,
                      item.title,        session.keywords, session.events};
}

FlowSession begin_hint_login(std::string session_id, std::string user_id,
                             const PixiSnapshot& account_snapshot, std::uint64_t seed, Millis now) {
  if (account_snapshot.condition != Condition::PiXiHints) {
    throw Error(ErrorCode::Forbidden, "keyword re-selection is only offered to PiXi-Hints accounts");
  }
  auto s = start_session(std::move(session_id), std::move(user_id), Condition::PiXiHints, seed, now);
  s.purpose = Purpose::HintLogin;
  s.state = FlowState{StateKind::CategorySelect, 0};
  s.original_keywords = account_snapshot.keywords;
  return s;
}

int record_recall(const FlowSession& hint_session, std::span<const std::string> original_keywords) {
  if (hint_session.keywords.size() < static_cast<std::size_t>(kKeywordCount)) {
    throw Error(ErrorCode::WrongState, "recall needs three re-selected keywords, have " +
                                           std::to_string(hint_session.keywords.size()));
  }
  std::vector<std::string> remaining;
  for (const auto& k : original_keywords) remaining.push_back(content::normalize_word(k));
  int recalled = 0;
  for (const auto& k : hint_session.keywords) {
    const auto it = std::find(remaining.begin(), remaining.end(), content::normalize_word(k));
    if (it != remaining.end()) {
      ++recalled;
      remaining.erase(it);
    }
  }
  return recalled;
}

void apply(FlowSession& session, const Action& action, const content::Catalog& catalog,
           const FlowConfig& config) {
  switch (action.kind) {
    case ActionKind::IntroNext:
      advance_intro(session, action.at);
      return;
    case ActionKind::SelectCategory:
      if (!action.category) throw Error(ErrorCode::InvalidArgument, "category action lacks category");
      select_category(session, *action.category, action.at, action.scrolled);
      return;
    case ActionKind::SelectItem:
      select_item(session, catalog, config, action.item_id, action.via_search, action.at);
      return;
    case ActionKind::Shuffle:
      shuffle_excerpt(session, catalog, action.at);
      return;
    case ActionKind::SelectKeyword:
      select_keyword(session, catalog, action.word, action.position, action.at);
      return;
    case ActionKind::DismissSplash:
      dismiss_splash(session, action.early, action.at);
      return;
  }
}

FlowSession replay(std::string session_id, std::string user_id, Condition condition,
                   Purpose purpose, std::uint64_t seed, Millis started_at,
                   std::span<const Action> actions, const content::Catalog& catalog,
                   const FlowConfig& config, std::vector<std::string> original_keywords) {
  FlowSession session;
  if (purpose == Purpose::HintLogin) {
    PixiSnapshot snap;
    snap.condition = condition;
    snap.keywords = std::move(original_keywords);
    session = begin_hint_login(std::move(session_id), std::move(user_id), snap, seed, started_at);
  } else {
    session = start_session(std::move(session_id), std::move(user_id), condition, seed, started_at);
  }
  for (const auto& action : actions) apply(session, action, catalog, config);
  return session;
}

AcceptanceCount acceptance(std::span<const NudgeEvent> events, EventKind kind) {
  AcceptanceCount count;
  for (const auto& e : events) {
    if (e.kind != kind) continue;
    ++count.total;
    if (e.accepted) ++count.accepted;
  }
  return count;
}

}  // namespace pixi::flow
