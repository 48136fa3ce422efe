#include "pixi/flow/serialize.hpp"

#include "pixi/common/error.hpp"

namespace pixi::flow {

using json = nlohmann::ordered_json;

namespace {

template <typename F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

json state_to_json(const FlowState& state) {
  json j;
  j["kind"] = to_string(state.kind);
  if (state.kind == StateKind::KeywordSelect) j["keyword_step"] = state.keyword_step;
  return j;
}

FlowState state_from_json(const json& j) {
  FlowState s;
  s.kind = parse_state_kind(j.at("kind").get<std::string>());
  s.keyword_step = j.value("keyword_step", 0);
  return s;
}

json categories_to_json(const std::array<Category, 3>& order) {
  json arr = json::array();
  for (auto c : order) arr.push_back(content::to_string(c));
  return arr;
}

}  // namespace

json to_json(const NudgeEvent& event) {
  json j;
  j["kind"] = to_string(event.kind);
  j["accepted"] = event.accepted;
  json detail = json::object();
  for (const auto& [k, v] : event.detail) detail[k] = v;
  j["detail"] = std::move(detail);
  j["at"] = event.at;
  return j;
}

NudgeEvent event_from_json(const json& j) {
  return parse_guard("nudge event", [&] {
    NudgeEvent e;
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.accepted = j.at("accepted").get<bool>();
    for (const auto& [k, v] : j.at("detail").items()) e.detail[k] = v.get<std::string>();
    e.at = j.at("at").get<Millis>();
    return e;
  });
}

json to_json(const Action& action) {
  json j;
  j["kind"] = to_string(action.kind);
  j["at"] = action.at;
  switch (action.kind) {
    case ActionKind::SelectCategory:
      j["category"] = content::to_string(*action.category);
      if (action.scrolled) j["scrolled"] = *action.scrolled;
      break;
    case ActionKind::SelectItem:
      j["item_id"] = action.item_id;
      j["via_search"] = action.via_search;
      break;
    case ActionKind::SelectKeyword:
      j["word"] = action.word;
      j["position"] = action.position;
      break;
    case ActionKind::DismissSplash:
      j["early"] = action.early;
      break;
    case ActionKind::IntroNext:
    case ActionKind::Shuffle:
      break;
  }
  return j;
}

Action action_from_json(const json& j) {
  return parse_guard("flow action", [&] {
    Action a;
    a.kind = parse_action_kind(j.at("kind").get<std::string>());
    a.at = j.at("at").get<Millis>();
    if (j.contains("category")) a.category = content::parse_category(j["category"].get<std::string>());
    if (j.contains("scrolled")) a.scrolled = j["scrolled"].get<bool>();
    a.item_id = j.value("item_id", std::string{});
    a.via_search = j.value("via_search", false);
    a.word = j.value("word", std::string{});
    a.position = j.value("position", std::size_t{0});
    a.early = j.value("early", false);
    return a;
  });
}

json to_json(const content::Excerpt& excerpt) {
  json j;
  j["item_id"] = excerpt.item_id;
  j["start_index"] = excerpt.start_index;
  j["words"] = excerpt.words;
  if (excerpt.required_keyword_position) {
    j["required_keyword_position"] = *excerpt.required_keyword_position;
  } else {
    j["required_keyword_position"] = nullptr;
  }
  return j;
}

content::Excerpt excerpt_from_json(const json& j) {
  return parse_guard("excerpt", [&] {
    content::Excerpt e;
    e.item_id = j.at("item_id").get<std::string>();
    e.start_index = j.at("start_index").get<std::size_t>();
    e.words = j.at("words").get<std::vector<std::string>>();
    if (j.contains("required_keyword_position") && !j["required_keyword_position"].is_null()) {
      e.required_keyword_position = j["required_keyword_position"].get<std::size_t>();
    }
    return e;
  });
}

json to_json(const FlowSession& s) {
  json j;
  j["session_id"] = s.session_id;
  j["user_id"] = s.user_id;
  j["condition"] = to_string(s.condition);
  j["purpose"] = s.purpose == Purpose::HintLogin ? "hint_login" : "registration";
  j["seed"] = s.seed;
  j["state"] = state_to_json(s.state);
  j["category_order"] = categories_to_json(s.category_order);
  j["centered_category"] = content::to_string(s.centered_category);
  j["selected_category"] =
      s.selected_category ? json(content::to_string(*s.selected_category)) : json(nullptr);
  j["selected_item_id"] = s.selected_item_id ? json(*s.selected_item_id) : json(nullptr);
  j["keywords"] = s.keywords;
  j["current_excerpt"] = s.current_excerpt ? to_json(*s.current_excerpt) : json(nullptr);
  j["shuffle_count"] = s.shuffle_count;
  json events = json::array();
  for (const auto& e : s.events) events.push_back(to_json(e));
  j["events"] = std::move(events);
  j["rng"] = s.rng.state();
  j["started_at"] = s.started_at;
  j["updated_at"] = s.updated_at;
  j["original_keywords"] = s.original_keywords;
  json actions = json::array();
  for (const auto& a : s.actions) actions.push_back(to_json(a));
  j["actions"] = std::move(actions);
  return j;
}

FlowSession session_from_json(const json& j) {
  return parse_guard("flow session", [&] {
    FlowSession s;
    s.session_id = j.at("session_id").get<std::string>();
    s.user_id = j.at("user_id").get<std::string>();
    s.condition = parse_condition(j.at("condition").get<std::string>());
    s.purpose = j.at("purpose").get<std::string>() == "hint_login" ? Purpose::HintLogin
                                                                    : Purpose::Registration;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.state = state_from_json(j.at("state"));
    const auto& order = j.at("category_order");
    if (order.size() != 3) throw Error(ErrorCode::Parse, "category_order must have 3 entries");
    for (std::size_t i = 0; i < 3; ++i) s.category_order[i] = content::parse_category(order[i].get<std::string>());
    s.centered_category = content::parse_category(j.at("centered_category").get<std::string>());
    if (!j.at("selected_category").is_null()) {
      s.selected_category = content::parse_category(j["selected_category"].get<std::string>());
    }
    if (!j.at("selected_item_id").is_null()) s.selected_item_id = j["selected_item_id"].get<std::string>();
    s.keywords = j.at("keywords").get<std::vector<std::string>>();
    if (!j.at("current_excerpt").is_null()) s.current_excerpt = excerpt_from_json(j["current_excerpt"]);
    s.shuffle_count = j.at("shuffle_count").get<int>();
    for (const auto& e : j.at("events")) s.events.push_back(event_from_json(e));
    s.rng.restore(j.at("rng").get<std::string>());
    s.started_at = j.at("started_at").get<Millis>();
    s.updated_at = j.at("updated_at").get<Millis>();
    s.original_keywords = j.at("original_keywords").get<std::vector<std::string>>();
    for (const auto& a : j.at("actions")) s.actions.push_back(action_from_json(a));
    return s;
  });
}

json to_json(const PixiSnapshot& snap) {
  json j;
  j["condition"] = to_string(snap.condition);
  j["category"] = content::to_string(snap.category);
  j["item_id"] = snap.item_id;
  j["title"] = snap.title;
  j["keywords"] = snap.keywords;
  json events = json::array();
  for (const auto& e : snap.events) events.push_back(to_json(e));
  j["events"] = std::move(events);
  return j;
}

PixiSnapshot snapshot_from_json(const json& j) {
  return parse_guard("pixi snapshot", [&] {
    PixiSnapshot snap;
    snap.condition = parse_condition(j.at("condition").get<std::string>());
    snap.category = content::parse_category(j.at("category").get<std::string>());
    snap.item_id = j.at("item_id").get<std::string>();
    snap.title = j.at("title").get<std::string>();
    snap.keywords = j.at("keywords").get<std::vector<std::string>>();
    for (const auto& e : j.at("events")) snap.events.push_back(event_from_json(e));
    return snap;
  });
}

json public_view(const FlowSession& s) {
  json j;
  j["session_id"] = s.session_id;
  j["condition"] = to_string(s.condition);
  j["purpose"] = s.purpose == Purpose::HintLogin ? "hint_login" : "registration";
  j["state"] = state_to_json(s.state);
  j["keywords"] = s.keywords;
  j["shuffle_count"] = s.shuffle_count;
  return j;
}

}  // namespace pixi::flow
