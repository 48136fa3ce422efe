#include <array>
#include <string>
#include <utility>

#include "pixi/common/error.hpp"
#include "pixi/flow/session.hpp"

namespace pixi::flow {

namespace {

template <typename Enum, std::size_t N>
Enum parse_name(const std::array<std::pair<Enum, std::string_view>, N>& table,
                std::string_view name, const char* what) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  throw Error(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" +
                                              std::string(name) + "'");
}

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table, Enum v) {
  for (const auto& [value, text] : table) {
    if (value == v) return text;
  }
  return "unknown";
}

constexpr std::array<std::pair<Condition, std::string_view>, 3> kConditions{{
    {Condition::Control, "control"},
    {Condition::PiXi, "pixi"},
    {Condition::PiXiHints, "pixi_hints"},
}};

constexpr std::array<std::pair<StateKind, std::string_view>, 7> kStates{{
    {StateKind::Intro, "intro"},
    {StateKind::CategorySelect, "category_select"},
    {StateKind::ItemSelect, "item_select"},
    {StateKind::KeywordSelect, "keyword_select"},
    {StateKind::Splash, "splash"},
    {StateKind::Register, "register"},
    {StateKind::Done, "done"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 5> kEvents{{
    {EventKind::CategoryPositioning, "category_positioning"},
    {EventKind::ItemSuggested, "item_suggested"},
    {EventKind::SplashShown, "splash_shown"},
    {EventKind::SplashDismissedEarly, "splash_dismissed_early"},
    {EventKind::ExcerptShuffled, "excerpt_shuffled"},
}};

constexpr std::array<std::pair<ActionKind, std::string_view>, 6> kActions{{
    {ActionKind::IntroNext, "intro_next"},
    {ActionKind::SelectCategory, "select_category"},
    {ActionKind::SelectItem, "select_item"},
    {ActionKind::Shuffle, "shuffle"},
    {ActionKind::SelectKeyword, "select_keyword"},
    {ActionKind::DismissSplash, "dismiss_splash"},
}};

}  // namespace

std::string_view to_string(Condition condition) { return name_of(kConditions, condition); }
Condition parse_condition(std::string_view name) { return parse_name(kConditions, name, "condition"); }

std::string_view to_string(StateKind kind) { return name_of(kStates, kind); }
StateKind parse_state_kind(std::string_view name) { return parse_name(kStates, name, "state"); }

std::string_view to_string(EventKind kind) { return name_of(kEvents, kind); }
EventKind parse_event_kind(std::string_view name) { return parse_name(kEvents, name, "event kind"); }

std::string_view to_string(ActionKind kind) { return name_of(kActions, kind); }
ActionKind parse_action_kind(std::string_view name) {
  return parse_name(kActions, name, "action kind");
}

}  // namespace pixi::flow
