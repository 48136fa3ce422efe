#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixi/common/clock.hpp"
#include "pixi/common/random.hpp"
#include "pixi/content/catalog.hpp"
#include "pixi/content/excerpt.hpp"

namespace pixi::flow {

using content::Category;

enum class Condition { Control, PiXi, PiXiHints };

inline constexpr std::array<Condition, 3> kAllConditions{Condition::Control, Condition::PiXi,
                                                         Condition::PiXiHints};

std::string_view to_string(Condition condition);
Condition parse_condition(std::string_view name);

enum class StateKind { Intro, CategorySelect, ItemSelect, KeywordSelect, Splash, Register, Done };

std::string_view to_string(StateKind kind);
StateKind parse_state_kind(std::string_view name);

struct FlowState {
  StateKind kind = StateKind::Intro;
  // 1..3 while kind == KeywordSelect, 0 otherwise.
  int keyword_step = 0;

  friend bool operator==(const FlowState&, const FlowState&) = default;
};

enum class EventKind {
  CategoryPositioning,
  ItemSuggested,
  SplashShown,
  SplashDismissedEarly,
  ExcerptShuffled,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view name);

struct NudgeEvent {
  EventKind kind = EventKind::CategoryPositioning;
  bool accepted = false;
  std::map<std::string, std::string> detail;
  Millis at = 0;

  friend bool operator==(const NudgeEvent&, const NudgeEvent&) = default;
};

// What a flow session is for: creating the password, or re-selecting
// keywords before a PiXi-Hints login.
enum class Purpose { Registration, HintLogin };

enum class ActionKind {
  IntroNext,
  SelectCategory,
  SelectItem,
  Shuffle,
  SelectKeyword,
  DismissSplash,
};

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view name);

// One user interaction. Sessions keep the ordered list of successfully
// applied actions so that a session can be rebuilt from its seed.
struct Action {
  ActionKind kind = ActionKind::IntroNext;
  Millis at = 0;
  std::optional<Category> category;
  std::string item_id;
  bool via_search = false;
  std::string word;
  std::size_t position = 0;
  bool early = false;
  // Client telemetry attached to the category positioning event.
  std::optional<bool> scrolled;

  friend bool operator==(const Action&, const Action&) = default;
};

struct FlowSession {
  std::string session_id;
  std::string user_id;
  Condition condition = Condition::Control;
  Purpose purpose = Purpose::Registration;
  std::uint64_t seed = 0;
  FlowState state;
  std::array<Category, 3> category_order{Category::Books, Category::Movies, Category::Images};
  Category centered_category = Category::Movies;
  std::optional<Category> selected_category;
  std::optional<std::string> selected_item_id;
  std::vector<std::string> keywords;
  std::optional<content::Excerpt> current_excerpt;
  int shuffle_count = 0;
  std::vector<NudgeEvent> events;
  RandomStream rng;
  Millis started_at = 0;
  Millis updated_at = 0;
  // Hint-login sessions only: the keywords chosen at registration.
  std::vector<std::string> original_keywords;
  std::vector<Action> actions;

  friend bool operator==(const FlowSession&, const FlowSession&) = default;
};

// Index of the centered tile in the three-tile category layout.
inline constexpr std::size_t kCenterPosition = 1;
inline constexpr int kKeywordCount = 3;

}  // namespace pixi::flow
