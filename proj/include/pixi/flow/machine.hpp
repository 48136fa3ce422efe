#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pixi/flow/session.hpp"

namespace pixi::flow {

struct FlowConfig {
  std::uint64_t server_seed = 0;
  std::int64_t splash_duration_ms = 3000;
  std::size_t items_per_page = content::kItemsPerPage;
  std::string intro_video_url = "/static/intro-placeholder.mp4";
};

inline constexpr std::int64_t kMinSplashDurationMs = 1000;

// Configured splash duration, clamped to at least one second.
std::int64_t effective_splash_duration(const FlowConfig& config);

struct SplashPayload {
  std::vector<std::string> keywords;
  std::int64_t duration_ms = 3000;
  std::string background = "black";
  std::string text_color = "soft-white";
};

struct IntroContent {
  std::string video_url;
  // PiXi-Hints participants are told their keywords will be needed at login.
  bool memorable_keywords_advice = false;
};

struct RegistrationContext {
  std::string cover_ref;
  std::string title;
  std::vector<std::string> keywords;
};

// The part of a registered account needed to start a hint-login session.
struct PixiSnapshot {
  Condition condition = Condition::PiXi;
  Category category = Category::Books;
  std::string item_id;
  std::string title;
  std::vector<std::string> keywords;
  std::vector<NudgeEvent> events;

  friend bool operator==(const PixiSnapshot&, const PixiSnapshot&) = default;
};

// Control participants start at Register; PiXi and PiXi-Hints start at Intro.
// The category order is a seeded uniform permutation.
FlowSession start_session(std::string session_id, std::string user_id, Condition condition,
                          std::uint64_t seed, Millis now);

IntroContent intro_content(const FlowSession& session, const FlowConfig& config);

void advance_intro(FlowSession& session, Millis now);

void select_category(FlowSession& session, Category category, Millis now,
                     std::optional<bool> scrolled = std::nullopt);

// The item page for the session's selected category.
std::vector<const content::ContentItem*> suggested_items(const FlowSession& session,
                                                         const content::Catalog& catalog,
                                                         const FlowConfig& config);

void select_item(FlowSession& session, const content::Catalog& catalog, const FlowConfig& config,
                 std::string_view item_id, bool via_search, Millis now);

void shuffle_excerpt(FlowSession& session, const content::Catalog& catalog, Millis now);

void select_keyword(FlowSession& session, const content::Catalog& catalog, std::string_view word,
                    std::size_t position, Millis now);

SplashPayload splash_payload(const FlowSession& session, const FlowConfig& config);

void dismiss_splash(FlowSession& session, bool early, Millis now);

// Empty for Control sessions.
std::optional<RegistrationContext> registration_context(const FlowSession& session,
                                                        const content::Catalog& catalog);

// Register -> Done, called by the account service once the account exists.
void complete(FlowSession& session, Millis now);

PixiSnapshot snapshot(const FlowSession& session, const content::Catalog& catalog);

// Fresh PiXi-Hints re-selection session, starting at CategorySelect.
FlowSession begin_hint_login(std::string session_id, std::string user_id,
                             const PixiSnapshot& account_snapshot, std::uint64_t seed, Millis now);

// Re-selected keywords matching an original keyword after normalization,
// each original consumed at most once.
int record_recall(const FlowSession& hint_session, std::span<const std::string> original_keywords);

// Applies one recorded action (used by replay and by the HTTP layer).
void apply(FlowSession& session, const Action& action, const content::Catalog& catalog,
           const FlowConfig& config);

// Rebuilds a session from its identity, seed and action log.
FlowSession replay(std::string session_id, std::string user_id, Condition condition,
                   Purpose purpose, std::uint64_t seed, Millis started_at,
                   std::span<const Action> actions, const content::Catalog& catalog,
                   const FlowConfig& config, std::vector<std::string> original_keywords = {});

struct AcceptanceCount {
  std::size_t accepted = 0;
  std::size_t total = 0;

  double rate() const { return total == 0 ? 0.0 : static_cast<double>(accepted) / total; }
};

AcceptanceCount acceptance(std::span<const NudgeEvent> events, EventKind kind);

}  // namespace pixi::flow
