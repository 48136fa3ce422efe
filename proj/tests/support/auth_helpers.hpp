#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "pixi/auth/service.hpp"
#include "pixi/content/text.hpp"

namespace pixi::testing {

// Manually advanced clock for timing assertions.
struct FakeClock {
  std::shared_ptr<std::atomic<Millis>> now = std::make_shared<std::atomic<Millis>>(1'700'000'000'000);
  auth::Service::Clock fn() const {
    auto p = now;
    return [p] { return p->load(); };
  }
  void advance(Millis ms) { *now += ms; }
};

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("pixi-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline auth::ServiceConfig cheap_config(bool research = true) {
  auth::ServiceConfig config;
  config.server_seed = 7;
  config.hash_cost = auth::HashCost::minimum();
  config.research_export = research;
  return config;
}

// Enrolls until the assigned condition is `wanted`.
inline auth::Enrollment enroll_as(auth::Service& service, flow::Condition wanted,
                                  const std::string& worker_id = "A3KX9Q2ZP7W1M") {
  for (;;) {
    auto e = service.enroll(worker_id);
    if (e.condition == wanted) return e;
  }
}

inline std::size_t first_selectable(const nlohmann::ordered_json& excerpt) {
  const auto& words = excerpt["words"];
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!content::normalize_word(words[i].get<std::string>()).empty()) return i;
  }
  return 0;
}

// Walks a PiXi session from Intro (or CategorySelect) to Register taking the
// centered category, the first suggested item and the first usable words.
inline void drive_to_register(auth::Service& service, const std::string& session_id) {
  auto kind = [&] { return service.session_view(session_id)["session"]["state"]["kind"].get<std::string>(); };
  if (kind() == "intro") service.intro_next(session_id);
  const auto cats = service.categories(session_id);
  service.select_category(session_id, content::parse_category(cats["centered"].get<std::string>()), false);
  const auto items = service.items(session_id);
  service.select_item(session_id, items["items"][0]["item_id"].get<std::string>(), false);
  while (kind() == "keyword_select") {
    const auto ex = service.excerpt(session_id)["excerpt"];
    const auto pos = first_selectable(ex);
    service.select_keyword(session_id, ex["words"][pos].get<std::string>(), pos);
  }
  service.dismiss_splash(session_id, false);
}

}  // namespace pixi::testing
