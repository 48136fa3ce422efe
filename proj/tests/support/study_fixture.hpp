#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pixi/content/catalog.hpp"
#include "pixi/flow/machine.hpp"
#include "pixi/records/participant.hpp"

namespace pixi::testing {

inline std::string study_fixture_path() { return std::string(PIXI_FIXTURE_DIR) + "/study_sessions.jsonl"; }

inline std::vector<records::ParticipantExport> load_study_fixture() {
  auto result = records::read_jsonl_file(study_fixture_path());
  return std::move(result.records);
}

// The flow configuration the fixture was generated with.
inline flow::FlowConfig study_fixture_config() {
  std::ifstream in(std::string(PIXI_FIXTURE_DIR) + "/study_sessions.meta.json");
  flow::FlowConfig config;
  config.server_seed = nlohmann::json::parse(in).at("server_seed").get<std::uint64_t>();
  return config;
}

// Rebuilds a recorded registration from its action log and compares it with
// what was exported. Returns a description of the first difference.
inline std::optional<std::string> replay_difference(const records::ParticipantExport& rec,
                                                    const content::Catalog& catalog,
                                                    const flow::FlowConfig& config) {
  if (!rec.registration) return std::nullopt;
  const auto& reg = *rec.registration;
  const auto s = flow::replay(reg.session_id, rec.worker_id, rec.condition, flow::Purpose::Registration,
                              reg.seed, reg.started_at, reg.actions, catalog, config);
  if (s.events != rec.nudge_events) return rec.username + ": events differ";
  if (s.keywords != rec.keywords) return rec.username + ": keywords differ";
  if (s.selected_item_id.value_or("") != rec.item_id) return rec.username + ": item differs";
  return std::nullopt;
}

}  // namespace pixi::testing
