#pragma once

#include "json.hpp"

#include "pixi/flow/machine.hpp"
#include "pixi/flow/session.hpp"

namespace pixi::flow {

// Field order is fixed (ordered_json) so that exports are byte-stable.
nlohmann::ordered_json to_json(const NudgeEvent& event);
NudgeEvent event_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const Action& action);
Action action_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const content::Excerpt& excerpt);
content::Excerpt excerpt_from_json(const nlohmann::ordered_json& j);

// Full session state including the random stream, for persistence.
nlohmann::ordered_json to_json(const FlowSession& session);
FlowSession session_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const PixiSnapshot& snapshot);
PixiSnapshot snapshot_from_json(const nlohmann::ordered_json& j);

// The client-facing view of a session (no random state, no action log).
nlohmann::ordered_json public_view(const FlowSession& session);

}  // namespace pixi::flow
