#pragma once

#include <string>

#include "json.hpp"
#include "pixi/strength/strength.hpp"

namespace pixi::study {

struct StudyConfig {
  strength::Thresholds thresholds;
  double alpha = 0.05;
  std::size_t multi_k = 3;           // accounts sharing one uncommon password
  std::size_t common_top_n = 1000;   // "common" = within this many top passwords
  std::size_t min_identity_token = 3;  // shorter usernames/worker IDs are not searched for
  bool filter_weakly_committed = true;
  bool filter_multi_identity = true;
  bool filter_inattentive = true;
  bool keyword_dictionary = false;   // feed keywords to the estimator as rank-1 words
};

// Missing keys keep their defaults; unknown keys are an error.
StudyConfig config_from_json(const nlohmann::json& j);
StudyConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const StudyConfig& config);

}  // namespace pixi::study
