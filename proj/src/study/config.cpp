#include "pixi/study/config.hpp"

#include <fstream>

#include "pixi/common/error.hpp"

namespace pixi::study {

StudyConfig config_from_json(const nlohmann::json& j) {
  StudyConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "online_threshold") {
        c.thresholds.online = value.get<double>();
      } else if (key == "offline_threshold") {
        c.thresholds.offline = value.get<double>();
      } else if (key == "alpha") {
        c.alpha = value.get<double>();
      } else if (key == "multi_k") {
        c.multi_k = value.get<std::size_t>();
      } else if (key == "common_top_n") {
        c.common_top_n = value.get<std::size_t>();
      } else if (key == "min_identity_token") {
        c.min_identity_token = value.get<std::size_t>();
      } else if (key == "filters") {
        c.filter_weakly_committed = value.value("weakly_committed", true);
        c.filter_multi_identity = value.value("multi_identity", true);
        c.filter_inattentive = value.value("inattentive", true);
      } else if (key == "keyword_dictionary") {
        c.keyword_dictionary = value.get<bool>();
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("study config: ") + e.what());
  }
  if (!(c.thresholds.online < c.thresholds.offline)) {
    throw Error(ErrorCode::InvalidArgument, "online threshold must be below offline threshold");
  }
  if (c.alpha <= 0 || c.alpha >= 1) throw Error(ErrorCode::InvalidArgument, "alpha must be in (0, 1)");
  if (c.multi_k < 2) throw Error(ErrorCode::InvalidArgument, "multi_k must be at least 2");
  return c;
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

nlohmann::ordered_json to_json(const StudyConfig& c) {
  nlohmann::ordered_json j;
  j["online_threshold"] = c.thresholds.online;
  j["offline_threshold"] = c.thresholds.offline;
  j["alpha"] = c.alpha;
  j["multi_k"] = c.multi_k;
  j["common_top_n"] = c.common_top_n;
  j["min_identity_token"] = c.min_identity_token;
  j["filters"] = {{"weakly_committed", c.filter_weakly_committed},
                  {"multi_identity", c.filter_multi_identity},
                  {"inattentive", c.filter_inattentive}};
  j["keyword_dictionary"] = c.keyword_dictionary;
  return j;
}

}  // namespace pixi::study
