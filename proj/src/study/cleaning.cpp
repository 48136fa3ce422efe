#include "pixi/study/cleaning.hpp"

#include <algorithm>
#include <map>

#include "pixi/content/text.hpp"

namespace pixi::study {

std::string_view to_string(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::WeaklyCommitted: return "weakly_committed";
    case RemovalReason::MultiIdentity: return "multi_identity";
    case RemovalReason::Inattentive: return "inattentive";
  }
  return "weakly_committed";
}

std::size_t CleaningReport::removed_count() const {
  std::size_t n = 0;
  for (const auto& list : removed) n += list.size();
  return n;
}

bool is_simple_sequence(std::string_view p) {
  if (p.size() < 2) return false;
  // one character repeated
  if (std::all_of(p.begin(), p.end(), [&](char c) { return c == p[0]; })) return true;
  // digits only with a constant stride: 123456789, 97531
  if (!std::all_of(p.begin(), p.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  const int stride = p[1] - p[0];
  for (std::size_t i = 2; i < p.size(); ++i) {
    if (p[i] - p[i - 1] != stride) return false;
  }
  return true;
}

bool is_attentive_answer(std::string_view answer) {
  const auto a = content::case_fold(answer);
  return a == "disagree" || a == "strongly disagree";
}

std::optional<std::string> weakly_committed(const records::ParticipantExport& r, const StudyConfig& config) {
  if (r.password_plain) {
    const auto password = content::case_fold(*r.password_plain);
    for (const auto* token : {&r.worker_id, &r.username}) {
      if (token->size() >= config.min_identity_token &&
          password.find(content::case_fold(*token)) != std::string::npos) {
        return token == &r.worker_id ? "contains_worker_id" : "contains_username";
      }
    }
    if (is_simple_sequence(*r.password_plain)) return "simple_sequence";
  }
  if (r.questionnaire && r.questionnaire->sus.size() == 10) {
    const auto& sus = r.questionnaire->sus;
    if (std::all_of(sus.begin(), sus.end(), [&](int v) { return v == sus[0]; })) {
      return "sus_straight_lining";
    }
  }
  return std::nullopt;
}

CleaningReport clean(const std::vector<records::ParticipantExport>& records, const StudyConfig& config) {
  std::map<std::string, std::size_t> shared;
  for (const auto& r : records) {
    if (r.password_plain) ++shared[*r.password_plain];
  }

  CleaningReport report;
  for (const auto& r : records) {
    if (config.filter_weakly_committed) {
      if (auto why = weakly_committed(r, config)) {
        report.removed[0].push_back({r, *why});
        continue;
      }
    }
    if (config.filter_multi_identity && r.password_plain) {
      const auto count = shared[*r.password_plain];
      if (count >= config.multi_k && !strength::is_common_password(*r.password_plain, config.common_top_n)) {
        report.removed[1].push_back({r, "shared_by_" + std::to_string(count)});
        continue;
      }
    }
    if (config.filter_inattentive) {
      if (!r.questionnaire) {
        report.removed[2].push_back({r, "no_questionnaire"});
        continue;
      }
      if (!is_attentive_answer(r.questionnaire->attention)) {
        report.removed[2].push_back({r, "answered_" + r.questionnaire->attention});
        continue;
      }
    }
    report.valid.push_back(r);
  }
  return report;
}

nlohmann::ordered_json removed_to_json(const CleaningReport& report) {
  nlohmann::ordered_json j;
  for (auto reason : kAllReasons) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& removal : report.removed_for(reason)) {
      list.push_back({{"username", removal.record.username},
                      {"condition", flow::to_string(removal.record.condition)},
                      {"rule", removal.detail}});
    }
    j[std::string(to_string(reason))] = std::move(list);
  }
  return j;
}

nlohmann::ordered_json cleaning_summary(const CleaningReport& report) {
  nlohmann::ordered_json j;
  auto per_condition = [](auto&& records_of) {
    nlohmann::ordered_json row;
    std::size_t total = 0;
    for (auto c : flow::kAllConditions) {
      const std::size_t n = records_of(c);
      row[std::string(flow::to_string(c))] = n;
      total += n;
    }
    row["total"] = total;
    return row;
  };
  for (auto reason : kAllReasons) {
    const auto& list = report.removed_for(reason);
    j[std::string(to_string(reason))] = per_condition([&](flow::Condition c) {
      return static_cast<std::size_t>(std::count_if(list.begin(), list.end(), [&](const Removal& r) {
        return r.record.condition == c;
      }));
    });
  }
  j["valid"] = per_condition([&](flow::Condition c) {
    return static_cast<std::size_t>(std::count_if(report.valid.begin(), report.valid.end(),
                                                  [&](const auto& r) { return r.condition == c; }));
  });
  return j;
}

}  // namespace pixi::study
