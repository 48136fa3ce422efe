#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "pixi/records/participant.hpp"
#include "pixi/study/config.hpp"

namespace pixi::study {

// In precedence order: a record caught by several filters is filed under the first.
enum class RemovalReason { WeaklyCommitted, MultiIdentity, Inattentive };

inline constexpr std::array<RemovalReason, 3> kAllReasons = {
    RemovalReason::WeaklyCommitted, RemovalReason::MultiIdentity, RemovalReason::Inattentive};

std::string_view to_string(RemovalReason reason);

struct Removal {
  records::ParticipantExport record;
  std::string detail;  // which rule fired, e.g. "digit_sequence"
};

struct CleaningReport {
  std::array<std::vector<Removal>, 3> removed;  // indexed by RemovalReason
  std::vector<records::ParticipantExport> valid;

  const std::vector<Removal>& removed_for(RemovalReason r) const {
    return removed[static_cast<std::size_t>(r)];
  }
  std::size_t removed_count() const;
};

// Individual rules, exposed for tests. Empty optional = rule does not fire.
std::optional<std::string> weakly_committed(const records::ParticipantExport& r, const StudyConfig& config);
bool is_simple_sequence(std::string_view password);
bool is_attentive_answer(std::string_view answer);

CleaningReport clean(const std::vector<records::ParticipantExport>& records, const StudyConfig& config);

nlohmann::ordered_json removed_to_json(const CleaningReport& report);

// Table 1 style breakdown: removed per reason and valid, per condition.
nlohmann::ordered_json cleaning_summary(const CleaningReport& report);

}  // namespace pixi::study
