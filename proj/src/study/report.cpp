#include "pixi/study/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "pixi/common/error.hpp"

namespace pixi::study {

using json = nlohmann::ordered_json;
using flow::Condition;
using strength::GuessabilityClass;

namespace {

constexpr std::array<GuessabilityClass, 3> kClasses = {
    GuessabilityClass::OnlineUnsafe, GuessabilityClass::OfflineUnsafe, GuessabilityClass::Safe};

std::string name(Condition c) { return std::string(flow::to_string(c)); }
std::string name(content::Category c) { return std::string(content::to_string(c)); }
std::string name(GuessabilityClass c) { return std::string(strength::to_string(c)); }

json mean_std_json(std::vector<double> values) {
  const auto ms = mean_std(values);
  json j;
  j["n"] = ms.n;
  j["mean"] = ms.n ? json(ms.mean) : json(nullptr);
  j["std"] = ms.n > 1 ? json(ms.std) : json(nullptr);
  return j;
}

bool is_pixi(Condition c) { return c != Condition::Control; }

// Linear-interpolation quantile of sorted values.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

json acceptance_section(const std::vector<ParticipantRecord>& rs) {
  std::map<content::Category, std::pair<std::size_t, std::size_t>> positioning, items;
  for (const auto& r : rs) {
    if (!is_pixi(r.data.condition)) continue;
    for (const auto& e : r.data.nudge_events) {
      if (e.kind == flow::EventKind::CategoryPositioning) {
        auto& slot = positioning[content::parse_category(e.detail.at("centered"))];
        slot.first += e.accepted ? 1 : 0;
        ++slot.second;
      } else if (e.kind == flow::EventKind::ItemSuggested) {
        auto& slot = items[content::parse_category(e.detail.at("category"))];
        slot.first += e.accepted ? 1 : 0;
        ++slot.second;
      }
    }
  }
  json j;
  for (auto c : content::kAllCategories) {
    j[name(c)] = {{"positioning", ratio(positioning[c].first, positioning[c].second)},
                  {"suggested_items", ratio(items[c].first, items[c].second)}};
  }
  return j;
}

std::vector<double> collect(const std::vector<ParticipantRecord>& rs, Condition c,
                            auto&& field) {
  std::vector<double> out;
  for (const auto& r : rs) {
    if (r.data.condition != c) continue;
    if (auto v = field(r)) out.push_back(*v);
  }
  return out;
}

std::optional<double> length_of(const ParticipantRecord& r) {
  return r.password_length ? std::optional<double>(static_cast<double>(*r.password_length)) : std::nullopt;
}
std::optional<double> score_of(const ParticipantRecord& r) {
  return r.score ? std::optional<double>(*r.score) : std::nullopt;
}
std::optional<double> sus_of(const ParticipantRecord& r) { return r.sus; }

json descriptive_section(const std::vector<ParticipantRecord>& rs) {
  json j;
  for (auto c : flow::kAllConditions) {
    j[name(c)] = {{"length", mean_std_json(collect(rs, c, length_of))},
                  {"score", mean_std_json(collect(rs, c, score_of))},
                  {"sus", mean_std_json(collect(rs, c, sus_of))}};
  }
  return j;
}

json keyword_usage_section(const std::vector<ParticipantRecord>& rs) {
  json j;
  std::array<std::size_t, 4> total_by{};
  std::size_t total_users = 0, total_n = 0;
  for (auto c : {Condition::PiXi, Condition::PiXiHints}) {
    std::array<std::size_t, 4> by{};
    std::size_t n = 0;
    for (const auto& r : rs) {
      if (r.data.condition != c || !r.keyword_usage) continue;
      ++n;
      ++by[static_cast<std::size_t>(std::clamp(r.keywords_used, 0, 3))];
    }
    const std::size_t users = by[1] + by[2] + by[3];
    j[name(c)] = {{"one_keyword", by[1]}, {"two_keywords", by[2]}, {"three_keywords", by[3]},
                  {"users", ratio(users, n)}};
    for (std::size_t k = 1; k <= 3; ++k) total_by[k] += by[k];
    total_users += users;
    total_n += n;
  }
  j["total"] = {{"one_keyword", total_by[1]}, {"two_keywords", total_by[2]},
                {"three_keywords", total_by[3]}, {"users", ratio(total_users, total_n)}};
  return j;
}

json class_counts(const std::vector<const ParticipantRecord*>& group) {
  std::array<std::size_t, 3> counts{};
  for (const auto* r : group) ++counts[static_cast<std::size_t>(*r->guess_class)];
  json j;
  for (auto k : kClasses) j[name(k)] = ratio(counts[static_cast<std::size_t>(k)], group.size());
  return j;
}

json guessability_section(const std::vector<ParticipantRecord>& rs) {
  json by_condition, by_category;
  std::vector<const ParticipantRecord*> all_pixi;
  for (auto c : flow::kAllConditions) {
    std::vector<const ParticipantRecord*> group;
    for (const auto& r : rs) {
      if (r.data.condition == c && r.guess_class) group.push_back(&r);
    }
    by_condition[name(c)] = class_counts(group);
  }
  for (auto cat : content::kAllCategories) {
    std::vector<const ParticipantRecord*> group;
    for (const auto& r : rs) {
      if (is_pixi(r.data.condition) && r.guess_class && r.data.category == cat) group.push_back(&r);
    }
    all_pixi.insert(all_pixi.end(), group.begin(), group.end());
    by_category[name(cat)] = class_counts(group);
  }
  by_category["total"] = class_counts(all_pixi);
  return {{"by_condition", by_condition}, {"by_category", by_category}};
}

json keywords_vs_none_section(const std::vector<ParticipantRecord>& rs) {
  json j;
  for (auto c : {Condition::PiXi, Condition::PiXiHints}) {
    json row;
    for (bool used : {true, false}) {
      std::vector<double> len, score, guesses;
      for (const auto& r : rs) {
        if (r.data.condition != c || !r.keyword_usage || r.keyword_usage->any_used != used) continue;
        len.push_back(static_cast<double>(*r.password_length));
        score.push_back(*r.score);
        guesses.push_back(*r.log10_guesses);
      }
      row[used ? "with_keywords" : "without_keywords"] = {
          {"n", len.size()},
          {"length", mean_std_json(len)["mean"]},
          {"score", mean_std_json(score)["mean"]},
          {"log10_guesses", mean_std_json(guesses)["mean"]}};
    }
    j[name(c)] = std::move(row);
  }
  return j;
}

json login_section(const std::vector<ParticipantRecord>& rs) {
  json j;
  for (auto c : flow::kAllConditions) {
    std::vector<double> times;
    std::size_t success = 0;
    for (const auto& r : rs) {
      if (r.data.condition != c || !r.attempted_login) continue;
      times.push_back(r.login_time_s);
      success += r.login_success ? 1 : 0;
    }
    j[name(c)] = {{"login_time_s", mean_std_json(times)}, {"success", ratio(success, times.size())}};
  }
  return j;
}

json satisfaction_section(const std::vector<ParticipantRecord>& rs) {
  json j;
  for (auto c : flow::kAllConditions) {
    std::vector<double> values;
    std::array<std::size_t, 6> histogram{};
    for (const auto& r : rs) {
      if (r.data.condition != c || !r.satisfaction) continue;
      values.push_back(*r.satisfaction);
      ++histogram[static_cast<std::size_t>(std::clamp(*r.satisfaction, 1, 5))];
    }
    json row = mean_std_json(values);
    json hist;
    for (int v = 1; v <= 5; ++v) hist[std::to_string(v)] = histogram[static_cast<std::size_t>(v)];
    row["histogram"] = std::move(hist);
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      row["quantiles"] = {{"min", values.front()},
                          {"q1", quantile(values, 0.25)},
                          {"median", quantile(values, 0.5)},
                          {"q3", quantile(values, 0.75)},
                          {"max", values.back()}};
    } else {
      row["quantiles"] = nullptr;
    }
    j[name(c)] = std::move(row);
  }
  return j;
}

json tests_section(const std::vector<ParticipantRecord>& rs, const StudyConfig& config) {
  std::vector<NamedTest> tests;
  auto anova_on = [&](const char* label, auto&& field) {
    std::vector<std::vector<double>> groups;
    for (auto c : flow::kAllConditions) groups.push_back(collect(rs, c, field));
    if (std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() >= 2; })) {
      tests.push_back({label, anova_oneway(groups)});
    }
  };
  anova_on("anova_length_by_condition", length_of);
  anova_on("anova_score_by_condition", score_of);

  std::vector<std::vector<double>> table;
  for (auto c : flow::kAllConditions) {
    std::vector<double> row(3, 0.0);
    for (const auto& r : rs) {
      if (r.data.condition == c && r.guess_class) row[static_cast<std::size_t>(*r.guess_class)] += 1;
    }
    table.push_back(row);
  }
  try {
    tests.push_back({"chi2_class_by_condition", chi_square(table)});
  } catch (const Error&) {
    // a zero marginal: the test is undefined for this data set
  }

  json j;
  j["alpha"] = config.alpha;
  auto list = json::array();
  if (!tests.empty()) {
    std::vector<double> ps;
    for (const auto& t : tests) ps.push_back(t.result.p_value);
    const auto holm = holm_bonferroni(ps, config.alpha);
    for (std::size_t i = 0; i < tests.size(); ++i) {
      json entry{{"name", tests[i].name}};
      entry.update(to_json(tests[i].result));
      const auto rank = static_cast<std::size_t>(
          std::find(holm.order.begin(), holm.order.end(), i) - holm.order.begin());
      entry["holm_rank"] = rank + 1;
      entry["holm_threshold"] = holm.thresholds[rank];
      entry["reject_null"] = static_cast<bool>(holm.reject[i]);
      list.push_back(std::move(entry));
    }
  }
  j["tests"] = std::move(list);
  return j;
}

}  // namespace

json ratio(std::size_t count, std::size_t total) {
  json j;
  j["count"] = count;
  j["total"] = total;
  j["percent"] = total ? json(100.0 * static_cast<double>(count) / static_cast<double>(total)) : json(nullptr);
  return j;
}

json to_json(const TestResult& r) {
  json j;
  j["statistic"] = r.infinite ? json("inf") : json(r.statistic);
  const auto df = [](double d) { return std::floor(d) == d ? json(static_cast<long long>(d)) : json(d); };
  j["df"] = r.df2 > 0 ? json::array({df(r.df1), df(r.df2)}) : df(r.df1);
  j["p_value"] = r.p_value;
  j["effect_size"] = r.effect_size;
  j["effect_kind"] = to_string(r.effect_kind);
  return j;
}

ParticipantRecord derive(const records::ParticipantExport& data, const StudyConfig& config) {
  ParticipantRecord r;
  r.data = data;
  if (data.password_plain && !data.password_plain->empty()) {
    const auto& pw = *data.password_plain;
    const auto report = strength::estimate_guesses(
        pw, config.keyword_dictionary ? std::span<const std::string>(data.keywords)
                                      : std::span<const std::string>{});
    r.password_length = report.password_length;
    r.log10_guesses = report.log10_guesses;
    r.score = report.score;
    r.guess_class = strength::classify_log10(report.log10_guesses, config.thresholds);
    if (data.condition != Condition::Control) {
      r.keyword_usage = strength::detect_keyword_usage(pw, data.keywords);
      r.keywords_used = static_cast<int>(std::count_if(
          r.keyword_usage->flags.begin(), r.keyword_usage->flags.end(),
          [](auto f) { return f != strength::KeywordMatch::None; }));
    }
  }
  if (data.questionnaire) {
    if (data.questionnaire->sus.size() == 10) {
      try {
        r.sus = sus_score(data.questionnaire->sus);
      } catch (const Error&) {
        // out-of-range answers: leave SUS undefined
      }
    }
    if (data.questionnaire->satisfaction >= 1 && data.questionnaire->satisfaction <= 5) {
      r.satisfaction = data.questionnaire->satisfaction;
    }
    r.attention = data.questionnaire->attention;
  }
  if (!data.hint_recalls.empty()) r.recall_count = data.hint_recalls.back().recall_count;
  for (const auto& a : data.login_attempts) {
    if (a.episode != 1) continue;
    r.attempted_login = true;
    r.login_time_s += a.duration_s;
    r.login_success = r.login_success || a.success;
  }
  return r;
}

json report(const std::vector<records::ParticipantExport>& records, const StudyConfig& config) {
  if (records.empty()) throw Error(ErrorCode::InvalidArgument, "no records to report on");
  std::vector<ParticipantRecord> rs;
  rs.reserve(records.size());
  for (const auto& rec : records) rs.push_back(derive(rec, config));

  json j;
  json counts;
  for (auto c : flow::kAllConditions) {
    counts[name(c)] = std::count_if(rs.begin(), rs.end(), [&](const auto& r) { return r.data.condition == c; });
  }
  counts["total"] = rs.size();
  j["participants"] = std::move(counts);
  j["nudge_acceptance"] = acceptance_section(rs);
  j["security_usability"] = descriptive_section(rs);
  j["keyword_usage"] = keyword_usage_section(rs);
  j["guessability"] = guessability_section(rs);
  j["keywords_vs_none"] = keywords_vs_none_section(rs);
  j["login"] = login_section(rs);
  j["satisfaction"] = satisfaction_section(rs);
  j["hypothesis_tests"] = tests_section(rs, config);
  return j;
}

namespace {

std::string fmt(const json& v, int precision = 2) {
  if (v.is_null()) return "–";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(precision);
  out << v.get<double>();
  return out.str();
}

std::string fmt_ratio(const json& r) {
  return fmt(r["count"]) + "/" + fmt(r["total"]) + " (" + fmt(r["percent"]) + "%)";
}

std::string fmt_ms(const json& m) { return fmt(m["mean"]) + " ± " + fmt(m["std"]); }

}  // namespace

std::string render_markdown(const json& report) {
  std::ostringstream md;
  const std::array<std::string, 3> conds = {"control", "pixi", "pixi_hints"};
  const std::array<std::string, 3> cats = {"books", "movies", "images"};

  md << "# Study report\n\n";
  md << "Participants: control " << report["participants"]["control"] << ", pixi "
     << report["participants"]["pixi"] << ", pixi_hints " << report["participants"]["pixi_hints"]
     << " (total " << report["participants"]["total"] << ")\n\n";

  md << "## Nudge acceptance (PiXi and PiXi-Hints)\n\n| | Positioning (category page) | Suggested items (items page) |\n|---|---|---|\n";
  for (const auto& c : cats) {
    const auto& a = report["nudge_acceptance"][c];
    md << "| " << c << " | " << fmt_ratio(a["positioning"]) << " | " << fmt_ratio(a["suggested_items"]) << " |\n";
  }

  md << "\n## Length, score and SUS\n\n| | control | pixi | pixi_hints |\n|---|---|---|---|\n";
  for (const auto& metric : {"length", "score", "sus"}) {
    md << "| " << metric;
    for (const auto& c : conds) md << " | " << fmt_ms(report["security_usability"][c][metric]);
    md << " |\n";
  }
  md << "| n";
  for (const auto& c : conds) md << " | " << fmt(report["security_usability"][c]["length"]["n"]);
  md << " |\n";

  md << "\n## Keyword usage\n\n| | 1 keyword | 2 keywords | 3 keywords | Total |\n|---|---|---|---|---|\n";
  for (const auto& c : {"pixi", "pixi_hints", "total"}) {
    const auto& k = report["keyword_usage"][c];
    md << "| " << c << " | " << k["one_keyword"] << " | " << k["two_keywords"] << " | "
       << k["three_keywords"] << " | " << fmt_ratio(k["users"]) << " |\n";
  }

  auto class_table = [&](const json& section, const std::vector<std::string>& rows) {
    md << "| | online_unsafe | offline_unsafe | safe |\n|---|---|---|---|\n";
    for (const auto& r : rows) {
      md << "| " << r;
      for (const auto& k : {"online_unsafe", "offline_unsafe", "safe"}) md << " | " << fmt(section[r][k]["percent"], 1) << "%";
      md << " |\n";
    }
  };
  md << "\n## Guessability by condition\n\n";
  class_table(report["guessability"]["by_condition"], {conds.begin(), conds.end()});
  md << "\n## Guessability by category (PiXi and PiXi-Hints)\n\n";
  class_table(report["guessability"]["by_category"], {"books", "movies", "images", "total"});

  md << "\n## Passwords with vs. without keywords\n\n| | Keywords | n | Length | Score | log10 guesses |\n|---|---|---|---|---|---|\n";
  for (const auto& c : {"pixi", "pixi_hints"}) {
    for (const auto& [key, label] : {std::pair{"with_keywords", "yes"}, std::pair{"without_keywords", "no"}}) {
      const auto& row = report["keywords_vs_none"][c][key];
      md << "| " << c << " | " << label << " | " << row["n"] << " | " << fmt(row["length"]) << " | "
         << fmt(row["score"]) << " | " << fmt(row["log10_guesses"]) << " |\n";
    }
  }

  md << "\n## Login (session 2, first episode)\n\n| | control | pixi | pixi_hints |\n|---|---|---|---|\n";
  md << "| Login time (s)";
  for (const auto& c : conds) md << " | " << fmt_ms(report["login"][c]["login_time_s"]);
  md << " |\n| Login success";
  for (const auto& c : conds) md << " | " << fmt_ratio(report["login"][c]["success"]);
  md << " |\n";

  md << "\n## Satisfaction (1 = strongly disagree, 5 = strongly agree)\n\n| | mean | 1 | 2 | 3 | 4 | 5 | median |\n|---|---|---|---|---|---|---|---|\n";
  for (const auto& c : conds) {
    const auto& s = report["satisfaction"][c];
    md << "| " << c << " | " << fmt(s["mean"]);
    for (int v = 1; v <= 5; ++v) md << " | " << s["histogram"][std::to_string(v)];
    md << " | " << (s["quantiles"].is_null() ? "–" : fmt(s["quantiles"]["median"], 1)) << " |\n";
  }

  md << "\n## Hypothesis tests (Holm-Bonferroni, alpha " << fmt(report["hypothesis_tests"]["alpha"]) << ")\n\n";
  md << "| Test | Statistic | df | p | Effect | Threshold | Reject H0 |\n|---|---|---|---|---|---|---|\n";
  for (const auto& t : report["hypothesis_tests"]["tests"]) {
    std::string df = t["df"].is_array() ? fmt(t["df"][0], 0) + ", " + fmt(t["df"][1], 0) : fmt(t["df"], 0);
    md << "| " << t["name"].get<std::string>() << " | " << fmt(t["statistic"], 3) << " | " << df << " | "
       << fmt(t["p_value"], 4) << " | " << t["effect_kind"].get<std::string>() << " = "
       << fmt(t["effect_size"], 3) << " | " << fmt(t["holm_threshold"], 4) << " | "
       << (t["reject_null"].get<bool>() ? "yes" : "no") << " |\n";
  }
  return md.str();
}

}  // namespace pixi::study
