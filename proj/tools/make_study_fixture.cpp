// Generates the synthetic study export used by the report and acceptance
// tests. Every PiXi session is driven through the real flow machine, so the
// recorded action logs replay to the recorded events.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"
#include "pixi/flow/machine.hpp"
#include "pixi/records/participant.hpp"
#include "pixi/strength/strength.hpp"
#include "pixi/study/cleaning.hpp"

using namespace pixi;
using content::Category;
using flow::Condition;
using records::ParticipantExport;

namespace {

constexpr Millis kStudyStart = 1614556800000;  // 2021-03-01
constexpr Millis kSecond = 1000;
constexpr Millis kDay = 86400 * kSecond;

const std::vector<std::string> kBaseWords = {
    "sunshine", "dragon", "monkey", "butterfly", "chocolate", "tiger", "summer", "winter",
    "falcon", "garden", "purple", "silver", "rocket", "pepper", "maple", "ocean",
    "thunder", "coffee", "cookie", "panther", "jasmine", "violet", "marble", "canyon",
    "hunter", "ranger", "phoenix", "cobalt", "meadow", "harbor", "willow", "autumn",
    "banjo", "cactus", "dolphin", "eagle", "ginger", "hazel", "island", "jungle",
    "kitten", "lemon", "mango", "nectar", "orchid", "pirate", "quartz", "raven",
    "salmon", "tulip", "umber", "velvet", "walrus", "yellow", "zebra", "bandit",
    "michael", "jessica", "daniel", "ashley", "robert", "amanda", "joseph", "sarah",
    "charlie", "buster", "shadow", "lucky", "bailey", "maggie", "toyota", "boston",
};

const std::vector<std::string> kSymbols = {"!", "@", "#", "$", "*", "."};

// Table 2 layout: per centered category, how many participants ended up
// selecting each category (books, movies, images order).
struct CategoryPlan {
  Category centered;
  Category selected;
};

std::vector<CategoryPlan> category_plans() {
  const std::vector<std::pair<Category, std::array<int, 3>>> layout = {
      {Category::Books, {20, 15, 21}},
      {Category::Movies, {11, 29, 19}},
      {Category::Images, {10, 11, 30}},
  };
  std::vector<CategoryPlan> plans;
  for (const auto& [centered, counts] : layout) {
    for (std::size_t c = 0; c < 3; ++c) {
      for (int n = 0; n < counts[c]; ++n) plans.push_back({centered, content::kAllCategories[c]});
    }
  }
  return plans;
}

double normal(RandomStream& rng, double mean, double sd) {
  const double u1 = std::max(rng.uniform01(), 1e-12);
  const double u2 = rng.uniform01();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <typename T>
const T& pick(const std::vector<T>& v, RandomStream& rng) {
  return v[rng.uniform_index(v.size())];
}

std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 32);
  return w;
}

std::string digits(RandomStream& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>('0' + rng.uniform_index(10)));
  return out;
}

std::string worker_id(RandomStream& rng) {
  static constexpr char kAlnum[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string id = "A";
  const auto n = 12 + rng.uniform_index(2);
  for (std::size_t i = 0; i < n; ++i) id.push_back(kAlnum[rng.uniform_index(36)]);
  return id;
}

// Plain words a participant might plausibly pick: letters only, 4-9 long.
bool good_keyword(std::string_view shown) {
  const auto w = content::normalize_word(shown);
  if (w.size() < 4 || w.size() > 9) return false;
  return std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; }) &&
         content::strip_punctuation(shown).size() == w.size();
}

// A password built from ordinary words, of roughly `target` characters.
std::string word_password(RandomStream& rng, std::size_t target) {
  std::string pw = rng.uniform01() < 0.5 ? capitalize(pick(kBaseWords, rng)) : pick(kBaseWords, rng);
  while (pw.size() + 2 < target && rng.uniform01() < 0.5) pw += pick(kBaseWords, rng);
  if (rng.uniform01() < 0.3) pw += pick(kSymbols, rng);
  const std::size_t pad = pw.size() + 1 < target ? target - pw.size() : 1 + rng.uniform_index(2);
  pw += digits(rng, std::min<std::size_t>(pad, 6));
  return pw;
}

std::string keyword_password(RandomStream& rng, const std::vector<std::string>& keywords, int k) {
  std::vector<std::string> chosen(keywords.begin(), keywords.end());
  shuffle(chosen.begin(), chosen.end(), rng);
  chosen.resize(static_cast<std::size_t>(k));
  std::string pw;
  for (const auto& kw : chosen) {
    const auto plain = content::case_fold(content::remove_punctuation(kw));
    const auto form = rng.uniform_index(3);
    pw += form == 0 ? plain : form == 1 ? capitalize(plain) : kw;
  }
  if (rng.uniform01() < 0.4) pw += pick(kSymbols, rng);
  pw += digits(rng, rng.uniform_index(4));
  while (content::utf8_length(pw) < 8) pw += digits(rng, 1);
  return pw;
}

int count_used(const std::string& pw, const std::vector<std::string>& keywords) {
  const auto usage = strength::detect_keyword_usage(pw, keywords);
  return static_cast<int>(std::count_if(usage.flags.begin(), usage.flags.end(),
                                        [](auto f) { return f != strength::KeywordMatch::None; }));
}

std::vector<int> sus_answers(RandomStream& rng, double lean) {
  std::vector<int> sus(10);
  do {
    for (std::size_t i = 0; i < 10; ++i) {
      // Odd items are positive statements, even items negative.
      const double centre = i % 2 == 0 ? 3.0 + lean : 3.0 - lean;
      sus[i] = std::clamp(static_cast<int>(std::lround(normal(rng, centre, 1.1))), 1, 5);
    }
  } while (std::all_of(sus.begin(), sus.end(), [&](int v) { return v == sus[0]; }));
  return sus;
}

// Likert values in 1..5 with an exact total.
std::vector<int> satisfaction_values(RandomStream& rng, std::size_t n, double mean) {
  std::vector<int> v(n);
  for (auto& x : v) x = std::clamp(static_cast<int>(std::lround(normal(rng, mean, 0.9))), 1, 5);
  const int target = static_cast<int>(std::lround(mean * static_cast<double>(n)));
  int sum = 0;
  for (int x : v) sum += x;
  while (sum != target) {
    auto& x = v[rng.uniform_index(n)];
    if (sum < target && x < 5) ++x, ++sum;
    else if (sum > target && x > 1) --x, --sum;
  }
  return v;
}

// n totals with exactly the given sample mean and standard deviation, all >= floor.
std::vector<double> login_times(RandomStream& rng, std::size_t n, double mean, double sd, double floor) {
  for (;;) {
    std::vector<double> raw(n);
    for (auto& x : raw) x = normal(rng, 0.0, 1.0);
    double m = 0;
    for (double x : raw) m += x;
    m /= static_cast<double>(n);
    double ss = 0;
    for (double x : raw) ss += (x - m) * (x - m);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    std::vector<double> out;
    for (double x : raw) out.push_back(mean + sd * (x - m) / s);
    if (*std::min_element(out.begin(), out.end()) >= floor) return out;
  }
}

struct Generator {
  const content::Catalog& catalog;
  flow::FlowConfig config;
  RandomStream rng;
  std::set<std::string> used_passwords;

  // Drives one registration session to Done with the planned choices.
  flow::FlowSession run_session(const std::string& session_id, const std::string& user_id,
                                Condition condition, const CategoryPlan& plan, bool via_search,
                                Millis start) {
    flow::FlowSession s;
    for (int attempt = 0;; ++attempt) {
      const auto seed = keyed_hash(config.server_seed, session_id + "#" + std::to_string(attempt));
      s = flow::start_session(session_id, user_id, condition, seed, start);
      if (s.centered_category == plan.centered) break;
    }
    Millis now = start + 20 * kSecond + static_cast<Millis>(rng.uniform_index(40)) * kSecond;
    flow::advance_intro(s, now);
    now += 3 * kSecond + static_cast<Millis>(rng.uniform_index(8000));
    flow::select_category(s, plan.selected, now, plan.selected != plan.centered);

    const auto page = flow::suggested_items(s, catalog, config);
    std::string item_id;
    if (via_search) {
      std::vector<const content::ContentItem*> off_page;
      for (const auto* item : catalog.items(plan.selected)) {
        if (std::find(page.begin(), page.end(), item) == page.end()) off_page.push_back(item);
      }
      item_id = pick(off_page, rng)->item_id;
    } else {
      item_id = pick(page, rng)->item_id;
    }
    now += 4 * kSecond + static_cast<Millis>(rng.uniform_index(15000));
    flow::select_item(s, catalog, config, item_id, via_search, now);

    while (s.state.kind == flow::StateKind::KeywordSelect) {
      now += 5 * kSecond + static_cast<Millis>(rng.uniform_index(20000));
      if (rng.uniform01() < 0.2) {
        flow::shuffle_excerpt(s, catalog, now);
        continue;
      }
      const auto& words = s.current_excerpt->words;
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (!good_keyword(words[i])) continue;
        const auto norm = content::normalize_word(words[i]);
        const bool repeat = std::any_of(s.keywords.begin(), s.keywords.end(), [&](const auto& k) {
          const auto other = content::normalize_word(k);
          return other.find(norm) != std::string::npos || norm.find(other) != std::string::npos;
        });
        if (!repeat) candidates.push_back(i);
      }
      if (candidates.empty()) {
        flow::shuffle_excerpt(s, catalog, now);
        continue;
      }
      const auto pos = pick(candidates, rng);
      flow::select_keyword(s, catalog, words[pos], pos, now);
    }
    const bool early = rng.uniform01() < 0.25;
    now += early ? 1200 + static_cast<Millis>(rng.uniform_index(1500))
                 : flow::effective_splash_duration(config);
    flow::dismiss_splash(s, early, now);
    now += 20 * kSecond + static_cast<Millis>(rng.uniform_index(40000));
    flow::complete(s, now);
    return s;
  }

  std::string password_for(const ParticipantExport& rec, int keywords_to_use, double target_mean,
                           double target_sd) {
    for (;;) {
      std::string pw;
      if (keywords_to_use > 0) {
        pw = keyword_password(rng, rec.keywords, keywords_to_use);
      } else {
        const auto target = static_cast<std::size_t>(
            std::clamp(std::lround(normal(rng, target_mean, target_sd)), 8L, 22L));
        pw = word_password(rng, target);
      }
      if (content::utf8_length(pw) < 8 || used_passwords.count(pw)) continue;
      if (!rec.keywords.empty() && count_used(pw, rec.keywords) != keywords_to_use) continue;
      if (strength::is_common_password(pw)) continue;
      used_passwords.insert(pw);
      return pw;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic study export"};
  std::string catalog_dir, out_path, meta_path;
  std::uint64_t server_seed = 20210301;
  app.add_option("--catalog", catalog_dir, "catalog directory")->required();
  app.add_option("--out", out_path, "output JSONL")->required();
  app.add_option("--meta", meta_path, "output metadata JSON")->required();
  app.add_option("--seed", server_seed, "server seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto catalog = content::load_catalog(catalog_dir);
    Generator gen{catalog, {}, RandomStream(server_seed ^ 0x5eedf1c5ULL), {}};
    gen.config.server_seed = server_seed;
    auto& rng = gen.rng;

    // Item-page acceptance: how many in each selected category used search.
    std::map<Category, int> searches = {
        {Category::Books, 1}, {Category::Movies, 15}, {Category::Images, 8}};

    auto plans = category_plans();
    shuffle(plans.begin(), plans.end(), rng);
    std::vector<bool> via_search(plans.size(), false);
    {
      std::vector<std::size_t> idx(plans.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      shuffle(idx.begin(), idx.end(), rng);
      for (auto i : idx) {
        auto& left = searches[plans[i].selected];
        if (left > 0) via_search[i] = true, --left;
      }
    }

    // Keyword use among PiXi (83) and PiXi-Hints (84 incl. the legacy record).
    auto usage_list = [&](std::size_t n, int one, int two, int three) {
      std::vector<int> v(n, 0);
      std::size_t i = 0;
      for (int k = 0; k < one; ++k) v[i++] = 1;
      for (int k = 0; k < two; ++k) v[i++] = 2;
      for (int k = 0; k < three; ++k) v[i++] = 3;
      shuffle(v.begin(), v.end(), rng);
      return v;
    };
    const auto pixi_usage = usage_list(83, 7, 12, 7);
    auto hints_usage = usage_list(83, 11, 14, 14);

    std::vector<ParticipantExport> out;
    std::size_t plan_i = 0;
    int serial = 0;
    auto next_identity = [&](ParticipantExport& rec, Condition c) {
      ++serial;
      rec.username = "participant" + std::to_string(1000 + serial);
      rec.worker_id = worker_id(rng);
      rec.condition = c;
      rec.digest_algorithm = "argon2id";
      rec.created_at = kStudyStart + static_cast<Millis>(serial) * 37 * 60 * kSecond;
    };

    const std::map<Condition, std::pair<double, double>> length_targets = {
        {Condition::Control, {8.2, 1.5}},
        {Condition::PiXi, {8.6, 2.2}},
        {Condition::PiXiHints, {8.9, 2.4}}};

    for (int i = 0; i < 71; ++i) {
      ParticipantExport rec;
      next_identity(rec, Condition::Control);
      const auto [m, sd] = length_targets.at(Condition::Control);
      rec.password_plain = gen.password_for(rec, 0, m, sd);
      rec.registration_duration_s = 25.0 + static_cast<double>(rng.uniform_index(60));
      out.push_back(std::move(rec));
    }

    for (auto condition : {Condition::PiXi, Condition::PiXiHints}) {
      const auto& usage = condition == Condition::PiXi ? pixi_usage : hints_usage;
      for (std::size_t i = 0; i < 83; ++i, ++plan_i) {
        ParticipantExport rec;
        next_identity(rec, condition);
        const auto session_id = "reg-" + rec.username;
        const auto s = gen.run_session(session_id, rec.worker_id, condition, plans[plan_i],
                                       via_search[plan_i], rec.created_at);
        const auto snap = flow::snapshot(s, catalog);
        rec.category = snap.category;
        rec.item_id = snap.item_id;
        rec.title = snap.title;
        rec.keywords = snap.keywords;
        rec.nudge_events = s.events;
        rec.registration = records::RegistrationRecord{session_id, s.seed, s.started_at,
                                                       s.updated_at, s.actions};
        rec.registration_duration_s = static_cast<double>(s.updated_at - s.started_at) / 1000.0;
        const auto [m, sd] = length_targets.at(condition);
        rec.password_plain = gen.password_for(rec, usage[i], m, sd);
        out.push_back(std::move(rec));
      }
    }

    // An older export row: events only, no positioning telemetry, no action log.
    {
      ParticipantExport rec;
      next_identity(rec, Condition::PiXiHints);
      const auto images = catalog.items(Category::Images);
      const auto& item = *images.front();
      rec.category = Category::Images;
      rec.item_id = item.item_id;
      rec.title = item.title;
      for (const auto& w : item.text_source) {
        if (rec.keywords.size() == 3) break;
        if (good_keyword(w) &&
            std::find(rec.keywords.begin(), rec.keywords.end(), content::strip_punctuation(w)) ==
                rec.keywords.end()) {
          rec.keywords.push_back(content::strip_punctuation(w));
        }
      }
      rec.nudge_events = {
          flow::NudgeEvent{flow::EventKind::ItemSuggested, true,
                           {{"category", "images"}, {"item_id", item.item_id}, {"via_search", "false"}},
                           rec.created_at + 30 * kSecond},
          flow::NudgeEvent{flow::EventKind::SplashShown, true, {}, rec.created_at + 90 * kSecond}};
      rec.registration_duration_s = 121.0;
      const auto [m, sd] = length_targets.at(Condition::PiXiHints);
      rec.password_plain = gen.password_for(rec, 0, m, sd);
      out.push_back(std::move(rec));
    }

    // Session-1 questionnaire.
    const std::map<Condition, double> satisfaction_mean = {
        {Condition::Control, 2.9}, {Condition::PiXi, 3.95}, {Condition::PiXiHints, 4.05}};
    const std::map<Condition, double> sus_lean = {
        {Condition::Control, 0.25}, {Condition::PiXi, 0.15}, {Condition::PiXiHints, 0.25}};
    for (auto c : flow::kAllConditions) {
      std::vector<ParticipantExport*> group;
      for (auto& r : out) {
        if (r.condition == c) group.push_back(&r);
      }
      const auto sat = satisfaction_values(rng, group.size(), satisfaction_mean.at(c));
      for (std::size_t i = 0; i < group.size(); ++i) {
        records::Questionnaire q;
        q.sus = sus_answers(rng, sus_lean.at(c));
        q.satisfaction = sat[i];
        q.attention = rng.uniform01() < 0.7 ? "strongly disagree" : "disagree";
        q.submitted_at = group[i]->created_at + 5 * 60 * kSecond;
        group[i]->questionnaire = q;
      }
    }

    // Session-2 logins: who came back, how many succeeded, total time per login.
    struct LoginPlan {
      Condition condition;
      std::size_t n, successes;
      double mean, sd, floor;
    };
    const std::vector<LoginPlan> login_plans = {
        {Condition::Control, 10, 7, 14.87, 7.38, 3.0},
        {Condition::PiXi, 9, 8, 27.68, 22.1, 4.0},
        {Condition::PiXiHints, 12, 10, 139.5, 36.08, 40.0}};
    for (const auto& lp : login_plans) {
      std::vector<ParticipantExport*> group;
      for (auto& r : out) {
        if (r.condition == lp.condition) group.push_back(&r);
      }
      shuffle(group.begin(), group.end(), rng);
      group.resize(lp.n);
      const auto totals = login_times(rng, lp.n, lp.mean, lp.sd, lp.floor);
      for (std::size_t i = 0; i < lp.n; ++i) {
        auto& rec = *group[i];
        const bool success = i < lp.successes;
        const int attempts = success ? 1 + static_cast<int>(rng.uniform_index(2)) : 3;
        Millis at = rec.created_at + 7 * kDay + static_cast<Millis>(rng.uniform_index(86400)) * kSecond;
        if (lp.condition == Condition::PiXiHints) {
          records::HintRecallRecord hint;
          hint.session_id = "hint-" + rec.username;
          hint.started_at = at;
          const int recall = success ? 2 + static_cast<int>(rng.uniform_index(2))
                                     : static_cast<int>(rng.uniform_index(2));
          for (int k = 0; k < 3; ++k) {
            hint.keywords.push_back(k < recall ? rec.keywords[static_cast<std::size_t>(k)]
                                               : pick(kBaseWords, rng));
          }
          hint.recall_count = recall;
          rec.hint_recalls.push_back(hint);
        }
        double remaining = totals[i];
        for (int a = 1; a <= attempts; ++a) {
          const double d = a == attempts ? remaining : remaining * (0.3 + 0.3 * rng.uniform01());
          remaining -= d;
          at += static_cast<Millis>(std::llround(d * 1000.0));
          rec.login_attempts.push_back(
              records::LoginAttemptRecord{1, a, success && a == attempts, d, at});
        }
      }
    }

    // Every record is meant to survive cleaning.
    const auto cleaned = study::clean(out, study::StudyConfig{});
    if (cleaned.removed_count() != 0) {
      std::cerr << "generator produced records that cleaning removes\n";
      return 1;
    }

    std::ofstream jsonl(out_path, std::ios::binary);
    records::write_jsonl(jsonl, out);
    nlohmann::ordered_json meta;
    meta["server_seed"] = server_seed;
    meta["catalog"] = "data/catalog";
    meta["records"] = out.size();
    std::ofstream(meta_path, std::ios::binary) << meta.dump(2) << "\n";
    std::cout << "wrote " << out.size() << " records\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
