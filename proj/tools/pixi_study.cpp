// Offline analysis of exported study data: cleaning, the report, and
// standalone hypothesis tests.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pixi/common/error.hpp"
#include "pixi/records/participant.hpp"
#include "pixi/study/cleaning.hpp"
#include "pixi/study/config.hpp"
#include "pixi/study/report.hpp"
#include "pixi/study/stats.hpp"

using namespace pixi;
using json = nlohmann::ordered_json;

namespace {

std::vector<records::ParticipantExport> load_records(const std::string& path) {
  auto result = records::read_jsonl_file(path);
  for (const auto& issue : result.issues) {
    std::cerr << path << ":" << issue.line << ": skipped: " << issue.message << "\n";
  }
  return std::move(result.records);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

std::vector<double> doubles(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("spec needs '") + key + "'");
  return j.at(key).get<std::vector<double>>();
}

json run_test(const std::string& kind, const json& spec) {
  if (kind == "anova") {
    if (spec.contains("groups")) {
      const auto groups = spec.at("groups").get<std::vector<std::vector<double>>>();
      return study::to_json(study::anova_oneway(groups));
    }
    const auto means = doubles(spec, "means");
    const auto stds = doubles(spec, "stds");
    const auto ns = doubles(spec, "ns");
    return study::to_json(study::anova_from_summary(means, stds, ns));
  }
  if (kind == "chi2") {
    return study::to_json(study::chi_square(spec.at("table").get<std::vector<std::vector<double>>>()));
  }
  if (kind == "holm") {
    const auto ps = doubles(spec, "p_values");
    const double alpha = spec.value("alpha", 0.05);
    const auto holm = study::holm_bonferroni(ps, alpha);
    json j;
    j["alpha"] = alpha;
    j["p_sorted"] = holm.p_sorted;
    j["order"] = holm.order;
    j["thresholds"] = holm.thresholds;
    j["reject_sorted"] = holm.reject_sorted;
    j["reject"] = holm.reject;
    return j;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown test '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PiXi study analysis"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "analysis config (JSON)");

  std::string input, out_path, removed_path;
  auto* clean_cmd = app.add_subcommand("clean", "remove weakly-committed, multi-identity and inattentive records");
  clean_cmd->add_option("--input", input, "export JSONL")->required();
  clean_cmd->add_option("--out", out_path, "valid records JSONL")->required();
  clean_cmd->add_option("--removed", removed_path, "removed records JSON");

  std::string json_path, md_path;
  auto* report_cmd = app.add_subcommand("report", "compute the study report");
  report_cmd->add_option("--input", input, "cleaned JSONL")->required();
  report_cmd->add_option("--json", json_path, "report JSON output")->required();
  report_cmd->add_option("--markdown", md_path, "report Markdown output");

  std::string test_kind, spec_path;
  auto* test_cmd = app.add_subcommand("test", "run one hypothesis test on a JSON spec");
  test_cmd->add_option("kind", test_kind, "anova | chi2 | holm")
      ->required()
      ->check(CLI::IsMember({"anova", "chi2", "holm"}));
  test_cmd->add_option("--spec", spec_path, "test input JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = config_path.empty() ? study::StudyConfig{} : study::load_config(config_path);

    if (*clean_cmd) {
      const auto records = load_records(input);
      const auto cleaned = study::clean(records, config);
      std::ofstream out(out_path, std::ios::binary);
      records::write_jsonl(out, cleaned.valid);
      if (!removed_path.empty()) {
        json j;
        j["summary"] = study::cleaning_summary(cleaned);
        j["removed"] = study::removed_to_json(cleaned);
        write_text(removed_path, j.dump(2) + "\n");
      }
      std::cout << cleaned.valid.size() << " valid, " << cleaned.removed_count() << " removed\n";
    } else if (*report_cmd) {
      const auto doc = study::report(load_records(input), config);
      write_text(json_path, doc.dump(2) + "\n");
      if (!md_path.empty()) write_text(md_path, study::render_markdown(doc));
    } else if (*test_cmd) {
      std::ifstream in(spec_path);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + spec_path);
      std::cout << run_test(test_kind, json::parse(in)).dump(2) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
